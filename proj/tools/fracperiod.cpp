#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracperiod/cli.hpp"

int main(int argc, char** argv) {
    using namespace fracperiod;
    CLI::App app{"Caputo fractional evolution equations: Mittag-Leffler values, mild solutions, periodicity verdicts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    double alpha = 1.0, beta = 1.0;
    std::string z;
    bool allow_complex = false;
    auto* ml = app.add_subcommand("ml", "print E_{alpha,beta}(z)");
    ml->add_option("--alpha", alpha, "order alpha")->required();
    ml->add_option("--beta", beta, "second parameter beta")->required();
    ml->add_option("--z", z, "argument: x, yi or x+yi")->required()->allow_extra_args(false);
    ml->add_flag("--complex", allow_complex, "accept complex z (|z| <= 10 only)");

    std::string config, out_dir = ".";
    auto* solve = app.add_subcommand("solve", "solve a scenario, write trajectory.csv and report.json");
    solve->add_option("--config", config, "scenario JSON")->required();
    solve->add_option("--out", out_dir, "output directory");

    auto* classify = app.add_subcommand("classify", "solve and classify a scenario, write report.json");
    classify->add_option("--config", config, "scenario JSON")->required();
    classify->add_option("--out", out_dir, "output directory");

    std::string branch = "lifted";
    auto* selftest = app.add_subcommand("selftest", "run the built-in reference checks");
    selftest->add_option("--branch", branch, "branch convention for lambda^alpha")
        ->check(CLI::IsMember({"lifted", "principal"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }

    if (ml->parsed()) return cli::cmd_ml(alpha, beta, z, allow_complex, std::cout, std::cerr);
    if (solve->parsed()) return cli::cmd_solve(config, out_dir, std::cout, std::cerr);
    if (classify->parsed()) return cli::cmd_classify(config, out_dir, std::cout, std::cerr);
    const auto b = branch == "principal" ? BranchConvention::Principal : BranchConvention::Lifted;
    return cli::cmd_selftest(b, std::cout, std::cerr);
}
