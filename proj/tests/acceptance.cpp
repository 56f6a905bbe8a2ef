// Acceptance runner. `acceptance` runs every criterion, `acceptance N` runs one.
// Prints one PASS/FAIL line per criterion; exit status is nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracperiod/fracperiod.hpp"

using namespace fracperiod;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

bool has_point(const std::vector<cplx>& pts, cplx want, double rel) {
    for (auto p : pts)
        if (std::abs(p - want) <= rel * std::abs(want)) return true;
    return false;
}

std::string g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

void criterion_1(Outcome& o) {
    const auto op = DiagonalOperator::dirichlet_laplacian_1d(std::pow(pi, 2.0 / 3.0), 5);
    const auto s = sigma_i(op, FracOrder(2.0 / 3.0), false);
    o.require(s.points.size() == 5, "sigma_i has 5 points");
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        const cplx want(0.0, -pi * n * n * n);
        double best = std::numeric_limits<double>::infinity();
        for (auto p : s.points) best = std::min(best, std::abs(p - want) / std::abs(want));
        worst = std::max(worst, best);
    }
    o.require(worst <= 1e-12, "per-point relative error <= 1e-12");
    const auto u = exp_sigma(s);
    o.require(u.points.size() == 2 && has_point(u.points, 1.0, 1e-12) && has_point(u.points, -1.0, 1e-12),
              "exp_sigma = {1, -1}");
    o.detail << "max rel err " << g(worst) << ", |exp_sigma| " << u.points.size();
}

void criterion_2(Outcome& o) {
    const auto op = DiagonalOperator::dirichlet_laplacian_1d(std::pow(2.0 * pi, 0.4), 3);
    const auto s = sigma_i(op, FracOrder(0.4), true);
    o.require(s.points.size() == 6, "sigma_i has 6 points");
    double worst = 0.0;
    for (double k : {2.0, 64.0, 486.0})
        for (double sign : {1.0, -1.0}) {
            const cplx want(0.0, sign * k * pi);
            double best = std::numeric_limits<double>::infinity();
            for (auto p : s.points) best = std::min(best, std::abs(p - want) / std::abs(want));
            worst = std::max(worst, best);
        }
    o.require(worst <= 1e-12, "points at +-2pi i, +-64pi i, +-486pi i");
    const auto u = exp_sigma(s);
    o.require(u.points.size() == 1 && has_point(u.points, 1.0, 1e-12), "exp_sigma = {1}");
    const std::vector<double> f{2.0 * pi};
    o.require(katznelson_tzafriri_hypothesis(s, f, PeriodicityType::Periodic), "KT periodic hypothesis");
    o.detail << "max rel err " << g(worst) << ", |exp_sigma| " << u.points.size();
}

void criterion_3(Outcome& o) {
    double exp_err = 0.0;
    for (int i = -60; i <= 10; ++i) {
        const double x = 0.5 * i;
        exp_err = std::max(exp_err, std::abs(mittag_leffler(MLParams{1.0, 1.0}, x) - std::exp(x)) / std::exp(x));
    }
    o.require(exp_err <= 1e-12, "E_{1,1}(x) = e^x");

    double cos_err = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double t = 0.01 * i;
        cos_err = std::max(cos_err, std::abs(mittag_leffler(MLParams{2.0, 1.0}, -t * t) - std::cos(t)));
    }
    o.require(cos_err <= 1e-10, "E_{2,1}(-t^2) = cos t");

    double zero_err = 0.0;
    for (double a : {0.1, 0.3, 0.5, 2.0 / 3.0, 0.9, 1.0, 1.5, 2.0})
        for (double b : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, a})
            zero_err = std::max(zero_err, std::abs(mittag_leffler(MLParams{a, b}, 0.0) * std::tgamma(b) - 1.0));
    o.require(zero_err <= 1e-12, "E(0) Gamma(beta) = 1");

    // A regime that refuses z (DomainError) does not cover it, so there is no overlap to compare.
    double overlap = 0.0;
    int compared = 0;
    auto try_regime = [](const MLParams& p, cplx z, Regime r) -> std::optional<cplx> {
        try {
            return mittag_leffler(p, z, r);
        } catch (const DomainError&) {
            return std::nullopt;
        }
    };
    for (double a : {0.3, 0.5, 0.7, 0.9})
        for (double b : {1.0, a}) {
            const MLParams p{a, b};
            for (int i = -500; i <= 50; ++i) {
                const cplx z(0.1 * i, 0.0);
                const auto c = try_regime(p, z, Regime::Contour);
                if (!c) continue;
                for (auto r : {Regime::Series, Regime::Asymptotic}) {
                    if (const auto s = try_regime(p, z, r)) {
                        overlap = std::max(overlap, std::abs(*s - *c) / std::max(1.0, std::abs(*s)));
                        ++compared;
                    }
                }
            }
        }
    o.require(compared >= 500, "at least 500 overlapping evaluations");
    o.require(overlap <= 1e-7, "regime overlap");
    o.detail << "exp " << g(exp_err) << ", cos " << g(cos_err) << ", zero " << g(zero_err) << ", overlap "
             << g(overlap) << " over " << compared << " points";
}

void criterion_4(Outcome& o) {
    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.7, 0.9})
        for (double z : {0.0, 1.0, 5.0}) worst = std::max(worst, subordination_identity_residual(a, z, 8192));
    o.require(worst <= 1e-5, "subordination residual <= 1e-5");
    o.detail << "max residual " << g(worst);
}

void criterion_5(Outcome& o) {
    for (double a : {0.3, 0.5, 0.8}) {
        auto residual = [&](double dt) {
            const auto u = SampledFunction::scalar(TimeGrid::covering(1.0, dt), [](double t) { return t * t; });
            return inversion_residual(FracOrder(a), u);
        };
        const double r1 = residual(1e-3), r2 = residual(5e-4);
        o.require(r1 <= 5e-3, "residual <= 5e-3 at alpha " + g(a));
        o.require(r1 >= 1.8 * r2, "halving dt gains 1.8 at alpha " + g(a));
        o.detail << "alpha " << g(a) << ": " << g(r1) << " -> " << g(r2) << " (x" << g(r1 / r2) << ")  ";
    }
}

void criterion_6(Outcome& o) {
    const auto grid = TimeGrid::covering(5.0, 1e-3);
    const auto op = DiagonalOperator::explicit_eigenvalues({-1.0});
    const FracOrder half(0.5);

    const auto zero = ForcingSpec::zero(1);
    const std::vector<cplx> one{1.0};
    const auto relax = solve(half, op, one, zero, grid);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        // E_{1/2,1}(-sqrt t) = e^t erfc(sqrt t), evaluated in long double
        const long double t = grid.t(k);
        const long double ref = std::exp(t) * std::erfc(std::sqrt(t));
        err = std::max(err, static_cast<double>(std::abs(static_cast<long double>(relax.modes[0][k].real()) - ref)));
        err = std::max(err, std::abs(relax.modes[0][k].imag()));
    }
    o.require(err <= 1e-6, "relaxation max error <= 1e-6");
    const double res1 = mild_residual(half, op, relax, zero.sample(grid));
    o.require(res1 <= 5e-3, "relaxation mild residual <= 5e-3");

    const auto ones = ForcingSpec::uniform(1, {{0.0, 1.0}});
    const std::vector<cplx> x0{0.0};
    const auto forced = solve(half, op, x0, ones, grid);
    double cerr = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double ref = 1.0 - mittag_leffler(MLParams{0.5, 1.0}, -std::sqrt(grid.t(k)));
        cerr = std::max(cerr, std::abs(forced.modes[0][k] - ref));
    }
    o.require(cerr <= 1e-3, "constant forcing max error <= 1e-3");
    const double res2 = mild_residual(half, op, forced, ones.sample(grid));
    o.require(res2 <= 5e-3, "constant forcing mild residual <= 5e-3");
    o.detail << "relaxation err " << g(err) << " res " << g(res1) << ", constant err " << g(cerr) << " res "
             << g(res2);
}

void criterion_7(Outcome& o) {
    const auto grid = TimeGrid::covering(50.0, 1e-2);
    std::vector<cplx> ones(grid.size(), 1.0), zeros(grid.size(), 0.0), cosine(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) cosine[k] = std::cos(2.0 * pi * grid.t(k));
    o.require(f_alpha_norm_check(FracOrder(0.5), 1.0, ones, grid), "f = 1, a = 1, alpha = 1/2");
    o.require(f_alpha_norm_check(FracOrder(0.5), 1.0, zeros, grid), "f = 0");
    o.require(f_alpha_norm_check(FracOrder(2.0 / 3.0), 2.0, cosine, grid), "f = cos 2 pi t, a = 2, alpha = 2/3");

    const auto u = f_alpha(FracOrder(0.5), 1.0, ones, grid);
    double sup = 0.0;
    for (auto v : u) sup = std::max(sup, std::abs(v));
    const double closed = 1.0 - mittag_leffler(MLParams{0.5, 1.0}, -std::sqrt(50.0));
    o.require(sup >= 1.0 - 1e-3 && sup <= 1.0, "sup F_alpha 1 on [0, 50] within 1e-3 of 1/a");
    o.detail << "sup F_alpha 1 = " << g(sup) << " (closed form " << g(closed) << ")";
}

Trajectory solve_config(const ScenarioConfig& c, const std::vector<cplx>& x0) {
    return solve(FracOrder(c.alpha), c.make_operator(), x0, c.forcing, c.grid(), 4);
}

// Writes cfg to a temporary directory, runs cmd_classify there and returns the verdict.
std::string classify_via_cli(const ScenarioConfig& cfg, const std::string& tag) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / ("fracperiod_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << to_json(cfg).dump(2);
    std::ostringstream out, err;
    const int code = cli::cmd_classify((dir / "config.json").string(), dir.string(), out, err);
    if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
    std::ifstream in(dir / "report.json");
    return json::parse(in).at("verdict").get<std::string>();
}

void criterion_8(Outcome& o) {
    const auto cfg = bundled::example_2_k2();
    const std::vector<std::vector<cplx>> initial{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}};
    const std::vector<double> windows{2.0, 6.0, 10.0};
    for (std::size_t i = 0; i < initial.size(); ++i) {
        const auto prof = periodicity_profile(solve_config(cfg, initial[i]), 0.0, windows);
        o.require(decay_verdict(prof, 0.5, 1e-6), "decay for initial condition " + std::to_string(i));
        o.detail << "x0#" << i << " d=(" << g(prof.residuals[0]) << "," << g(prof.residuals[1]) << ","
                 << g(prof.residuals[2]) << ") ";
    }
    const auto verdict = classify_via_cli(cfg, "ex2");
    o.require(verdict == "AllAsymptotic1Periodic", "cmd_classify verdict");
    o.detail << "verdict " << verdict;
}

void criterion_9(Outcome& o) {
    const std::vector<double> windows{2.0, 6.0, 10.0};
    const auto cfg = bundled::example_3_18();
    const auto prof = periodicity_profile(solve_config(cfg, std::vector<cplx>(5, 0.0)), 0.0, windows);
    o.require(decay_verdict(prof, 0.5, 1e-6), "x0 = 0 profile decays");
    const auto verdict = classify_via_cli(cfg, "ex318");
    o.require(verdict == "MasseraExistence", "Massera verdict");

    const auto anti = bundled::example_3_18_anti();
    const auto op = anti.make_operator();
    const auto traj = solve_config(anti, std::vector<cplx>(3, 0.0));
    const auto aprof = periodicity_profile(traj, pi, windows);
    o.require(decay_verdict(aprof, 0.5, 1e-6), "Bloch p = pi profile decays");
    const auto cl = classify_scenario(op, FracOrder(anti.alpha), anti.forcing, traj, anti.classify);
    o.require(cl.flags.kt_anti, "anti-periodic hypothesis holds");
    o.require(cl.verdict == Verdict::AllAsymptoticAnti1Periodic, "anti-periodic verdict");
    o.detail << "d=(" << g(prof.residuals[0]) << "," << g(prof.residuals[1]) << "," << g(prof.residuals[2]) << ") "
             << verdict << "; anti d=(" << g(aprof.residuals[0]) << "," << g(aprof.residuals[1]) << ","
             << g(aprof.residuals[2]) << ") " << to_string(cl.verdict);
}

void criterion_10(Outcome& o) {
    const auto cfg = bundled::off_lattice();
    const auto op = cfg.make_operator();
    o.require(op.exponentially_stable(), "operator is stable");
    const auto traj = solve_config(cfg, cfg.initial);
    const auto prof = periodicity_profile(traj, 0.0, cfg.classify.windows);
    o.require(!decay_verdict(prof, cfg.classify.ratio, cfg.classify.floor), "p = 0 profile does not decay");
    const auto cl = classify_scenario(op, FracOrder(cfg.alpha), cfg.forcing, traj, cfg.classify);
    o.require(cl.verdict == Verdict::Inconclusive, "verdict Inconclusive");
    o.detail << "d=(" << g(prof.residuals[0]) << "," << g(prof.residuals[1]) << "," << g(prof.residuals[2]) << ") "
             << to_string(cl.verdict);
}

struct Criterion {
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion> kCriteria{
    {"example 3.18 spectral set", 1.0, criterion_1},
    {"example 2 spectral set", 1.0, criterion_2},
    {"Mittag-Leffler identities", 5.0, criterion_3},
    {"subordination identities", 10.0, criterion_4},
    {"fractional calculus inversion", 60.0, criterion_5},
    {"scalar mild solution", 60.0, criterion_6},
    {"convolution bound", 60.0, criterion_7},
    {"end-to-end Katznelson-Tzafriri", 30.0, criterion_8},
    {"end-to-end Massera and anti-periodic twin", 60.0, criterion_9},
    {"negative control", 60.0, criterion_10},
};

bool run(std::size_t n) {
    const auto& c = kCriteria[n - 1];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " threw: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.budget_s, "runtime under " + g(c.budget_s) + " s");
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << c.name << ", " << g(secs)
              << " s): " << o.detail.str() << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::cerr << "usage: acceptance [N]\n";
        return 2;
    }
    if (argc == 2) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(kCriteria.size())) {
            std::cerr << "criterion must be 1.." << kCriteria.size() << "\n";
            return 2;
        }
        return run(static_cast<std::size_t>(n)) ? 0 : 1;
    }
    bool all = true;
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) all = run(n) && all;
    return all ? 0 : 1;
}
