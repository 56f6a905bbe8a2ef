#pragma once

// Command implementations behind the fracperiod executable. Each returns the
// process exit code: 0 ok, 1 config error, 2 numeric domain error, 3 selftest
// failure.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "fracperiod/asymptotic_analysis.hpp"
#include "fracperiod/bundled.hpp"
#include "fracperiod/errors.hpp"
#include "fracperiod/mild_solver.hpp"
#include "fracperiod/operator_model.hpp"
#include "fracperiod/report.hpp"
#include "fracperiod/scenario.hpp"
#include "fracperiod/special_functions.hpp"

namespace fracperiod::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDomainError = 2, kSelftestFailure = 3 };

/// FRACPERIOD_THREADS; unset, empty or 0 means sequential.
inline unsigned threads_from_env() {
    const char* v = std::getenv("FRACPERIOD_THREADS");
    if (!v || !*v) return 0;
    unsigned n = 0;
    const char* end = v + std::char_traits<char>::length(v);
    auto [p, ec] = std::from_chars(v, end, n);
    if (ec != std::errc() || p != end) throw ConfigError("FRACPERIOD_THREADS", "expected a nonnegative integer");
    return n;
}

inline std::string shortest(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return shortest(z.real());
    std::string s = shortest(z.real());
    if (!std::signbit(z.imag())) s += '+';
    return s + shortest(z.imag()) + "i";
}

/// Parses "x", "yi", "x+yi", "x-yi". Returns nullopt on malformed input.
inline std::optional<cplx> parse_complex(const std::string& text) {
    auto number = [](std::string_view s, double& out) {
        if (s.empty()) return false;
        if (s.front() == '+') s.remove_prefix(1);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && p == s.data() + s.size();
    };
    std::string_view s(text);
    if (s.empty()) return std::nullopt;
    if (s.back() != 'i') {
        double x;
        if (!number(s, x)) return std::nullopt;
        return cplx(x, 0.0);
    }
    s.remove_suffix(1);
    // split at the last sign that is not a leading sign or an exponent sign
    std::size_t cut = std::string_view::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    double re = 0.0, im = 0.0;
    std::string_view im_part = cut == std::string_view::npos ? s : s.substr(cut);
    if (cut != std::string_view::npos && !number(s.substr(0, cut), re)) return std::nullopt;
    if (im_part == "" || im_part == "+")
        im = 1.0;
    else if (im_part == "-")
        im = -1.0;
    else if (!number(im_part, im))
        return std::nullopt;
    return cplx(re, im);
}

/// Maps the library's exception types onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DimensionMismatch& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const OffGridShiftError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomainError;
    } catch (const OverflowError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

inline int cmd_ml(double alpha, double beta, const std::string& z_text, bool allow_complex, std::ostream& out,
                  std::ostream& err) {
    return guarded(err, [&] {
        const auto z = parse_complex(z_text);
        if (!z) throw ConfigError("--z", "cannot parse '" + z_text + "' (expected x, yi or x+yi)");
        if (z->imag() != 0.0) {
            if (!allow_complex)
                throw DomainError("complex z = " + z_text + " needs --complex (supported only in the series regime |z| <= " +
                                  shortest(ml::kSeriesRadius) + ")");
            if (std::abs(*z) > ml::kSeriesRadius)
                throw DomainError("complex z = " + z_text + " has |z| > " + shortest(ml::kSeriesRadius) +
                                  ", outside the series regime");
        }
        const MLParams p{alpha, beta};
        const cplx v = mittag_leffler(p, *z);
        out << format_complex(z->imag() == 0.0 ? cplx(v.real(), 0.0) : v) << "\n";
        return static_cast<int>(kOk);
    });
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

inline void write_outputs(const std::string& out_dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());
    for (const auto& [name, content] : files) write_file(std::filesystem::path(out_dir) / name, content);
}

struct Solved {
    DiagonalOperator op;
    Trajectory traj;
    double residual;
};

inline Solved run_solver(const ScenarioConfig& cfg, unsigned threads) {
    const auto op = cfg.make_operator();
    const auto grid = cfg.grid();
    const FracOrder alpha(cfg.alpha);
    auto traj = solve(alpha, op, cfg.initial, cfg.forcing, grid, threads);
    const double res = mild_residual(alpha, op, traj, cfg.forcing.sample(grid));
    return {op, std::move(traj), res};
}

}  // namespace detail

inline int cmd_solve(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                     std::ostream& err) {
    return guarded(err, [&] {
        const unsigned threads = threads_from_env();
        const auto cfg = load_scenario(config_path);
        validate(cfg, false);
        const auto s = detail::run_solver(cfg, threads);
        const auto report = solve_report(cfg, s.traj, s.residual);
        detail::write_outputs(out_dir, {{"trajectory.csv", trajectory_csv(s.traj)}, {"report.json", report.dump(2) + "\n"}});
        out << "modes " << s.op.size() << ", steps " << s.traj.grid.n_steps << ", mild residual "
            << shortest(s.residual) << "\n";
        return static_cast<int>(kOk);
    });
}

inline int cmd_classify(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                        std::ostream& err) {
    return guarded(err, [&] {
        unsigned threads = threads_from_env();
        auto cfg = load_scenario(config_path);
        validate(cfg, true);
        cfg.classify.threads = threads;
        const auto s = detail::run_solver(cfg, threads);
        const auto c = classify_scenario(s.op, FracOrder(cfg.alpha), cfg.forcing, s.traj, cfg.classify);
        const auto freqs = cfg.forcing.declared_spectrum();
        const auto fourier = fourier_diagnostic(s.traj, freqs, cfg.classify.windows);
        const auto report = classify_report(cfg, s.traj, s.residual, c, fourier);
        detail::write_outputs(out_dir, {{"report.json", report.dump(2) + "\n"}});
        out << "verdict " << to_string(c.verdict) << "\n";
        return static_cast<int>(kOk);
    });
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline bool rel_close(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::abs(ref); }

inline bool same_points(const std::vector<cplx>& got, const std::vector<cplx>& want, double rel_tol) {
    if (got.size() != want.size()) return false;
    std::vector<bool> used(got.size(), false);
    for (const auto& w : want) {
        bool found = false;
        for (std::size_t i = 0; i < got.size() && !found; ++i) {
            if (!used[i] && std::abs(got[i] - w) <= rel_tol * std::abs(w) + 1e-300) used[i] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

inline std::string describe_points(const std::vector<cplx>& pts) {
    std::string s = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + format_complex(pts[i]);
    return s + "}";
}

}  // namespace detail

/// Reference checks: the two worked examples' spectral sets and verdicts
/// plus closed-form special-function values.
inline std::vector<SelftestRow> run_selftest(BranchConvention branch, unsigned threads = 0) {
    using std::numbers::pi;
    std::vector<SelftestRow> rows;
    auto row = [&](std::string name, const std::function<std::pair<bool, std::string>()>& check) {
        SelftestRow r{std::move(name), false, {}};
        try {
            std::tie(r.pass, r.detail) = check();
        } catch (const std::exception& e) {
            r.detail = std::string("threw: ") + e.what();
        }
        rows.push_back(std::move(r));
    };

    const auto ex318 = bundled::example_3_18();
    const auto ex2 = bundled::example_2_k2();

    row("example-3.18-sigma", [&] {
        const auto s = sigma_i(ex318.make_operator(), FracOrder(ex318.alpha), false, branch);
        std::vector<cplx> want;
        for (int n = 1; n <= 5; ++n) want.emplace_back(0.0, -pi * n * n * n);
        return std::pair{detail::same_points(s.points, want, 1e-12), detail::describe_points(s.points)};
    });
    row("example-3.18-exp-sigma", [&] {
        const auto u = exp_sigma(sigma_i(ex318.make_operator(), FracOrder(ex318.alpha), false, branch));
        return std::pair{detail::same_points(u.points, {-1.0, 1.0}, 1e-9), detail::describe_points(u.points)};
    });
    row("example-2-sigma", [&] {
        const auto s = sigma_i(ex2.make_operator(), FracOrder(ex2.alpha), true, branch);
        std::vector<cplx> want;
        for (double k : {2.0, 64.0, 486.0}) {
            want.emplace_back(0.0, k * pi);
            want.emplace_back(0.0, -k * pi);
        }
        return std::pair{detail::same_points(s.points, want, 1e-12), detail::describe_points(s.points)};
    });
    row("example-2-exp-sigma", [&] {
        const auto u = exp_sigma(sigma_i(ex2.make_operator(), FracOrder(ex2.alpha), true, branch));
        return std::pair{detail::same_points(u.points, {1.0}, 1e-9), detail::describe_points(u.points)};
    });
    row("example-2-kt-hypothesis", [&] {
        const auto s = sigma_i(ex2.make_operator(), FracOrder(ex2.alpha), true, branch);
        const std::vector<double> freqs{bundled::kTwoPi};
        const bool ok = katznelson_tzafriri_hypothesis(s, freqs, PeriodicityType::Periodic);
        return std::pair{ok, std::string(ok ? "holds" : "fails")};
    });
    row("ml-exp-identity", [&] {
        const double v = mittag_leffler(MLParams{1.0, 1.0}, 1.0);
        return std::pair{detail::rel_close(v, std::numbers::e, 1e-15), shortest(v)};
    });
    row("ml-half-order", [&] {
        const double v = mittag_leffler(MLParams{0.5, 1.0}, -1.0);
        return std::pair{detail::rel_close(v, 0.42758357615580700, 1e-14), shortest(v)};
    });
    row("ml-cos-identity", [&] {
        const double v = mittag_leffler(MLParams{2.0, 1.0}, -(pi / 2) * (pi / 2));
        return std::pair{std::abs(v) <= 1e-12, shortest(v)};
    });
    row("mainardi-half-closed-form", [&] {
        const double v = mainardi_density(0.5, 2.0);
        return std::pair{detail::rel_close(v, std::exp(-1.0) / std::sqrt(pi), 1e-10), shortest(v)};
    });
    row("mainardi-normalization", [&] {
        const double r = subordination_identity_residual(0.5, 0.0, 4096);
        return std::pair{r <= 1e-6, "residual " + shortest(r)};
    });
    auto verdict_row = [&](const ScenarioConfig& base, Verdict want) {
        auto cfg = base;
        cfg.classify.branch = branch;
        cfg.classify.threads = threads;
        const auto op = cfg.make_operator();
        const auto traj = solve(FracOrder(cfg.alpha), op, cfg.initial, cfg.forcing, cfg.grid(), threads);
        const auto c = classify_scenario(op, FracOrder(cfg.alpha), cfg.forcing, traj, cfg.classify);
        return std::pair{c.verdict == want, std::string(to_string(c.verdict))};
    };
    row("example-2-verdict", [&] { return verdict_row(ex2, Verdict::AllAsymptotic1Periodic); });
    row("example-3.18-verdict", [&] { return verdict_row(ex318, Verdict::MasseraExistence); });
    return rows;
}

inline int cmd_selftest(BranchConvention branch, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto rows = run_selftest(branch, threads_from_env());
        std::size_t width = 0;
        for (const auto& r : rows) width = std::max(width, r.name.size());
        bool all = true;
        for (const auto& r : rows) {
            out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2) << r.name
                << r.detail << "\n";
            all = all && r.pass;
        }
        if (!all) {
            for (const auto& r : rows)
                if (!r.pass) err << "selftest failed: " << r.name << "\n";
            return static_cast<int>(kSelftestFailure);
        }
        out << "all " << rows.size() << " checks passed\n";
        return static_cast<int>(kOk);
    });
}

}  // namespace fracperiod::cli
