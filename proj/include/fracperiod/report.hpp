#pragma once

// report.json and trajectory.csv writers. Everything here is a pure function
// of its inputs: no timestamps, no host names, fixed key order (nlohmann
// sorts object keys), shortest round-trip doubles in both.

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracperiod/asymptotic_analysis.hpp"
#include "fracperiod/mild_solver.hpp"
#include "fracperiod/operator_model.hpp"
#include "fracperiod/scenario.hpp"

namespace fracperiod {

inline constexpr const char* kToolName = "fracperiod";
inline constexpr const char* kToolVersion = "0.1.0";

namespace report_detail {

inline json points(const std::vector<cplx>& pts) {
    json a = json::array();
    for (auto z : pts) a.push_back(json::array({z.real(), z.imag()}));
    return a;
}

// JSON has no infinity
inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json profile(const PeriodicityProfile& p) {
    return {{"bloch_p", p.bloch_p}, {"windows", p.windows}, {"residuals", p.residuals}};
}

inline std::string branch_note(BranchConvention b) {
    if (b == BranchConvention::Lifted)
        return "lambda^alpha read with lifted argument: arg lambda = pi/alpha (wrapped into (-pi, pi]) solves "
               "lambda^alpha = -|mu|";
    return "principal branch: lambda^alpha never reaches the negative real axis for alpha < 1, Sigma_i is empty";
}

}  // namespace report_detail

/// Spectral part shared by the solve and classify reports. Operators with
/// eigenvalues off the negative real axis get null sets and a note.
inline json spectral_section(const DiagonalOperator& op, FracOrder alpha, bool include_conjugates,
                             BranchConvention branch) {
    json j;
    j["truncation_n"] = op.size();
    j["branch"] = to_string(branch);
    j["branch_note"] = report_detail::branch_note(branch);
    j["include_conjugates"] = include_conjugates;
    try {
        const auto s = sigma_i(op, alpha, include_conjugates, branch);
        j["sigma_i"] = report_detail::points(s.points);
        j["sigma_i_modes"] = s.generated_from;
        j["exp_sigma"] = report_detail::points(exp_sigma(s).points);
        // the other reading, for comparison
        const auto other = branch == BranchConvention::Lifted ? BranchConvention::Principal : BranchConvention::Lifted;
        j[std::string("sigma_i_") + to_string(other)] =
            report_detail::points(sigma_i(op, alpha, include_conjugates, other).points);
    } catch (const UnsupportedOperatorError& e) {
        j["sigma_i"] = nullptr;
        j["sigma_i_modes"] = nullptr;
        j["exp_sigma"] = nullptr;
        j["sigma_i_note"] = e.what();
    }
    return j;
}

inline json tool_section() { return {{"name", kToolName}, {"version", kToolVersion}}; }

inline json solve_report(const ScenarioConfig& cfg, const Trajectory& traj, double mild_res) {
    const auto op = cfg.make_operator();
    json j;
    j["tool"] = tool_section();
    j["config"] = to_json(cfg);
    j["grid"] = {{"dt", traj.grid.dt}, {"n_steps", traj.grid.n_steps}, {"t_max", traj.grid.t_max()}};
    j["mode_labels"] = traj.labels;
    j["mild_residual"] = mild_res;
    j["spectral"] = spectral_section(op, FracOrder(cfg.alpha), cfg.classify.include_conjugates, cfg.classify.branch);
    return j;
}

inline json classify_report(const ScenarioConfig& cfg, const Trajectory& traj, double mild_res,
                            const Classification& c, const std::vector<FourierWindow>& fourier) {
    using namespace report_detail;
    json j = solve_report(cfg, traj, mild_res);
    const auto& m = c.flags.massera;
    j["hypotheses"] = {
        {"kt_periodic", c.flags.kt_periodic},
        {"kt_anti_periodic", c.flags.kt_anti},
        {"massera",
         {{"a_stable", m.stable},
          {"b_sector_clear", m.sector_clear},
          {"c_closed_away_from_1", m.closed_away_from_1},
          {"d_forcing_periodic", m.forcing_periodic},
          {"min_distance_to_1", finite_or_null(m.min_distance_to_1)},
          {"all", m.all()}}},
    };
    if (c.truncation) {
        const auto& t = *c.truncation;
        j["truncation_check"] = {{"n", t.n},
                                 {"n_doubled", t.n_doubled},
                                 {"min_distance_to_1", finite_or_null(t.min_distance_to_1)},
                                 {"min_distance_to_1_doubled", finite_or_null(t.min_distance_to_1_doubled)},
                                 {"shrinks", t.shrinks}};
    } else {
        j["truncation_check"] = nullptr;
    }
    j["profiles"] = {{"periodic", profile(c.periodic)},
                     {"anti_periodic", profile(c.anti)},
                     {"particular", c.particular ? profile(*c.particular) : json(nullptr)}};
    j["decays"] = {{"periodic", c.periodic_decays},
                   {"anti_periodic", c.anti_decays},
                   {"particular", c.particular ? json(c.particular_decays) : json(nullptr)}};
    j["decay_rule"] = {{"ratio", cfg.classify.ratio}, {"floor", cfg.classify.floor}};
    j["d_table"] = profile(c.evidence);
    j["verdict"] = to_string(c.verdict);
    j["horizon"] = c.horizon;
    json fw = json::array();
    for (const auto& w : fourier) {
        json amps = json::array();
        for (auto a : w.amplitudes) amps.push_back(json::array({a.real(), a.imag()}));
        fw.push_back({{"omega", w.omega}, {"mode", w.mode}, {"windows", w.windows}, {"amplitudes", amps}});
    }
    j["fourier_diagnostic"] = fw;
    j["notes"] = json::array({
        "verdicts are finite-horizon evidence up to t = " + std::to_string(c.horizon),
        "the Massera check exhibits only the x0 = 0 solution; other bounded asymptotic solutions are not searched",
        "sp(f) is the declared forcing frequency set; the Fourier diagnostic never gates a verdict",
    });
    return j;
}

/// Re-derives the verdict from a report's own flags and decay outcomes.
inline std::optional<Verdict> verdict_from_report(const json& j) {
    HypothesisFlags f;
    const auto& h = j.at("hypotheses");
    f.kt_periodic = h.at("kt_periodic").get<bool>();
    f.kt_anti = h.at("kt_anti_periodic").get<bool>();
    const auto& m = h.at("massera");
    f.massera.stable = m.at("a_stable").get<bool>();
    f.massera.sector_clear = m.at("b_sector_clear").get<bool>();
    f.massera.closed_away_from_1 = m.at("c_closed_away_from_1").get<bool>();
    f.massera.forcing_periodic = m.at("d_forcing_periodic").get<bool>();
    const auto& d = j.at("decays");
    const bool part = d.at("particular").is_boolean() && d.at("particular").get<bool>();
    return decide(f, d.at("periodic").get<bool>(), d.at("anti_periodic").get<bool>(), part);
}

inline std::string format_shortest(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

/// trajectory.csv: header t,mode,re,im; t-major, mode-minor.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::string s = "t,mode,re,im\n";
    s.reserve(traj.grid.size() * traj.dim() * 64);
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        const std::string t = format_shortest(traj.grid.t(k));
        for (std::size_t m = 0; m < traj.dim(); ++m) {
            const int label = m < traj.labels.size() ? traj.labels[m] : static_cast<int>(m) + 1;
            s += t;
            s += ',';
            s += std::to_string(label);
            s += ',';
            s += format_shortest(traj.modes[m][k].real());
            s += ',';
            s += format_shortest(traj.modes[m][k].imag());
            s += '\n';
        }
    }
    return s;
}

}  // namespace fracperiod
