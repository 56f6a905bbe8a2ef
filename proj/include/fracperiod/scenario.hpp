#pragma once

// Scenario configuration: JSON in, validated ScenarioConfig out, and back.
//
//   {
//     "alpha": 0.4,
//     "operator": {"kind": "dirichlet_laplacian_1d", "a": 2.087..., "n_modes": 3}
//              or {"kind": "dirichlet_laplacian_1d", "a": ..., "modes": [1, 3, 5]}
//              or {"kind": "explicit", "eigenvalues": [-1, [-2, 0.5]]},
//     "forcing": {"terms": [[{"omega": 6.28.., "amplitude_re": 0.5, "amplitude_im": 0}], ...],
//                 "decay": {"d": [1, 1, 1], "gamma": 1}},
//     "initial": [0, [1, 0], 0],
//     "grid": {"t_max": 13, "dt": 0.001},
//     "classify": {"windows": [2, 6, 10], "ratio": 0.5, "floor": 1e-6,
//                  "include_conjugates": true, "bloch_p": 0, "branch": "lifted"}
//   }
//
// "forcing.terms" may also be a single flat list, applied to every mode, and
// "decay.d" a single real number for all modes; otherwise it has one entry
// per mode. "initial" defaults to zero. Complex numbers are
// a plain number or [re, im]. to_json writes the expanded form.

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracperiod/asymptotic_analysis.hpp"
#include "fracperiod/errors.hpp"
#include "fracperiod/mild_solver.hpp"
#include "fracperiod/operator_model.hpp"

namespace fracperiod {

using json = nlohmann::json;

struct OperatorConfig {
    OperatorKind kind = OperatorKind::DirichletLaplacian1D;
    double a = 1.0;
    std::vector<int> modes;         // Dirichlet mode numbers
    std::vector<cplx> eigenvalues;  // explicit
    bool contiguous_modes = true;   // modes == 1..n, written back as n_modes
};

struct ScenarioConfig {
    double alpha = 1.0;
    OperatorConfig op;
    ForcingSpec forcing;
    std::vector<cplx> initial;
    double t_max = 1.0;
    double dt = 1e-3;
    ClassifyParams classify;
    bool has_classify = false;

    DiagonalOperator make_operator() const {
        if (op.kind == OperatorKind::Explicit) return DiagonalOperator::explicit_eigenvalues(op.eigenvalues);
        return DiagonalOperator::dirichlet_laplacian_1d(op.a, op.modes);
    }
    std::size_t n_modes() const {
        return op.kind == OperatorKind::Explicit ? op.eigenvalues.size() : op.modes.size();
    }
    TimeGrid grid() const { return TimeGrid::covering(t_max, dt); }
};

namespace config_detail {

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}
inline std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(join(path, key), "missing");
    return *it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

inline bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

inline cplx complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return {number(j, path), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], index(path, 0)), number(j[1], index(path, 1))};
    throw ConfigError(path, "expected a number or [re, im]");
}

inline json complex_to_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

inline std::vector<ForcingTerm> parse_terms(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected a list of terms");
    std::vector<ForcingTerm> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = index(path, i);
        ForcingTerm t;
        t.omega = number(require(j[i], p, "omega"), join(p, "omega"));
        const double re = j[i].contains("amplitude_re") ? number(j[i]["amplitude_re"], join(p, "amplitude_re")) : 0.0;
        const double im = j[i].contains("amplitude_im") ? number(j[i]["amplitude_im"], join(p, "amplitude_im")) : 0.0;
        t.amplitude = {re, im};
        out.push_back(t);
    }
    return out;
}

}  // namespace config_detail

/// Structural and range checks; classification-only invariants are checked
/// when needs_classify is set.
inline void validate(const ScenarioConfig& c, bool needs_classify) {
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
    const std::size_t n = c.n_modes();
    if (n == 0) throw ConfigError("operator", "needs at least one mode");
    if (c.op.kind == OperatorKind::DirichletLaplacian1D) {
        if (!(c.op.a > 0.0)) throw ConfigError("operator.a", "must be positive");
        for (std::size_t i = 0; i < c.op.modes.size(); ++i)
            if (c.op.modes[i] < 1) throw ConfigError(config_detail::index("operator.modes", i), "must be >= 1");
    }
    if (c.forcing.modes() != n)
        throw ConfigError("forcing.terms", "has " + std::to_string(c.forcing.modes()) + " modes, operator has " +
                                               std::to_string(n));
    if (c.initial.size() != n)
        throw ConfigError("initial", "has " + std::to_string(c.initial.size()) + " entries, operator has " +
                                         std::to_string(n));
    if (!(c.dt > 0.0)) throw ConfigError("grid.dt", "must be positive");
    if (!(c.t_max >= c.dt)) throw ConfigError("grid.t_max", "must be at least one step");
    if (c.t_max / c.dt > 1e7) throw ConfigError("grid", "more than 1e7 steps");
    if (!needs_classify) return;
    const auto& p = c.classify;
    if (p.windows.size() < 3) throw ConfigError("classify.windows", "needs at least 3 windows");
    for (std::size_t i = 0; i < p.windows.size(); ++i) {
        if (!(p.windows[i] >= 0.0)) throw ConfigError(config_detail::index("classify.windows", i), "must be >= 0");
        if (i > 0 && !(p.windows[i] > p.windows[i - 1]))
            throw ConfigError("classify.windows", "must be strictly increasing");
    }
    if (!(p.ratio > 0.0 && p.ratio < 1.0)) throw ConfigError("classify.ratio", "must lie in (0, 1)");
    if (!(p.floor > 0.0)) throw ConfigError("classify.floor", "must be positive");
    const double steps = std::round(1.0 / c.dt);
    if (std::abs(steps * c.dt - 1.0) > kUnitShiftTol)
        throw ConfigError("grid.dt", "must divide 1 exactly when classifying");
    const double t_end = c.grid().t_max();
    if (p.windows.back() + 2.0 > t_end * (1.0 + 1e-12))
        throw ConfigError("grid.t_max", "must be at least max(classify.windows) + 2");
}

inline ScenarioConfig scenario_from_json(const json& j) {
    using namespace config_detail;
    ScenarioConfig c;
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");
    c.alpha = number(require(j, "", "alpha"), "alpha");

    const json& op = require(j, "", "operator");
    const json& kind = require(op, "operator", "kind");
    if (!kind.is_string()) throw ConfigError("operator.kind", "expected a string");
    const auto k = kind.get<std::string>();
    if (k == "dirichlet_laplacian_1d") {
        c.op.kind = OperatorKind::DirichletLaplacian1D;
        c.op.a = number(require(op, "operator", "a"), "operator.a");
        if (op.contains("modes")) {
            const json& m = op["modes"];
            if (!m.is_array()) throw ConfigError("operator.modes", "expected a list of mode numbers");
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (!m[i].is_number_integer()) throw ConfigError(index("operator.modes", i), "expected an integer");
                c.op.modes.push_back(m[i].get<int>());
            }
            c.op.contiguous_modes = false;
        } else {
            const json& n = require(op, "operator", "n_modes");
            if (!n.is_number_integer() || n.get<long long>() < 0)
                throw ConfigError("operator.n_modes", "expected a nonnegative integer");
            if (n.get<long long>() > 100000) throw ConfigError("operator.n_modes", "too many modes");
            for (int i = 1; i <= n.get<int>(); ++i) c.op.modes.push_back(i);
        }
    } else if (k == "explicit") {
        c.op.kind = OperatorKind::Explicit;
        const json& ev = require(op, "operator", "eigenvalues");
        if (!ev.is_array()) throw ConfigError("operator.eigenvalues", "expected a list");
        for (std::size_t i = 0; i < ev.size(); ++i)
            c.op.eigenvalues.push_back(complex_value(ev[i], index("operator.eigenvalues", i)));
    } else {
        throw ConfigError("operator.kind", "unknown kind '" + k + "' (dirichlet_laplacian_1d or explicit)");
    }
    const std::size_t n = c.n_modes();

    std::vector<std::vector<ForcingTerm>> terms(n);
    std::optional<DecayTerm> decay;
    if (j.contains("forcing")) {
        const json& f = j["forcing"];
        if (!f.is_object()) throw ConfigError("forcing", "expected an object");
        if (f.contains("terms")) {
            const json& t = f["terms"];
            if (!t.is_array()) throw ConfigError("forcing.terms", "expected a list");
            const bool per_mode = !t.empty() && t[0].is_array();
            if (per_mode) {
                terms.clear();
                for (std::size_t i = 0; i < t.size(); ++i) terms.push_back(parse_terms(t[i], index("forcing.terms", i)));
            } else {
                const auto shared = parse_terms(t, "forcing.terms");
                for (auto& m : terms) m = shared;
            }
        }
        if (f.contains("decay") && !f["decay"].is_null()) {
            const json& d = f["decay"];
            DecayTerm dt;
            dt.gamma = number(require(d, "forcing.decay", "gamma"), "forcing.decay.gamma");
            if (!(dt.gamma > 0.0)) throw ConfigError("forcing.decay.gamma", "must be positive");
            const json& dd = require(d, "forcing.decay", "d");
            if (dd.is_array()) {
                for (std::size_t i = 0; i < dd.size(); ++i)
                    dt.d.push_back(complex_value(dd[i], index("forcing.decay.d", i)));
            } else {
                dt.d.assign(n, complex_value(dd, "forcing.decay.d"));
            }
            if (dt.d.size() != terms.size())
                throw ConfigError("forcing.decay.d", "has " + std::to_string(dt.d.size()) + " entries, forcing has " +
                                                         std::to_string(terms.size()) + " modes");
            decay = dt;
        }
    }
    try {
        c.forcing = ForcingSpec(std::move(terms), std::move(decay));
    } catch (const std::exception& e) {
        throw ConfigError("forcing", e.what());
    }

    if (j.contains("initial")) {
        const json& x = j["initial"];
        if (!x.is_array()) throw ConfigError("initial", "expected a list");
        for (std::size_t i = 0; i < x.size(); ++i) c.initial.push_back(complex_value(x[i], index("initial", i)));
    } else {
        c.initial.assign(n, 0.0);
    }

    const json& g = require(j, "", "grid");
    c.t_max = number(require(g, "grid", "t_max"), "grid.t_max");
    c.dt = number(require(g, "grid", "dt"), "grid.dt");

    if (j.contains("classify")) {
        c.has_classify = true;
        const json& p = j["classify"];
        if (!p.is_object()) throw ConfigError("classify", "expected an object");
        if (p.contains("windows")) {
            const json& w = p["windows"];
            if (!w.is_array()) throw ConfigError("classify.windows", "expected a list");
            c.classify.windows.clear();
            for (std::size_t i = 0; i < w.size(); ++i)
                c.classify.windows.push_back(number(w[i], index("classify.windows", i)));
        }
        if (p.contains("ratio")) c.classify.ratio = number(p["ratio"], "classify.ratio");
        if (p.contains("floor")) c.classify.floor = number(p["floor"], "classify.floor");
        if (p.contains("include_conjugates"))
            c.classify.include_conjugates = boolean(p["include_conjugates"], "classify.include_conjugates");
        if (p.contains("bloch_p")) c.classify.bloch_p = number(p["bloch_p"], "classify.bloch_p");
        if (p.contains("branch")) {
            const json& b = p["branch"];
            if (b == "lifted")
                c.classify.branch = BranchConvention::Lifted;
            else if (b == "principal")
                c.classify.branch = BranchConvention::Principal;
            else
                throw ConfigError("classify.branch", "expected \"lifted\" or \"principal\"");
        }
    }
    validate(c, false);
    return c;
}

inline json to_json(const ScenarioConfig& c) {
    using config_detail::complex_to_json;
    json j;
    j["alpha"] = c.alpha;
    json op;
    if (c.op.kind == OperatorKind::Explicit) {
        op["kind"] = "explicit";
        op["eigenvalues"] = json::array();
        for (auto z : c.op.eigenvalues) op["eigenvalues"].push_back(complex_to_json(z));
    } else {
        op["kind"] = "dirichlet_laplacian_1d";
        op["a"] = c.op.a;
        if (c.op.contiguous_modes)
            op["n_modes"] = c.op.modes.size();
        else
            op["modes"] = c.op.modes;
    }
    j["operator"] = op;
    json terms = json::array();
    for (std::size_t m = 0; m < c.forcing.modes(); ++m) {
        json mode = json::array();
        for (const auto& t : c.forcing.terms(m))
            mode.push_back({{"omega", t.omega}, {"amplitude_re", t.amplitude.real()}, {"amplitude_im", t.amplitude.imag()}});
        terms.push_back(mode);
    }
    json forcing{{"terms", terms}};
    if (c.forcing.decay()) {
        json d = json::array();
        for (auto z : c.forcing.decay()->d) d.push_back(complex_to_json(z));
        forcing["decay"] = {{"d", d}, {"gamma", c.forcing.decay()->gamma}};
    }
    j["forcing"] = forcing;
    j["initial"] = json::array();
    for (auto z : c.initial) j["initial"].push_back(complex_to_json(z));
    j["grid"] = {{"t_max", c.t_max}, {"dt", c.dt}};
    if (c.has_classify) {
        const auto& p = c.classify;
        j["classify"] = {{"windows", p.windows},
                         {"ratio", p.ratio},
                         {"floor", p.floor},
                         {"include_conjugates", p.include_conjugates},
                         {"bloch_p", p.bloch_p},
                         {"branch", to_string(p.branch)}};
    }
    return j;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace fracperiod
