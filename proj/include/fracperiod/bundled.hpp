#pragma once

// Built-in scenarios. The files under scenarios/ hold the same data.

#include <cmath>
#include <numbers>
#include <vector>

#include "fracperiod/scenario.hpp"

namespace fracperiod::bundled {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// cos(w t) as two exponentials
inline std::vector<ForcingTerm> cosine(double w) { return {{w, 0.5}, {-w, 0.5}}; }

inline ScenarioConfig dirichlet(double alpha, double a, std::vector<int> modes, std::vector<ForcingTerm> terms,
                                bool contiguous = true) {
    ScenarioConfig c;
    c.alpha = alpha;
    c.op.kind = OperatorKind::DirichletLaplacian1D;
    c.op.a = a;
    c.op.modes = std::move(modes);
    c.op.contiguous_modes = contiguous;
    c.forcing = ForcingSpec::uniform(c.op.modes.size(), std::move(terms));
    c.initial.assign(c.op.modes.size(), 0.0);
    c.t_max = 13.0;
    c.dt = 1e-3;
    c.has_classify = true;
    return c;
}

/// alpha = 2/3, mu_n = -pi^(2/3) n^2, n = 1..5, f = cos(2 pi t) + e^-t per mode.
inline ScenarioConfig example_3_18() {
    auto c = dirichlet(2.0 / 3.0, std::pow(std::numbers::pi, 2.0 / 3.0), {1, 2, 3, 4, 5}, cosine(kTwoPi));
    c.forcing = ForcingSpec::uniform(5, cosine(kTwoPi), 1.0, 1.0);
    c.classify.include_conjugates = false;
    return c;
}

/// Odd modes of the same operator driven by cos(pi t).
inline ScenarioConfig example_3_18_anti() {
    auto c = dirichlet(2.0 / 3.0, std::pow(std::numbers::pi, 2.0 / 3.0), {1, 3, 5}, cosine(std::numbers::pi), false);
    c.classify.bloch_p = std::numbers::pi;
    return c;
}

/// alpha = 2/5, mu_n = -(2 pi)^(2/5) n^2, n = 1..3, f = cos(2 pi t).
inline ScenarioConfig example_2_k2() { return dirichlet(0.4, std::pow(kTwoPi, 0.4), {1, 2, 3}, cosine(kTwoPi)); }

/// D^(1/2) u = -u, u(0) = 1 on [0, 5].
inline ScenarioConfig scalar_relaxation() {
    ScenarioConfig c;
    c.alpha = 0.5;
    c.op.kind = OperatorKind::Explicit;
    c.op.eigenvalues = {-1.0};
    c.forcing = ForcingSpec::zero(1);
    c.initial = {1.0};
    c.t_max = 5.0;
    c.dt = 1e-3;
    return c;
}

/// Stable scalar operator forced at frequency 1, off every lattice.
inline ScenarioConfig off_lattice() {
    ScenarioConfig c = scalar_relaxation();
    c.forcing = ForcingSpec::uniform(1, {{1.0, 1.0}});
    c.initial = {0.0};
    c.t_max = 13.0;
    c.has_classify = true;
    return c;
}

}  // namespace fracperiod::bundled
