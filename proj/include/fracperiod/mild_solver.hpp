#pragma once

// Mode-by-mode mild solutions of D^alpha_C u = A u + f, u(0) = x, for
// diagonal A:
//
//   u_n(t) = E_{alpha,1}(mu_n t^alpha) x_n
//          + int_0^t (t-s)^(alpha-1) E_{alpha,alpha}(mu_n (t-s)^alpha) f_n(s) ds.
//
// The convolution is product-integrated against the piecewise-linear
// interpolant of f_n. Kernel moments on the first kExactLags lag intervals
// come from the closed-form antiderivatives
//
//   int tau^(a-1) E_{a,a}(mu tau^a) dtau   = tau^a E_{a,a+1}(mu tau^a),
//   int tau^a E_{a,a+1}(mu tau^a) dtau     = tau^(a+1) E_{a,a+2}(mu tau^a),
//
// which absorb the tau^(alpha-1) singularity; further out the kernel is smooth
// on each interval and a 4-point Gauss-Legendre rule is used.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fracperiod/errors.hpp"
#include "fracperiod/fractional_calculus.hpp"
#include "fracperiod/operator_model.hpp"
#include "fracperiod/special_functions.hpp"

namespace fracperiod {

/// One term c e^{i omega t} of a trigonometric forcing.
struct ForcingTerm {
    double omega = 0.0;
    cplx amplitude = 0.0;
    bool operator==(const ForcingTerm&) const = default;
};

/// Optional decaying remainder d_n e^{-gamma t}.
struct DecayTerm {
    std::vector<cplx> d;  // one coefficient per mode
    double gamma = 1.0;
    bool operator==(const DecayTerm&) const = default;
};

/// Forcing f_n(t) = sum_j c_{n,j} e^{i omega_{n,j} t} (+ d_n e^{-gamma t}).
/// The declared spectrum (the union of all omega) stands in for sp(f).
class ForcingSpec {
public:
    ForcingSpec() = default;
    explicit ForcingSpec(std::vector<std::vector<ForcingTerm>> per_mode, std::optional<DecayTerm> decay = std::nullopt)
        : terms_(std::move(per_mode)), decay_(std::move(decay)) {
        if (decay_) {
            if (!(decay_->gamma > 0.0)) throw std::invalid_argument("forcing: decay rate gamma must be positive");
            if (decay_->d.size() != terms_.size())
                throw DimensionMismatch("forcing: decay coefficients must match the number of modes");
        }
    }

    /// Same terms on every one of n_modes modes.
    static ForcingSpec uniform(std::size_t n_modes, std::vector<ForcingTerm> terms,
                               std::optional<double> decay_coefficient = std::nullopt, double gamma = 1.0) {
        std::optional<DecayTerm> decay;
        if (decay_coefficient) decay = DecayTerm{std::vector<cplx>(n_modes, *decay_coefficient), gamma};
        return ForcingSpec(std::vector<std::vector<ForcingTerm>>(n_modes, terms), decay);
    }

    /// Zero forcing on n_modes modes.
    static ForcingSpec zero(std::size_t n_modes) { return ForcingSpec(std::vector<std::vector<ForcingTerm>>(n_modes)); }

    std::size_t modes() const noexcept { return terms_.size(); }
    const std::vector<ForcingTerm>& terms(std::size_t mode) const { return terms_.at(mode); }
    const std::optional<DecayTerm>& decay() const noexcept { return decay_; }

    std::vector<double> declared_spectrum() const {
        std::vector<double> w;
        for (const auto& mode : terms_)
            for (const auto& t : mode)
                if (t.amplitude != cplx(0.0)) w.push_back(t.omega);
        std::sort(w.begin(), w.end());
        w.erase(std::unique(w.begin(), w.end()), w.end());
        return w;
    }

    cplx value(std::size_t mode, double t) const {
        cplx v = 0.0;
        for (const auto& term : terms_[mode]) v += term.amplitude * std::polar(1.0, term.omega * t);
        if (decay_) v += decay_->d[mode] * std::exp(-decay_->gamma * t);
        return v;
    }

    std::vector<cplx> sample_mode(std::size_t mode, const TimeGrid& grid) const {
        std::vector<cplx> out(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) out[k] = value(mode, grid.t(k));
        return out;
    }

    SampledFunction sample(const TimeGrid& grid) const {
        std::vector<std::vector<cplx>> comps;
        comps.reserve(modes());
        for (std::size_t m = 0; m < modes(); ++m) comps.push_back(sample_mode(m, grid));
        return SampledFunction(grid, std::move(comps));
    }

    bool operator==(const ForcingSpec&) const = default;

private:
    std::vector<std::vector<ForcingTerm>> terms_;
    std::optional<DecayTerm> decay_;
};

/// Sampled solution, one array per mode.
struct Trajectory {
    TimeGrid grid;
    std::vector<std::vector<cplx>> modes;
    std::vector<cplx> initial;
    std::vector<int> labels;

    std::size_t dim() const noexcept { return modes.size(); }

    SampledFunction as_sampled() const { return SampledFunction(grid, modes); }

    double norm_at(std::size_t k) const {
        double s = 0.0;
        for (const auto& m : modes) s += std::norm(m[k]);
        return std::sqrt(s);
    }
};

/// Scalar S_alpha(t) = E_{alpha,1}(mu t^alpha) for Re mu < 0 or mu = 0.
inline cplx scalar_resolvent_s(FracOrder alpha, cplx mu, double t) {
    if (!(mu.real() < 0.0) && mu != cplx(0.0))
        throw DomainError("scalar_resolvent_s: requires Re mu < 0 or mu = 0");
    if (t < 0.0) throw DomainError("scalar_resolvent_s: requires t >= 0");
    return mittag_leffler(MLParams{alpha.value(), 1.0}, mu * std::pow(t, alpha.value()));
}

inline constexpr std::size_t kExactLags = 16;

/// Hat-function moments of tau^(alpha-1) E_{alpha,alpha}(mu tau^alpha) per
/// lag interval, plus the homogeneous factor E_{alpha,1}(mu t_k^alpha).
struct ModeKernel {
    std::vector<cplx> near;
    std::vector<cplx> far;
    std::vector<cplx> relaxation;
};

inline ModeKernel mode_kernel(FracOrder alpha, cplx mu, const TimeGrid& grid) {
    const double a = alpha.value();
    const double dt = grid.dt;
    const std::size_t n = grid.n_steps;
    ModeKernel mk;
    mk.near.resize(n);
    mk.far.resize(n);
    mk.relaxation.resize(grid.size());

    const MLParams s_params{a, 1.0}, k_params{a, a}, k1_params{a, a + 1.0}, k2_params{a, a + 2.0};
    for (std::size_t k = 0; k < grid.size(); ++k)
        mk.relaxation[k] = mittag_leffler(s_params, mu * std::pow(grid.t(k), a));

    // antiderivatives K1(tau) = tau^a E_{a,a+1}, K2(tau) = tau^(a+1) E_{a,a+2}
    const std::size_t exact = std::min(n, kExactLags);
    std::vector<cplx> k1(exact + 1), k2(exact + 1);
    for (std::size_t m = 0; m <= exact; ++m) {
        const double tau = static_cast<double>(m) * dt;
        const double ta = std::pow(tau, a);
        k1[m] = ta * mittag_leffler(k1_params, mu * ta);
        k2[m] = tau * ta * mittag_leffler(k2_params, mu * ta);
    }
    for (std::size_t m = 0; m < exact; ++m) {
        const double lo = static_cast<double>(m) * dt;
        const double hi = lo + dt;
        const cplx p0 = k1[m + 1] - k1[m];
        const cplx p1 = (hi * k1[m + 1] - k2[m + 1]) - (lo * k1[m] - k2[m]);
        mk.near[m] = (hi * p0 - p1) / dt;
        mk.far[m] = (p1 - lo * p0) / dt;
    }

    using Rule = boost::math::quadrature::gauss<double, 4>;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    for (std::size_t m = exact; m < n; ++m) {
        const double mid = (static_cast<double>(m) + 0.5) * dt;
        const double half = 0.5 * dt;
        cplx near = 0.0, far = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double y = sgn * xs[i];  // in [-1, 1]
                const double tau = mid + half * y;
                const double ta = std::pow(tau, a);
                const cplx kv = (ta / tau) * mittag_leffler(k_params, mu * ta);
                const double w = half * ws[i];
                near += w * kv * (0.5 * (1.0 - y));
                far += w * kv * (0.5 * (1.0 + y));
            }
        }
        mk.near[m] = near;
        mk.far[m] = far;
    }
    return mk;
}

/// u_n(t_k) = E_{alpha,1}(mu t_k^alpha) x0 + (product-integrated convolution).
inline std::vector<cplx> solve_mode(FracOrder alpha, cplx mu, cplx x0, std::span<const cplx> forcing,
                                    const TimeGrid& grid) {
    if (forcing.size() != grid.size()) throw DimensionMismatch("solve_mode: forcing not sampled on the grid");
    const auto mk = mode_kernel(alpha, mu, grid);
    auto u = hat_convolution<cplx>(mk.near, mk.far, forcing);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += mk.relaxation[k] * x0;
    return u;
}

/// Runs solve_mode for every mode. With threads > 1 modes are distributed over
/// worker threads; each mode writes only its own slot, so the result does
/// not depend on scheduling.
inline Trajectory solve(FracOrder alpha, const DiagonalOperator& op, std::span<const cplx> x0,
                        const ForcingSpec& forcing, const TimeGrid& grid, unsigned threads = 0) {
    const std::size_t n = op.size();
    if (x0.size() != n) throw DimensionMismatch("solve: initial vector has " + std::to_string(x0.size()) +
                                                " entries, operator has " + std::to_string(n) + " modes");
    if (forcing.modes() != n) throw DimensionMismatch("solve: forcing has " + std::to_string(forcing.modes()) +
                                                      " modes, operator has " + std::to_string(n));
    Trajectory traj{grid, std::vector<std::vector<cplx>>(n), std::vector<cplx>(x0.begin(), x0.end()), op.labels()};
    auto run = [&](std::size_t m) {
        const auto f = forcing.sample_mode(m, grid);
        traj.modes[m] = solve_mode(alpha, op.eigenvalues()[m], x0[m], f, grid);
    };
    const unsigned workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t m = 0; m < n; ++m) run(m);
        return traj;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t m = next++; m < n; m = next++) {
                try {
                    run(m);
                } catch (...) {
                    errors[m] = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return traj;
}

/// max_k || u(t_k) - u(0) - A (J^alpha u)(t_k) - (J^alpha f)(t_k) ||.
inline double mild_residual(FracOrder alpha, const DiagonalOperator& op, const Trajectory& traj,
                            const SampledFunction& forcing) {
    if (traj.dim() != op.size() || forcing.dim() != op.size())
        throw DimensionMismatch("mild_residual: dimensions of operator, trajectory and forcing differ");
    if (!(forcing.grid() == traj.grid)) throw DimensionMismatch("mild_residual: forcing is on a different grid");
    const auto ju = riemann_liouville_integral(alpha, traj.as_sampled());
    const auto jf = riemann_liouville_integral(alpha, forcing);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        double s = 0.0;
        for (std::size_t m = 0; m < op.size(); ++m) {
            const cplx r = traj.modes[m][k] - traj.modes[m][0] - op.eigenvalues()[m] * ju(k, m) - jf(k, m);
            s += std::norm(r);
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

/// (F_alpha f)(t) = int_0^t (t-s)^(alpha-1) P_alpha(t-s) f(s) ds for the scalar
/// operator -a, i.e. the zero-initial-value solution.
inline std::vector<cplx> f_alpha(FracOrder alpha, double a, std::span<const cplx> f, const TimeGrid& grid) {
    return solve_mode(alpha, cplx(-a, 0.0), 0.0, f, grid);
}

/// sup_k |F_alpha f (t_k)| <= sup |f| / a + 1e-6.
inline bool f_alpha_norm_check(FracOrder alpha, double a, std::span<const cplx> f, const TimeGrid& grid) {
    if (!(a > 0.0)) throw DomainError("f_alpha_norm_check: a must be positive");
    const auto u = f_alpha(alpha, a, f, grid);
    double sup_u = 0.0, sup_f = 0.0;
    for (const auto& v : u) sup_u = std::max(sup_u, std::abs(v));
    for (const auto& v : f) sup_f = std::max(sup_f, std::abs(v));
    return sup_u <= sup_f / a + 1e-6;
}

}  // namespace fracperiod
