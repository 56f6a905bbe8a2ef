#pragma once

// Riemann-Liouville integral and Caputo derivative on uniform grids.
//
// Both use product integration: the sampled function is replaced by its
// piecewise-linear interpolant and integrated exactly against the weakly
// singular weight. For a kernel k(tau) on the m-th lag interval
// [m dt, (m+1) dt] the convolution at t_k becomes
//
//   (k * u)(t_k) = sum_{m=0}^{k-1} near[m] u_{k-m} + far[m] u_{k-m-1},
//
// where near/far are the moments of k against the two hat functions. The
// mild solver reuses the same convolution with its own kernel moments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracperiod/errors.hpp"
#include "fracperiod/gamma.hpp"

namespace fracperiod {

using cplx = std::complex<double>;

/// Order alpha in (0, 1].
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("fractional order must lie in (0, 1]");
    }
    double value() const noexcept { return alpha_; }
    operator double() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Uniform grid t_k = k dt, k = 0..n_steps.
struct TimeGrid {
    double dt = 1.0;
    std::size_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double dt_, std::size_t n) : dt(dt_), n_steps(n) {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time grid: dt must be positive");
        if (n_steps < 1) throw std::invalid_argument("time grid: need at least one step");
    }

    /// Grid covering [0, t_max] with steps of dt (t_max rounded to the grid).
    static TimeGrid covering(double t_max, double dt) {
        const double steps = std::round(t_max / dt);
        if (!(steps >= 1.0)) throw std::invalid_argument("time grid: t_max must be at least one step");
        return TimeGrid(dt, static_cast<std::size_t>(steps));
    }

    std::size_t size() const noexcept { return n_steps + 1; }
    double t(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
    double t_max() const noexcept { return t(n_steps); }
    bool operator==(const TimeGrid&) const = default;
};

/// Vector-valued samples on a grid, stored component-major.
class SampledFunction {
public:
    SampledFunction(TimeGrid grid, std::size_t dim) : grid_(grid), components_(dim, std::vector<cplx>(grid.size())) {
        if (dim == 0) throw std::invalid_argument("sampled function: dimension must be positive");
    }

    SampledFunction(TimeGrid grid, std::vector<std::vector<cplx>> components)
        : grid_(grid), components_(std::move(components)) {
        if (components_.empty()) throw std::invalid_argument("sampled function: dimension must be positive");
        for (const auto& c : components_)
            if (c.size() != grid_.size()) throw DimensionMismatch("sampled function: component length != grid size");
    }

    template <class F>
    static SampledFunction scalar(TimeGrid grid, F&& f) {
        SampledFunction s(grid, 1);
        for (std::size_t k = 0; k < grid.size(); ++k) s.components_[0][k] = f(grid.t(k));
        return s;
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return components_.size(); }
    std::size_t size() const noexcept { return grid_.size(); }

    std::span<const cplx> component(std::size_t m) const { return components_.at(m); }
    std::span<cplx> component(std::size_t m) { return components_.at(m); }
    cplx operator()(std::size_t k, std::size_t m) const { return components_[m][k]; }
    cplx& operator()(std::size_t k, std::size_t m) { return components_[m][k]; }

    /// Euclidean norm of the sample vector at t_k.
    double norm_at(std::size_t k) const {
        double s = 0.0;
        for (const auto& c : components_) s += std::norm(c[k]);
        return std::sqrt(s);
    }

private:
    TimeGrid grid_;
    std::vector<std::vector<cplx>> components_;
};

/// Convolution of per-lag hat-function moments with samples u (see the
/// header comment). out[0] = 0.
template <class W>
std::vector<cplx> hat_convolution(std::span<const W> near, std::span<const W> far, std::span<const cplx> u) {
    const std::size_t n = u.size();
    if (near.size() + 1 < n || far.size() + 1 < n) throw DimensionMismatch("hat_convolution: too few moments");
    std::vector<cplx> out(n, cplx(0.0));
    for (std::size_t k = 1; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < k; ++m) acc += near[m] * u[k - m] + far[m] * u[k - m - 1];
        out[k] = acc;
    }
    return out;
}

namespace detail {

// (m+1)^p - m^p without cancellation for large m.
inline double power_step(double m, double p) {
    if (m == 0.0) return 1.0;
    return std::pow(m, p) * std::expm1(p * std::log1p(1.0 / m));
}

}  // namespace detail

/// Hat-function moments of tau^(alpha-1) over lag interval m, in units of
/// dt^alpha: near = int_m^{m+1} x^(a-1) (m+1-x) dx, far = int x^(a-1) (x-m) dx.
struct PowerMoments {
    std::vector<double> near;
    std::vector<double> far;
};

inline PowerMoments power_kernel_moments(double alpha, std::size_t count) {
    PowerMoments pm;
    pm.near.resize(count);
    pm.far.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double m = static_cast<double>(i);
        if (i < 16) {
            const double i0 = detail::power_step(m, alpha) / alpha;
            const double i1 = detail::power_step(m, alpha + 1.0) / (alpha + 1.0);
            pm.near[i] = (m + 1.0) * i0 - i1;
            pm.far[i] = i1 - m * i0;
        } else {
            // (m+y)^(a-1) = m^(a-1) sum_j binom(a-1, j) (y/m)^j, integrated
            // against 1-y and y on [0, 1]
            double coef = 1.0, near = 0.0, far = 0.0;
            for (int j = 0; j < 60; ++j) {
                const double tn = coef / ((j + 1.0) * (j + 2.0));
                const double tf = coef / (j + 2.0);
                near += tn;
                far += tf;
                if (std::abs(tf) < 1e-18 * std::abs(far)) break;
                coef *= (alpha - 1.0 - j) / ((j + 1.0) * m);
            }
            const double scale = std::pow(m, alpha - 1.0);
            pm.near[i] = scale * near;
            pm.far[i] = scale * far;
        }
    }
    return pm;
}

/// Product-integration approximation of J^alpha u = g_alpha * u at every grid
/// point; exact for piecewise-linear u.
inline SampledFunction riemann_liouville_integral(FracOrder alpha, const SampledFunction& u) {
    const auto& grid = u.grid();
    const auto pm = power_kernel_moments(alpha, grid.n_steps);
    const double scale = std::pow(grid.dt, alpha.value()) * rgamma(alpha.value());
    std::vector<double> near(pm.near.size()), far(pm.far.size());
    for (std::size_t i = 0; i < near.size(); ++i) {
        near[i] = scale * pm.near[i];
        far[i] = scale * pm.far[i];
    }
    std::vector<std::vector<cplx>> out;
    out.reserve(u.dim());
    for (std::size_t c = 0; c < u.dim(); ++c)
        out.push_back(hat_convolution<double>(near, far, u.component(c)));
    return SampledFunction(grid, std::move(out));
}

/// L1-scheme Caputo derivative at t_1..t_n; the t_0 value is copied from t_1.
/// For alpha = 1 this is the backward difference.
inline SampledFunction caputo_derivative(FracOrder alpha, const SampledFunction& u) {
    const auto& grid = u.grid();
    const std::size_t n = grid.size();
    if (n < 2) throw std::invalid_argument("caputo_derivative: need at least two samples");
    const double a = alpha.value();
    std::vector<double> b(grid.n_steps);
    for (std::size_t m = 0; m < b.size(); ++m) b[m] = detail::power_step(static_cast<double>(m), 1.0 - a);
    const double scale = std::pow(grid.dt, -a) * rgamma(2.0 - a);
    SampledFunction out(grid, u.dim());
    for (std::size_t c = 0; c < u.dim(); ++c) {
        auto src = u.component(c);
        auto dst = out.component(c);
        std::vector<cplx> diff(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) diff[j] = src[j + 1] - src[j];
        for (std::size_t k = 1; k < n; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += b[k - 1 - j] * diff[j];
            dst[k] = scale * acc;
        }
        dst[0] = dst[1];
    }
    return out;
}

/// max_k || (J^alpha D^alpha_C u)(t_k) - (u(t_k) - u(0)) ||.
inline double inversion_residual(FracOrder alpha, const SampledFunction& u) {
    const auto ju = riemann_liouville_integral(alpha, caputo_derivative(alpha, u));
    double worst = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        double s = 0.0;
        for (std::size_t c = 0; c < u.dim(); ++c) s += std::norm(ju(k, c) - (u(k, c) - u(0, c)));
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

}  // namespace fracperiod
