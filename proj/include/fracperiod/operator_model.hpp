#pragma once

// Diagonal operators, the fractional resolvent lambda^(alpha-1) (lambda^alpha - A)^-1,
// the imaginary-axis spectral set Sigma_i(A, alpha), its exponential image on
// the unit circle, and the hypothesis predicates for the periodicity theorems.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fracperiod/errors.hpp"
#include "fracperiod/fractional_calculus.hpp"

namespace fracperiod {

enum class OperatorKind { Explicit, DirichletLaplacian1D };

/// A = diag(mu_n) with one label per mode. The 1D Dirichlet Laplacian a d^2/dx^2
/// on (0, pi) has mu_n = -a n^2.
class DiagonalOperator {
public:
    static DiagonalOperator explicit_eigenvalues(std::vector<cplx> eigenvalues, std::vector<int> labels = {}) {
        if (eigenvalues.empty()) throw std::invalid_argument("operator: need at least one mode");
        if (labels.empty()) {
            labels.resize(eigenvalues.size());
            for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i) + 1;
        }
        if (labels.size() != eigenvalues.size()) throw DimensionMismatch("operator: labels and eigenvalues differ in length");
        DiagonalOperator op;
        op.kind_ = OperatorKind::Explicit;
        op.eigenvalues_ = std::move(eigenvalues);
        op.labels_ = std::move(labels);
        return op;
    }

    /// Modes n = 1..n_modes.
    static DiagonalOperator dirichlet_laplacian_1d(double a, std::size_t n_modes) {
        std::vector<int> modes(n_modes);
        for (std::size_t i = 0; i < n_modes; ++i) modes[i] = static_cast<int>(i) + 1;
        return dirichlet_laplacian_1d(a, std::move(modes));
    }

    /// Selected modes, e.g. the odd ones.
    static DiagonalOperator dirichlet_laplacian_1d(double a, std::vector<int> modes) {
        if (!(a > 0.0)) throw std::invalid_argument("operator: Dirichlet Laplacian needs a > 0");
        if (modes.empty()) throw std::invalid_argument("operator: need at least one mode");
        DiagonalOperator op;
        op.kind_ = OperatorKind::DirichletLaplacian1D;
        op.a_ = a;
        for (int n : modes) {
            if (n < 1) throw std::invalid_argument("operator: Dirichlet mode indices start at 1");
            op.eigenvalues_.emplace_back(-a * static_cast<double>(n) * n, 0.0);
        }
        op.labels_ = std::move(modes);
        return op;
    }

    OperatorKind kind() const noexcept { return kind_; }
    double a() const noexcept { return a_; }
    std::size_t size() const noexcept { return eigenvalues_.size(); }
    const std::vector<cplx>& eigenvalues() const noexcept { return eigenvalues_; }
    const std::vector<int>& labels() const noexcept { return labels_; }

    /// First n modes (n >= 1, clipped to size()).
    DiagonalOperator truncated(std::size_t n) const {
        if (n == 0) throw std::invalid_argument("operator: truncation must keep at least one mode");
        n = std::min(n, size());
        DiagonalOperator op = *this;
        op.eigenvalues_.resize(n);
        op.labels_.resize(n);
        return op;
    }

    /// Same operator family with modes 1..n (Dirichlet only); used to see how
    /// spectral quantities move as the truncation grows.
    std::optional<DiagonalOperator> extended(std::size_t n) const {
        if (kind_ != OperatorKind::DirichletLaplacian1D) return std::nullopt;
        return dirichlet_laplacian_1d(a_, n);
    }

    double spectral_abscissa() const {
        double s = -std::numeric_limits<double>::infinity();
        for (const auto& mu : eigenvalues_) s = std::max(s, mu.real());
        return s;
    }

    bool exponentially_stable() const { return spectral_abscissa() < 0.0; }

private:
    OperatorKind kind_ = OperatorKind::Explicit;
    double a_ = 0.0;
    std::vector<cplx> eigenvalues_;
    std::vector<int> labels_;
};

/// How lambda^alpha is read on the imaginary axis.
///
/// Principal: lambda^alpha = |lambda|^alpha e^{i alpha Arg lambda}, Arg in (-pi, pi].
/// Lifted: the argument may be lifted by multiples of 2 pi, so that
/// lambda^alpha = -|mu| is solved by arg lambda = pi / alpha. This is the
/// reading under which the Dirichlet examples have a nonempty Sigma_i.
enum class BranchConvention { Lifted, Principal };

inline const char* to_string(BranchConvention b) { return b == BranchConvention::Lifted ? "lifted" : "principal"; }

inline constexpr double kResolventRelTol = 1e-12;

/// Diagonal entries lambda^(alpha-1) / (lambda^alpha - mu_n), principal powers.
/// Under the lifted convention lambda is also singular when it is one of the
/// lifted points used by sigma_i for mode n (arg lambda = pi/alpha wrapped,
/// on the imaginary axis) or its conjugate.
inline std::vector<cplx> resolvent_alpha(const DiagonalOperator& op, FracOrder alpha, cplx lambda,
                                         BranchConvention branch = BranchConvention::Lifted) {
    if (lambda == cplx(0.0)) throw DomainError("resolvent_alpha: lambda must be nonzero");
    const double a = alpha.value();
    const cplx power = std::polar(std::pow(std::abs(lambda), a), a * std::arg(lambda));
    auto singular = [&](std::size_t n) {
        throw SingularityError(op.labels()[n], "resolvent_alpha: lambda^alpha equals the eigenvalue of mode " +
                                                   std::to_string(op.labels()[n]));
    };
    for (std::size_t n = 0; n < op.size(); ++n) {
        const cplx mu = op.eigenvalues()[n];
        if (std::abs(power - mu) <= kResolventRelTol * std::max(std::abs(mu), std::abs(power))) singular(n);
        if (branch != BranchConvention::Lifted || mu.imag() != 0.0 || !(mu.real() < 0.0)) continue;
        double theta = std::remainder(std::numbers::pi / a, 2.0 * std::numbers::pi);
        if (theta <= -std::numbers::pi) theta += 2.0 * std::numbers::pi;
        const cplx lifted = std::polar(std::pow(-mu.real(), 1.0 / a), theta);
        if (std::abs(lifted.real()) > 1e-9 * std::abs(lifted)) continue;
        for (const cplx c : {cplx(0.0, lifted.imag()), cplx(0.0, -lifted.imag())})
            if (std::abs(lambda - c) <= kResolventRelTol * std::abs(c)) singular(n);
    }
    const cplx pre = std::pow(lambda, a - 1.0);
    std::vector<cplx> out(op.size());
    for (std::size_t n = 0; n < op.size(); ++n) out[n] = pre / (power - op.eigenvalues()[n]);
    return out;
}

/// Finite part of Sigma_i(A, alpha) generated by the listed modes. Points are
/// purely imaginary (real part snapped to zero once the axis test passes).
struct SpectralSet {
    std::vector<cplx> points;
    std::vector<int> generated_from;
    bool include_conjugates = true;
    BranchConvention branch = BranchConvention::Lifted;

    bool empty() const noexcept { return points.empty(); }
};

/// Points on the unit circle, sorted by argument.
struct UnitCircleSet {
    std::vector<cplx> points;
    bool empty() const noexcept { return points.empty(); }
};

inline constexpr double kImaginaryAxisTol = 1e-9;
inline constexpr double kDedupTol = 1e-9;
inline constexpr double kMembershipTol = 1e-9;

namespace detail {

inline void push_unique(std::vector<cplx>& pts, cplx z, double tol) {
    for (const auto& p : pts)
        if (std::abs(p - z) <= tol * std::max(1.0, std::abs(z))) return;
    pts.push_back(z);
}

inline double wrap_angle(double theta) {
    // into (-pi, pi]
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

}  // namespace detail

/// Sigma_i(A, alpha) for negative real eigenvalues. Each mode gives the
/// candidate |mu|^(1/alpha) e^{i theta} with theta = pi/alpha wrapped into
/// (-pi, pi]; it is kept iff it lies on the imaginary axis. Under the
/// principal convention lambda^alpha never reaches the negative axis for
/// alpha < 1 and the set is empty.
inline SpectralSet sigma_i(const DiagonalOperator& op, FracOrder alpha, bool include_conjugates = true,
                           BranchConvention branch = BranchConvention::Lifted) {
    for (std::size_t n = 0; n < op.size(); ++n) {
        const cplx mu = op.eigenvalues()[n];
        if (mu.imag() != 0.0 || !(mu.real() < 0.0))
            throw UnsupportedOperatorError("sigma_i: eigenvalue of mode " + std::to_string(op.labels()[n]) +
                                           " is not negative real");
    }
    SpectralSet s;
    s.include_conjugates = include_conjugates;
    s.branch = branch;
    const double a = alpha.value();
    // principal branch: Arg lambda^alpha = alpha Arg lambda, which is +-alpha pi/2
    // on the imaginary axis and never pi, so no mode contributes
    if (branch == BranchConvention::Principal) return s;
    const double theta = detail::wrap_angle(std::numbers::pi / a);
    for (std::size_t n = 0; n < op.size(); ++n) {
        const double mag = std::pow(-op.eigenvalues()[n].real(), 1.0 / a);
        const cplx cand = std::polar(mag, theta);
        if (std::abs(cand.real()) > kImaginaryAxisTol * mag) continue;
        const cplx pt(0.0, cand.imag());
        const std::size_t before = s.points.size();
        detail::push_unique(s.points, pt, kDedupTol);
        if (include_conjugates) detail::push_unique(s.points, std::conj(pt), kDedupTol);
        if (s.points.size() != before) s.generated_from.push_back(op.labels()[n]);
    }
    return s;
}

/// {e^lambda : lambda in s}, deduplicated with tolerance 1e-9.
inline UnitCircleSet exp_sigma(const SpectralSet& s) {
    UnitCircleSet u;
    for (const auto& lam : s.points) {
        cplx z = std::exp(lam);
        z /= std::abs(z);
        detail::push_unique(u.points, z, kDedupTol);
    }
    std::sort(u.points.begin(), u.points.end(), [](cplx x, cplx y) { return std::arg(x) < std::arg(y); });
    return u;
}

enum class PeriodicityType { Periodic, AntiPeriodic };

inline const char* to_string(PeriodicityType t) { return t == PeriodicityType::Periodic ? "periodic" : "anti-periodic"; }

namespace detail {

// x / (2 pi) integer (Periodic) or x / pi odd integer (AntiPeriodic).
inline bool in_lattice(double x, PeriodicityType type) {
    if (type == PeriodicityType::Periodic) {
        const double r = x / (2.0 * std::numbers::pi);
        return std::abs(r - std::round(r)) <= kMembershipTol;
    }
    const double r = (x / std::numbers::pi - 1.0) / 2.0;
    return std::abs(r - std::round(r)) <= kMembershipTol;
}

}  // namespace detail

/// Sigma_i in 2 pi i Z and forcing frequencies in 2 pi Z (Periodic), or
/// both in the odd multiples of pi (AntiPeriodic).
inline bool katznelson_tzafriri_hypothesis(const SpectralSet& s, std::span<const double> forcing_freqs,
                                           PeriodicityType type) {
    for (const auto& lam : s.points) {
        if (std::abs(lam.real()) > kImaginaryAxisTol * std::max(1.0, std::abs(lam))) return false;
        if (!detail::in_lattice(lam.imag(), type)) return false;
    }
    for (double w : forcing_freqs)
        if (!detail::in_lattice(w, type)) return false;
    return true;
}

/// Sub-conditions of the Massera-type existence theorem.
struct MasseraFlags {
    bool stable = false;            // (a) sup Re mu_n < 0
    bool sector_clear = false;      // (b) no mu_n with |arg mu_n| < alpha pi / 2
    bool closed_away_from_1 = false;// (c) e^Sigma \ {1} keeps distance > 1e-9 from 1
    bool forcing_periodic = false;  // (d) forcing frequencies in 2 pi Z
    double min_distance_to_1 = std::numeric_limits<double>::infinity();

    bool all() const noexcept { return stable && sector_clear && closed_away_from_1 && forcing_periodic; }
};

// Points within this distance of 1 are identified with 1 itself.
inline constexpr double kUnitIdentityTol = 1e-12;
inline constexpr double kClosednessGap = 1e-9;

inline MasseraFlags massera_flags(const DiagonalOperator& op, FracOrder alpha, const SpectralSet& s,
                                  std::span<const double> forcing_freqs) {
    MasseraFlags f;
    f.stable = op.exponentially_stable();
    f.sector_clear = true;
    for (const auto& mu : op.eigenvalues()) {
        if (std::abs(std::arg(mu)) < alpha.value() * std::numbers::pi / 2.0) f.sector_clear = false;
    }
    for (const auto& z : exp_sigma(s).points) {
        const double d = std::abs(z - 1.0);
        if (d > kUnitIdentityTol) f.min_distance_to_1 = std::min(f.min_distance_to_1, d);
    }
    f.closed_away_from_1 = f.min_distance_to_1 > kClosednessGap;
    f.forcing_periodic = std::all_of(forcing_freqs.begin(), forcing_freqs.end(),
                                     [](double w) { return detail::in_lattice(w, PeriodicityType::Periodic); });
    return f;
}

inline bool massera_hypothesis(const DiagonalOperator& op, FracOrder alpha, const SpectralSet& s,
                               std::span<const double> forcing_freqs) {
    return massera_flags(op, alpha, s, forcing_freqs).all();
}

}  // namespace fracperiod
