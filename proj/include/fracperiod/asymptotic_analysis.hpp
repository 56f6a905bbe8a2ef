#pragma once

// Finite-horizon evidence for asymptotic (anti-)1-periodicity and the verdict
// that combines it with the spectral hypotheses.
//
// d(T) = max_{t_k in [T, T+1]} || u(t_k + 1) - e^{ip} u(t_k) ||, taken over grid
// points only. A profile "decays" when d(T_last) is below an absolute floor,
// or when d is nonincreasing and d(T_last) <= ratio * d(T_first).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracperiod/errors.hpp"
#include "fracperiod/fractional_calculus.hpp"
#include "fracperiod/mild_solver.hpp"
#include "fracperiod/operator_model.hpp"

namespace fracperiod {

struct PeriodicityProfile {
    std::vector<double> windows;
    std::vector<double> residuals;
    double bloch_p = 0.0;
};

inline constexpr double kUnitShiftTol = 1e-12;

/// Number of grid steps per unit time; throws OffGridShiftError unless
/// 1/dt is an integer.
inline std::size_t steps_per_unit(const TimeGrid& grid) {
    const double inv = 1.0 / grid.dt;
    const double s = std::round(inv);
    if (s < 1.0 || std::abs(s * grid.dt - 1.0) > kUnitShiftTol)
        throw OffGridShiftError("periodicity: dt = " + std::to_string(grid.dt) +
                                " does not divide 1, so t + 1 is not a grid point");
    return static_cast<std::size_t>(s);
}

namespace detail {

// Grid index of t, rounding to the nearest point when t sits on the grid up
// to rounding, otherwise the first point >= t (first = true) or the last
// point <= t.
inline std::size_t grid_index(const TimeGrid& grid, double t, bool first) {
    const double x = t / grid.dt;
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(first ? std::ceil(x) : std::floor(x));
}

inline double wrap_phase(double p) {
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(p, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

}  // namespace detail

/// Residual profile of u for the Bloch phase p (taken mod 2 pi).
inline PeriodicityProfile periodicity_profile(const Trajectory& traj, double bloch_p, std::span<const double> windows) {
    const auto& grid = traj.grid;
    const std::size_t shift = steps_per_unit(grid);
    PeriodicityProfile prof;
    prof.bloch_p = detail::wrap_phase(bloch_p);
    const cplx phase = std::polar(1.0, prof.bloch_p);
    double prev = -std::numeric_limits<double>::infinity();
    for (double T : windows) {
        if (!(T >= 0.0)) throw std::invalid_argument("periodicity: windows must be nonnegative");
        if (!(T > prev)) throw std::invalid_argument("periodicity: windows must be strictly increasing");
        prev = T;
        if (T + 2.0 > grid.t_max() * (1.0 + 1e-12))
            throw std::invalid_argument("periodicity: window T = " + std::to_string(T) + " needs the grid to reach " +
                                        std::to_string(T + 2.0) + ", grid ends at " + std::to_string(grid.t_max()));
        const std::size_t k0 = detail::grid_index(grid, T, true);
        const std::size_t k1 = detail::grid_index(grid, T + 1.0, false);
        double worst = 0.0;
        for (std::size_t k = k0; k <= k1; ++k) {
            double s = 0.0;
            for (const auto& m : traj.modes) s += std::norm(m[k + shift] - phase * m[k]);
            worst = std::max(worst, std::sqrt(s));
        }
        prof.windows.push_back(T);
        prof.residuals.push_back(worst);
    }
    return prof;
}

inline bool decay_verdict(const PeriodicityProfile& profile, double ratio, double floor) {
    const auto& d = profile.residuals;
    if (d.size() < 3) throw std::invalid_argument("decay_verdict: need at least 3 windows");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("decay_verdict: ratio must lie in (0, 1)");
    if (!(floor > 0.0)) throw std::invalid_argument("decay_verdict: floor must be positive");
    if (d.back() <= floor) return true;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i] > d[i - 1]) return false;
    return d.back() <= ratio * d.front();
}

enum class SpectrumTarget { TwoPiZ, OddPiZ };

/// Declared forcing frequencies all in 2 pi Z, or all odd multiples of pi.
inline bool forcing_spectrum_check(const ForcingSpec& forcing, SpectrumTarget target) {
    const auto type = target == SpectrumTarget::TwoPiZ ? PeriodicityType::Periodic : PeriodicityType::AntiPeriodic;
    for (double w : forcing.declared_spectrum())
        if (!detail::in_lattice(w, type)) return false;
    return true;
}

enum class Verdict { AllAsymptotic1Periodic, AllAsymptoticAnti1Periodic, MasseraExistence, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::AllAsymptotic1Periodic: return "AllAsymptotic1Periodic";
        case Verdict::AllAsymptoticAnti1Periodic: return "AllAsymptoticAnti1Periodic";
        case Verdict::MasseraExistence: return "MasseraExistence";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline std::optional<Verdict> verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::AllAsymptotic1Periodic, Verdict::AllAsymptoticAnti1Periodic, Verdict::MasseraExistence,
                   Verdict::Inconclusive})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

struct ClassifyParams {
    std::vector<double> windows{2.0, 6.0, 10.0};
    double ratio = 0.5;
    double floor = 1e-6;
    bool include_conjugates = true;
    double bloch_p = 0.0;  // phase of the profile reported when nothing is proved
    BranchConvention branch = BranchConvention::Lifted;
    unsigned threads = 0;
};

struct HypothesisFlags {
    bool kt_periodic = false;
    bool kt_anti = false;
    MasseraFlags massera;
    bool massera_all() const noexcept { return massera.all(); }
};

/// Whether the Massera closedness proxy survives doubling the truncation.
struct TruncationCheck {
    std::size_t n = 0;
    std::size_t n_doubled = 0;
    double min_distance_to_1 = std::numeric_limits<double>::infinity();
    double min_distance_to_1_doubled = std::numeric_limits<double>::infinity();
    bool shrinks = false;
};

struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    PeriodicityProfile evidence;       // profile backing the verdict
    PeriodicityProfile periodic;       // p = 0 profile of the given trajectory
    PeriodicityProfile anti;           // p = pi profile of the given trajectory
    std::optional<PeriodicityProfile> particular;  // p = 0 profile of the x0 = 0 solution
    bool periodic_decays = false;
    bool anti_decays = false;
    bool particular_decays = false;
    HypothesisFlags flags;
    SpectralSet sigma;
    UnitCircleSet exp_sigma_points;
    std::optional<TruncationCheck> truncation;
    double horizon = 0.0;
};

/// Applies the precedence KT periodic, KT anti-periodic, Massera to recorded
/// flags and decay outcomes.
inline Verdict decide(const HypothesisFlags& flags, bool periodic_decays, bool anti_decays, bool particular_decays) {
    if (flags.kt_periodic && periodic_decays) return Verdict::AllAsymptotic1Periodic;
    if (flags.kt_anti && anti_decays) return Verdict::AllAsymptoticAnti1Periodic;
    if (flags.massera_all() && particular_decays) return Verdict::MasseraExistence;
    return Verdict::Inconclusive;
}

inline Classification classify_scenario(const DiagonalOperator& op, FracOrder alpha, const ForcingSpec& forcing,
                                        const Trajectory& traj, const ClassifyParams& params = {}) {
    Classification c;
    c.horizon = traj.grid.t_max();
    c.sigma = sigma_i(op, alpha, params.include_conjugates, params.branch);
    c.exp_sigma_points = exp_sigma(c.sigma);
    const auto freqs = forcing.declared_spectrum();
    c.flags.kt_periodic = katznelson_tzafriri_hypothesis(c.sigma, freqs, PeriodicityType::Periodic) &&
                          forcing_spectrum_check(forcing, SpectrumTarget::TwoPiZ);
    c.flags.kt_anti = katznelson_tzafriri_hypothesis(c.sigma, freqs, PeriodicityType::AntiPeriodic) &&
                      forcing_spectrum_check(forcing, SpectrumTarget::OddPiZ);
    c.flags.massera = massera_flags(op, alpha, c.sigma, freqs);

    if (auto bigger = op.extended(2 * op.size())) {
        TruncationCheck t;
        t.n = op.size();
        t.n_doubled = bigger->size();
        t.min_distance_to_1 = c.flags.massera.min_distance_to_1;
        const auto s2 = sigma_i(*bigger, alpha, params.include_conjugates, params.branch);
        t.min_distance_to_1_doubled = massera_flags(*bigger, alpha, s2, freqs).min_distance_to_1;
        t.shrinks = t.min_distance_to_1_doubled < t.min_distance_to_1;
        c.truncation = t;
    }

    c.periodic = periodicity_profile(traj, 0.0, params.windows);
    c.anti = periodicity_profile(traj, std::numbers::pi, params.windows);
    c.periodic_decays = decay_verdict(c.periodic, params.ratio, params.floor);
    c.anti_decays = decay_verdict(c.anti, params.ratio, params.floor);

    if (c.flags.massera_all()) {
        const bool at_rest = std::all_of(traj.initial.begin(), traj.initial.end(), [](cplx x) { return x == cplx(0.0); });
        if (at_rest) {
            c.particular = c.periodic;
        } else {
            const std::vector<cplx> zero(op.size(), 0.0);
            const auto u = solve(alpha, op, zero, forcing, traj.grid, params.threads);
            c.particular = periodicity_profile(u, 0.0, params.windows);
        }
        c.particular_decays = decay_verdict(*c.particular, params.ratio, params.floor);
    }

    c.verdict = decide(c.flags, c.periodic_decays, c.anti_decays, c.particular_decays);
    switch (c.verdict) {
        case Verdict::AllAsymptotic1Periodic: c.evidence = c.periodic; break;
        case Verdict::AllAsymptoticAnti1Periodic: c.evidence = c.anti; break;
        case Verdict::MasseraExistence: c.evidence = *c.particular; break;
        case Verdict::Inconclusive:
            c.evidence = periodicity_profile(traj, params.bloch_p, params.windows);
            break;
    }
    return c;
}

/// Sliding-window Fourier amplitudes int_T^{T+1} e^{-i omega t} u_m(t) dt by
/// the trapezoidal rule. Diagnostic only.
struct FourierWindow {
    double omega = 0.0;
    int mode = 0;
    std::vector<double> windows;
    std::vector<cplx> amplitudes;
};

inline std::vector<FourierWindow> fourier_diagnostic(const Trajectory& traj, std::span<const double> omegas,
                                                     std::span<const double> windows) {
    const auto& grid = traj.grid;
    std::vector<FourierWindow> out;
    for (double w : omegas) {
        for (std::size_t m = 0; m < traj.dim(); ++m) {
            FourierWindow fw;
            fw.omega = w;
            fw.mode = m < traj.labels.size() ? traj.labels[m] : static_cast<int>(m) + 1;
            for (double T : windows) {
                if (T + 1.0 > grid.t_max() * (1.0 + 1e-12)) continue;
                const std::size_t k0 = detail::grid_index(grid, T, true);
                const std::size_t k1 = detail::grid_index(grid, T + 1.0, false);
                cplx acc = 0.0;
                for (std::size_t k = k0; k <= k1; ++k) {
                    const double wt = (k == k0 || k == k1) ? 0.5 : 1.0;
                    acc += wt * std::polar(1.0, -w * grid.t(k)) * traj.modes[m][k];
                }
                fw.windows.push_back(T);
                fw.amplitudes.push_back(acc * grid.dt);
            }
            out.push_back(std::move(fw));
        }
    }
    return out;
}

}  // namespace fracperiod
