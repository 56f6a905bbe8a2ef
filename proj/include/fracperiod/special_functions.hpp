#pragma once

// Mittag-Leffler function E_{alpha,beta} and the Mainardi (Wright-type)
// density Phi_alpha.
//
// E_{alpha,beta}(z) = sum_{n>=0} z^n / Gamma(alpha n + beta) is evaluated in one
// of three regimes:
//
//   Series      |z| <= 10, used only while the partial sums stay well
//               conditioned (sum|term| / |sum| <= 1e4); positive real z of any
//               size below the overflow cutoff; all z when alpha > 1. Complex
//               z in the growth sector whose sum cancels badly is re-summed
//               with 50 significant digits.
//   Asymptotic  |z| >= 50 outside the growth sector |arg z| < alpha pi:
//               E ~ -sum_{k=1}^{10} z^-k / Gamma(beta - alpha k).
//   Contour     everything else outside the growth sector: inversion of the
//               Laplace transform s^(alpha-beta) / (s^alpha - z) at t = 1 on
//               the parabola s(u) = mu (1 + iu)^2 with the trapezoidal rule.
//               No pole of the transform lies on the principal sheet there,
//               so no residues are needed.
//
// Phi_alpha(theta) = sum_n (-theta)^n / (n! Gamma(1 - alpha - alpha n)) for
// theta <= 1; for larger theta the series cancels catastrophically and the
// positive integral representation
//
//   Phi_alpha(theta) = theta^(alpha/(1-alpha)) / (pi (1-alpha))
//                      * int_0^pi K(phi) exp(-theta^(1/(1-alpha)) K(phi)) dphi,
//   K(phi) = sin((1-alpha) phi) sin(alpha phi)^(alpha/(1-alpha))
//            / sin(phi)^(1/(1-alpha))
//
// is integrated with tanh-sinh quadrature instead.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "fracperiod/errors.hpp"
#include "fracperiod/gamma.hpp"

namespace fracperiod {

using cplx = std::complex<double>;

/// Parameters of E_{alpha,beta}. alpha in (0, 1] for general use; alpha up to
/// 2 is accepted for identity checks such as E_{2,1}(-t^2) = cos t.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
            throw DomainError("Mittag-Leffler: alpha must lie in (0, 2]");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Mittag-Leffler: beta must be positive");
    }
};

enum class Regime { Series, Asymptotic, Contour };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Series: return "series";
        case Regime::Asymptotic: return "asymptotic";
        case Regime::Contour: return "contour";
    }
    return "?";
}

struct EvalDomain {
    Regime regime;
    cplx z;
};

namespace ml {

inline constexpr double kSeriesRadius = 10.0;        // r0
inline constexpr double kAsymptoticRadius = 50.0;    // z0
inline constexpr int kAsymptoticTerms = 10;          // K
inline constexpr double kSeriesMaxCondition = 1e4;   // sum|term| / |sum|
inline constexpr std::size_t kSeriesMaxTerms = 10000;
inline constexpr int kContourHalfNodes = 16;
inline constexpr double kOverflowExponent = 700.0;

struct SeriesResult {
    cplx value;
    double abs_sum = 0.0;
    std::size_t terms = 0;

    double condition() const {
        const double m = std::abs(value);
        return m > 0.0 ? abs_sum / m : std::numeric_limits<double>::infinity();
    }
};

// Neumaier-compensated accumulator.
template <class T = double>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_ = 0;
    T comp_ = 0;
};

// 1/Gamma(alpha n + beta) for n = 0, 1, ..., computed on demand and kept per
// thread for the last few parameter pairs; solvers call the series many
// times with the same (alpha, beta).
template <class T>
class RgammaTable {
public:
    static const std::vector<T>& get(double alpha, double beta, std::size_t n) {
        thread_local std::vector<RgammaTable> cache;
        for (auto& c : cache)
            if (c.alpha_ == alpha && c.beta_ == beta) return c.extend(n);
        if (cache.size() >= 8) cache.erase(cache.begin());
        cache.push_back(RgammaTable(alpha, beta));
        return cache.back().extend(n);
    }

private:
    RgammaTable(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

    const std::vector<T>& extend(std::size_t n) {
        for (std::size_t k = values_.size(); k < n; ++k) {
            const T x = static_cast<T>(alpha_) * static_cast<T>(k) + static_cast<T>(beta_);
            if constexpr (std::is_same_v<T, long double>)
                values_.push_back(x <= 1700 ? rgamma<T>(x) : T(0));
            else
                values_.push_back(T(1) / boost::math::tgamma(x));
        }
        return values_;
    }

    double alpha_, beta_;
    std::vector<T> values_;
};

using RgammaCoefficients = RgammaTable<long double>;

// Summed in extended precision so that well-conditioned sums round correctly
// to double.
inline SeriesResult series(const MLParams& p, cplx z) {
    using ld = long double;
    SeriesResult r;
    const double az = std::abs(z);
    if (az == 0.0) {
        r.value = static_cast<double>(rgamma<ld>(p.beta));
        r.abs_sum = std::abs(r.value);
        r.terms = 1;
        return r;
    }
    const bool real_axis = z.imag() == 0.0;
    const ld laz = az;
    const ld log_az = std::log(laz);
    const ld arg = std::arg(std::complex<ld>(z.real(), z.imag()));
    // terms shrink once alpha n + beta > (2|z|)^(1/alpha)
    const double x_peak = std::pow(2.0 * az, 1.0 / p.alpha);
    CompensatedSum<ld> re, im;
    ld abs_sum = 0;
    ld pow_az = 1;
    std::complex<ld> unit = 1;  // e^{i n arg z}
    const std::complex<ld> step = std::polar<ld>(1, arg);
    const std::vector<long double>* rg = nullptr;
    for (std::size_t n = 0; n < kSeriesMaxTerms; ++n) {
        if (!rg || n >= rg->size())
            rg = &RgammaCoefficients::get(p.alpha, p.beta, std::min(std::max<std::size_t>(2 * n, 64), kSeriesMaxTerms));
        const ld nd = static_cast<ld>(n);
        const ld x = static_cast<ld>(p.alpha) * nd + static_cast<ld>(p.beta);
        ld mag = pow_az * (*rg)[n];
        if (x > 1700 || !std::isfinite(mag)) mag = std::exp(nd * log_az - log_gamma<ld>(x));
        if (real_axis) {
            re.add((z.real() < 0.0 && (n % 2 == 1)) ? -mag : mag);
        } else {
            // re-anchor the phase now and then to keep rounding from drifting
            if (n % 32 == 0) unit = std::polar<ld>(1, nd * arg);
            re.add(mag * unit.real());
            im.add(mag * unit.imag());
            unit *= step;
        }
        abs_sum += mag;
        r.terms = n + 1;
        if (static_cast<double>(x) > x_peak && mag <= 1e-20L * abs_sum) break;
        pow_az *= laz;
    }
    r.value = cplx(static_cast<double>(re.value()), static_cast<double>(im.value()));
    r.abs_sum = static_cast<double>(abs_sum);
    return r;
}

inline constexpr double kWideSeriesMaxCondition = 1e30;

// Same sum carried with 50 digits, for complex z where the long double sum
// cancels.
inline SeriesResult series_wide(const MLParams& p, cplx z) {
    using mpf = boost::multiprecision::cpp_bin_float_50;
    SeriesResult r;
    const mpf zr = z.real(), zi = z.imag();
    mpf pr = 1, pi = 0, sr = 0, si = 0, abs_sum = 0, pow_abs = 1;
    const mpf az = std::abs(z);
    const std::vector<mpf>* rg = nullptr;
    for (std::size_t n = 0; n < kSeriesMaxTerms; ++n) {
        if (!rg || n >= rg->size()) rg = &RgammaTable<mpf>::get(p.alpha, p.beta, std::max<std::size_t>(2 * n, 64));
        const double x = p.alpha * static_cast<double>(n) + p.beta;
        const mpf& c = (*rg)[n];
        sr += pr * c;
        si += pi * c;
        const mpf mag = pow_abs * abs(c);
        abs_sum += mag;
        r.terms = n + 1;
        const bool decreasing = std::abs(z) < 0.5 * std::pow(x, p.alpha);
        if (decreasing && mag <= 1e-55 * abs_sum) break;
        const mpf nr = pr * zr - pi * zi;
        pi = pr * zi + pi * zr;
        pr = nr;
        pow_abs *= az;
    }
    r.value = cplx(static_cast<double>(sr), static_cast<double>(si));
    r.abs_sum = static_cast<double>(abs_sum);
    return r;
}

inline cplx asymptotic(const MLParams& p, cplx z) {
    cplx sum = 0.0;
    cplx zinv = 1.0 / z;
    cplx zk = zinv;
    for (int k = 1; k <= kAsymptoticTerms; ++k) {
        sum -= zk * rgamma(p.beta - p.alpha * k);
        zk *= zinv;
    }
    return sum;
}

inline cplx contour(const MLParams& p, cplx z) {
    const int n = kContourHalfNodes;
    const double h = 3.0 / n;
    const double mu = std::numbers::pi * n / 12.0;
    const bool real_axis = z.imag() == 0.0;
    auto integrand = [&](double u) {
        const cplx w(1.0, u);
        const cplx s = mu * w * w;
        const cplx ds = cplx(0.0, 2.0 * mu) * w;
        const cplx F = std::pow(s, p.alpha - p.beta) / (std::pow(s, p.alpha) - z);
        return std::exp(s) * F * ds;
    };
    cplx total = integrand(0.0);
    for (int k = 1; k <= n; ++k) {
        const double u = k * h;
        if (real_axis) {
            // conjugate symmetry: f(-u) = conj(f(u)) up to the sign of ds
            const cplx f = integrand(u);
            total += f - std::conj(f);
        } else {
            total += integrand(u) + integrand(-u);
        }
    }
    cplx v = total * h / cplx(0.0, 2.0 * std::numbers::pi);
    if (real_axis) v = cplx(v.real(), 0.0);
    return v;
}

// Outside the sector |arg z| < alpha pi the transform has no pole on the
// principal sheet.
inline bool outside_growth_sector(const MLParams& p, cplx z) {
    if (z == cplx(0.0)) return true;
    return std::abs(std::arg(z)) >= p.alpha * std::numbers::pi * (1.0 - 1e-14);
}

inline std::string describe(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

inline void check_overflow(const MLParams& p, double x) {
    if (x > 0.0 && p.alpha <= 1.0 && std::pow(x, 1.0 / p.alpha) > kOverflowExponent)
        throw OverflowError("Mittag-Leffler: E(z) overflows for real z = " + describe(x) +
                            " (z^(1/alpha) beyond " + std::to_string(kOverflowExponent) + ")");
}

}  // namespace ml

namespace ml {

// Cheap screen before trying the series on the decaying side: once
// |z|^(1/alpha) is large, sum|term| ~ e^{|z|^(1/alpha)} dwarfs the result.
inline DomainError growth_sector_error(cplx z) {
    return DomainError("Mittag-Leffler: complex z = " + describe(z) +
                       " lies outside the series radius |z| <= 10 (or the series is ill-conditioned there) "
                       "and inside the growth sector |arg z| < alpha*pi");
}

inline bool series_worth_trying(const MLParams& p, double az) {
    return az <= kSeriesRadius && std::pow(az, 1.0 / p.alpha) <= 14.0;
}

}  // namespace ml

/// Chooses the evaluation regime for z, or throws DomainError if no regime
/// is certified for it.
inline EvalDomain evaluation_domain(const MLParams& p, cplx z) {
    p.validate();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("Mittag-Leffler: z is not finite");
    const double az = std::abs(z);
    const bool real_axis = z.imag() == 0.0;
    if (p.alpha > 1.0 || (real_axis && z.real() >= 0.0)) return {Regime::Series, z};
    const bool sector_ok = ml::outside_growth_sector(p, z);
    // inside the growth sector the series has no cancellation problem
    if (az <= ml::kSeriesRadius && (!sector_ok || ml::series_worth_trying(p, az))) {
        if (ml::series(p, z).condition() <= ml::kSeriesMaxCondition) return {Regime::Series, z};
        if (!sector_ok && ml::series_wide(p, z).condition() <= ml::kWideSeriesMaxCondition)
            return {Regime::Series, z};
    }
    if (!sector_ok) throw ml::growth_sector_error(z);
    if (az >= ml::kAsymptoticRadius) return {Regime::Asymptotic, z};
    return {Regime::Contour, z};
}

/// E_{alpha,beta}(z) evaluated in a caller-chosen regime. Throws DomainError
/// if z is outside that regime's region of validity.
inline cplx mittag_leffler(const MLParams& p, cplx z, Regime regime) {
    p.validate();
    const double az = std::abs(z);
    switch (regime) {
        case Regime::Series: {
            if (az > ml::kSeriesRadius && p.alpha <= 1.0 && !(z.imag() == 0.0 && z.real() > 0.0))
                throw DomainError("Mittag-Leffler: series regime requires |z| <= 10");
            if (z.imag() == 0.0) ml::check_overflow(p, z.real());
            auto r = ml::series(p, z);
            if (p.alpha <= 1.0 && r.condition() > ml::kSeriesMaxCondition) {
                // abs_sum is accurate even when the value is not; off the sector the
                // contour gives |E| cheaply, so hopeless cases skip the wide sum
                if (ml::outside_growth_sector(p, z) &&
                    r.abs_sum > ml::kWideSeriesMaxCondition * std::abs(ml::contour(p, z)))
                    throw DomainError("Mittag-Leffler: series too ill-conditioned at z = " + ml::describe(z));
                r = ml::series_wide(p, z);
                if (!(r.condition() <= ml::kWideSeriesMaxCondition))
                    throw DomainError("Mittag-Leffler: series too ill-conditioned at z = " + ml::describe(z));
            }
            if (p.alpha > 1.0 && r.abs_sum > 1e6)
                throw DomainError("Mittag-Leffler: series too ill-conditioned at z = " + ml::describe(z));
            return r.value;
        }
        case Regime::Asymptotic:
            if (p.alpha > 1.0 || az < ml::kAsymptoticRadius || !ml::outside_growth_sector(p, z))
                throw DomainError("Mittag-Leffler: asymptotic regime requires |z| >= 50 outside |arg z| < alpha*pi");
            return ml::asymptotic(p, z);
        case Regime::Contour:
            if (p.alpha > 1.0 || !ml::outside_growth_sector(p, z))
                throw DomainError("Mittag-Leffler: contour regime requires alpha <= 1 and |arg z| >= alpha*pi");
            return ml::contour(p, z);
    }
    return {};
}

/// E_{alpha,beta}(z). Accurate to about 1e-12 relative for real z; for real
/// z <= 0 the result is real.
inline cplx mittag_leffler(const MLParams& p, cplx z) {
    p.validate();
    if (p.alpha == 1.0 && p.beta == 1.0) {
        if (z.real() > 709.0) throw OverflowError("Mittag-Leffler: exp overflow at z = " + ml::describe(z));
        return std::exp(z);
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("Mittag-Leffler: z is not finite");
    const bool real_axis = z.imag() == 0.0;
    if (real_axis) ml::check_overflow(p, z.real());
    const double az = std::abs(z);
    if (p.alpha > 1.0 || (real_axis && z.real() >= 0.0)) return mittag_leffler(p, z, Regime::Series);
    const bool sector_ok = ml::outside_growth_sector(p, z);
    if (az <= ml::kSeriesRadius && (!sector_ok || ml::series_worth_trying(p, az))) {
        const auto r = ml::series(p, z);
        if (r.condition() <= ml::kSeriesMaxCondition) return r.value;
        if (!sector_ok) {
            const auto w = ml::series_wide(p, z);
            if (w.condition() <= ml::kWideSeriesMaxCondition && std::isfinite(std::abs(w.value))) return w.value;
        }
    }
    if (!sector_ok) throw ml::growth_sector_error(z);
    return az >= ml::kAsymptoticRadius ? ml::asymptotic(p, z) : ml::contour(p, z);
}

inline double mittag_leffler(const MLParams& p, double x) { return mittag_leffler(p, cplx(x, 0.0)).real(); }

/// True iff t -> E_{alpha,1}(-a t^alpha) is nonincreasing on the grid and its
/// last sampled value is below tol.
inline bool mittag_leffler_decay_check(double alpha, std::span<const double> grid, double a, double tol) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("decay check: alpha must lie in (0, 1]");
    if (grid.empty()) return false;
    const MLParams p{alpha, 1.0};
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double t : grid) {
        if (t < 0.0) throw DomainError("decay check: grid points must be >= 0");
        last = mittag_leffler(p, -a * std::pow(t, alpha));
        if (last > prev) return false;
        prev = last;
    }
    return last < tol;
}

namespace mainardi {

inline constexpr double kSeriesLimit = 1.0;

// log|1/Gamma(x)| and its sign; sign 0 at the poles.
inline double log_abs_rgamma(double x, int& sign) {
    if (detail::is_nonpositive_integer(x)) {
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    if (x >= 0.5) {
        sign = 1;
        return -log_gamma(x);
    }
    const double s = detail::sin_pi(x);
    sign = s < 0 ? -1 : 1;
    return log_gamma(1.0 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi);
}

inline double series(double alpha, double theta) {
    if (theta == 0.0) return rgamma(1.0 - alpha);
    ml::CompensatedSum<> sum;
    double abs_sum = 0.0;
    const double log_theta = std::log(theta);
    for (int n = 0; n < 5000; ++n) {
        const double x = 1.0 - alpha - alpha * n;
        // |1/Gamma(x)| <= Gamma(1 - x) / pi bounds the tail; terms near the
        // poles of Gamma vanish and must not end the summation early
        const double log_envelope = n * log_theta - log_gamma(n + 1.0) +
                                    (x < 0.5 ? log_gamma(1.0 - x) - std::log(std::numbers::pi) : -log_gamma(x));
        int sign = 0;
        const double lr = log_abs_rgamma(x, sign);
        if (sign != 0) {
            const double mag = std::exp(n * log_theta - log_gamma(n + 1.0) + lr);
            sum.add(((n % 2) ? -sign : sign) * mag);
            abs_sum += mag;
        }
        if (n > 4 && std::exp(log_envelope) <= 1e-17 * abs_sum) break;
    }
    return sum.value();
}

inline double integral(double alpha, double theta) {
    const double c = 1.0 / (1.0 - alpha);
    const double x = std::pow(theta, c);
    auto f = [&](double phi) -> double {
        const double sp = std::sin(phi);
        if (!(sp > 0.0)) return 0.0;
        const double log_k =
            std::log(std::sin((1.0 - alpha) * phi)) + alpha * c * std::log(std::sin(alpha * phi)) - c * std::log(sp);
        const double k = std::exp(log_k);
        const double e = x * k;
        if (!(e < 745.0)) return 0.0;
        return std::exp(log_k - e);
    };
    const double pi = std::numbers::pi;
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    const double v = integrator.integrate(f, 0.0, pi, 1e-14);
    return std::pow(theta, alpha * c) / (pi * (1.0 - alpha)) * v;
}

}  // namespace mainardi

/// Mainardi density Phi_alpha(theta): a probability density on (0, inf) with
/// int Phi e^{-z theta} = E_{alpha,1}(-z).
inline double mainardi_density(double alpha, double theta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("mainardi_density: alpha must lie in (0, 1)");
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("mainardi_density: theta must be >= 0");
    if (theta <= mainardi::kSeriesLimit) return mainardi::series(alpha, theta);
    return mainardi::integral(alpha, theta);
}

inline constexpr double kSubordinationThetaMax = 40.0;

/// Composite 8-point Gauss-Legendre rule on [a, b] with about n nodes.
template <class F>
void composite_gauss_legendre(double a, double b, int n, F&& visit) {
    using Rule = boost::math::quadrature::gauss<double, 8>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const int panels = std::max(1, (n + 7) / 8);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < x.size(); ++i) {
            visit(mid - half * x[i], half * w[i]);
            visit(mid + half * x[i], half * w[i]);
        }
    }
}

/// max of |int Phi e^{-z theta} - E_{alpha,1}(-z)| and
/// |int alpha theta Phi e^{-z theta} - E_{alpha,alpha}(-z)| with the integrals
/// truncated to [0, 40].
inline double subordination_identity_residual(double alpha, double z, int quad_n) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("subordination residual: alpha must lie in (0, 1)");
    if (!(z >= 0.0)) throw DomainError("subordination residual: z must be >= 0");
    ml::CompensatedSum<> s1, s2;
    composite_gauss_legendre(0.0, kSubordinationThetaMax, quad_n, [&](double theta, double w) {
        const double v = w * mainardi_density(alpha, theta) * std::exp(-z * theta);
        s1.add(v);
        s2.add(alpha * theta * v);
    });
    const double e1 = mittag_leffler(MLParams{alpha, 1.0}, -z);
    const double e2 = mittag_leffler(MLParams{alpha, alpha}, -z);
    return std::max(std::abs(s1.value() - e1), std::abs(s2.value() - e2));
}

}  // namespace fracperiod
