#pragma once

// Gamma function via Lanczos approximations in rational form (13 terms tuned
// for double, 17 terms for x87 long double; coefficients from Boost.Math),
// with the reflection formula below 1/2. The reciprocal 1/Gamma is the
// primitive: it is entire, so the poles of Gamma become exact zeros.

#include <boost/math/special_functions/lanczos.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>

namespace fracperiod {

namespace detail {

template <class T>
using LanczosFor = std::conditional_t<std::is_same_v<T, double>, boost::math::lanczos::lanczos13m53,
                                      boost::math::lanczos::lanczos17m64>;

template <class T>
inline bool is_nonpositive_integer(T x) {
    return x <= 0 && x == std::floor(x);
}

// sin(pi x) with exact zeros at integers and argument reduction.
template <class T>
inline T sin_pi(T x) {
    T r = std::fmod(x, T(2));
    if (r < 0) r += 2;
    if (r == 0 || r == 1) return 0;
    if (r > 1) return -sin_pi(r - 1);
    if (r > T(0.5)) r = 1 - r;
    return std::sin(std::numbers::pi_v<T> * r);
}

template <class T>
inline constexpr T max_gamma_arg = std::is_same_v<T, double> ? T(171.6) : T(1754);

}  // namespace detail

/// log Gamma(x) for x > 0 (log |Gamma(x)| for negative non-integer x).
template <class T = double>
inline T log_gamma(T x) {
    using L = detail::LanczosFor<T>;
    if (x < T(0.5)) {
        return std::log(std::numbers::pi_v<T> / std::abs(detail::sin_pi(x))) - log_gamma<T>(1 - x);
    }
    const T g = T(L::g());
    const T zgh = x + g - T(0.5);
    // (x - 1/2) log(zgh) - zgh, regrouped
    return std::log(L::lanczos_sum(x)) + (x - T(0.5)) * (std::log(zgh) - 1) - g;
}

/// Gamma(x); infinite at the poles.
template <class T = double>
inline T gamma(T x) {
    using L = detail::LanczosFor<T>;
    if (detail::is_nonpositive_integer(x)) return std::numeric_limits<T>::infinity();
    if (x < T(0.5)) return std::numbers::pi_v<T> / (detail::sin_pi(x) * gamma<T>(1 - x));
    if (x > detail::max_gamma_arg<T>) return std::numeric_limits<T>::infinity();
    const T zgh = x + T(L::g()) - T(0.5);
    // split the power to delay overflow near the top of the range
    const T hp = std::pow(zgh, x / 2 - T(0.25));
    return L::lanczos_sum(x) * hp * (hp / std::exp(zgh));
}

/// 1 / Gamma(x), exactly 0 at 0, -1, -2, ...
template <class T = double>
inline T rgamma(T x) {
    if (detail::is_nonpositive_integer(x)) return 0;
    if (x < T(0.5)) {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        const T s = detail::sin_pi(x);
        if (1 - x > detail::max_gamma_arg<T>)
            return (s < 0 ? -1 : 1) * std::exp(log_gamma<T>(1 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi_v<T>));
        return s * gamma<T>(1 - x) / std::numbers::pi_v<T>;
    }
    if (x > detail::max_gamma_arg<T>) return std::exp(-log_gamma<T>(x));
    return 1 / gamma<T>(x);
}

}  // namespace fracperiod
