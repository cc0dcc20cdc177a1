#pragma once

/**
 * @file kappa.hpp
 * @brief Curvature-labelled trigonometry and removable-singularity helpers.
 *
 * For a real label kappa:
 *   C_kappa(x) = cos(sqrt(kappa) x),  cosh(sqrt(-kappa) x),  1
 *   S_kappa(x) = sin(sqrt(kappa) x)/sqrt(kappa), sinh(...)/sqrt(-kappa), x
 * so that C^2 + kappa S^2 = 1 for every kappa. A pair (lambda, kappa =
 * lambda^2) with lambda in {1, 0, i} is handled without complex numbers.
 *
 * Every function is a template over the scalar so it can be evaluated on
 * doubles and on (nested) dual numbers alike.
 */

#include <cmath>
#include <stdexcept>
#include <string>

#include "curvkepler/dual.hpp"

namespace curvkepler {

/// Thrown when a tangent-type ratio hits its pole (C_kappa(x) = 0).
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

// |kappa| x^2 below this switches S_kappa to its Taylor branch.
inline constexpr double kKappaTaylor = 1e-8;
// Series branch for sinh(u)/u, (e^u - 1)/u, log(1+u)/u.
inline constexpr double kSeriesSwitch = 0.1;

}  // namespace detail

template <class T>
T ckappa(double kappa, const T& x) {
    using std::cos;
    using std::cosh;
    using std::sqrt;
    if (kappa > 0.0) return cos(sqrt(kappa) * x);
    if (kappa < 0.0) return cosh(sqrt(-kappa) * x);
    return T(1.0);
}

template <class T>
T skappa(double kappa, const T& x) {
    using std::sin;
    using std::sinh;
    using std::sqrt;
    const double px = primal(x);
    if (std::abs(kappa) * px * px < detail::kKappaTaylor) {
        const T x2 = x * x;
        return x * (1.0 - kappa * x2 / 6.0 + kappa * kappa * x2 * x2 / 120.0);
    }
    if (kappa > 0.0) {
        const double s = sqrt(kappa);
        return sin(s * x) / s;
    }
    const double s = sqrt(-kappa);
    return sinh(s * x) / s;
}

template <class T>
T tkappa(double kappa, const T& x) {
    const T c = ckappa(kappa, x);
    const T s = skappa(kappa, x);
    if (std::abs(primal(c)) <= 1e-15 * std::max(1.0, std::abs(primal(s))))
        throw PoleError("tkappa: C_kappa(x) vanishes (chart breakdown) at kappa=" + std::to_string(kappa) +
                        ", x=" + std::to_string(primal(x)));
    return s / c;
}

/// C_kappa(x)/S_kappa(x), the "lambda/tan(lambda x)" factor.
template <class T>
T cot_kappa(double kappa, const T& x) {
    return ckappa(kappa, x) / skappa(kappa, x);
}

/// Principal inverse of S_kappa: the x in [0, pi/(2 sqrt kappa)] (kappa > 0) with S_kappa(x) = y.
template <class T>
T arcskappa(double kappa, const T& y) {
    using std::asin;
    using std::asinh;
    using std::sqrt;
    const double py = primal(y);
    if (std::abs(kappa) * py * py < detail::kKappaTaylor) {
        const T y2 = y * y;
        return y * (1.0 + kappa * y2 / 6.0 + 3.0 * kappa * kappa * y2 * y2 / 40.0);
    }
    if (kappa > 0.0) {
        const double s = sqrt(kappa);
        if (s * std::abs(py) > 1.0) throw std::domain_error("arcskappa: argument outside the range of S_kappa");
        return asin(s * y) / s;
    }
    const double s = sqrt(-kappa);
    return asinh(s * y) / s;
}

/// Principal inverse of T_kappa = S_kappa/C_kappa on (-pi/(2 sqrt kappa), pi/(2 sqrt kappa)).
template <class T>
T arctkappa(double kappa, const T& y) {
    using std::atan;
    using std::atanh;
    using std::sqrt;
    const double py = primal(y);
    if (std::abs(kappa) * py * py < detail::kKappaTaylor) {
        const T y2 = y * y;
        return y * (1.0 - kappa * y2 / 3.0 + kappa * kappa * y2 * y2 / 5.0);
    }
    if (kappa > 0.0) {
        const double s = sqrt(kappa);
        return atan(s * y) / s;
    }
    const double s = sqrt(-kappa);
    if (s * std::abs(py) >= 1.0) throw std::domain_error("arctkappa: argument outside the range of T_kappa");
    return atanh(s * y) / s;
}

/// The x with (C_kappa(x), S_kappa(x)) proportional to (c, s), s >= 0.
/// For kappa > 0 this covers x in [0, pi/sqrt(kappa)]; for kappa <= 0 it needs c > 0.
template <class T>
T kappa_angle(double kappa, const T& s, const T& c) {
    using std::atan2;
    using std::sqrt;
    if (kappa > 0.0) {
        const double r = sqrt(kappa);
        return atan2(r * s, c) / r;
    }
    if (!(primal(c) > 0.0)) throw std::domain_error("kappa_angle: C_kappa must be positive for kappa <= 0");
    return arctkappa(kappa, s / c);
}

/// sinh(u)/u, smooth through u = 0.
template <class T>
T sinhc(const T& u) {
    using std::sinh;
    if (std::abs(primal(u)) < detail::kSeriesSwitch) {
        const T u2 = u * u;
        // 1 + u^2/3! + u^4/5! + ... + u^10/11!
        T acc(1.0 / 39916800.0);
        acc = acc * u2 + 1.0 / 362880.0;
        acc = acc * u2 + 1.0 / 5040.0;
        acc = acc * u2 + 1.0 / 120.0;
        acc = acc * u2 + 1.0 / 6.0;
        return acc * u2 + 1.0;
    }
    return sinh(u) / u;
}

/// (e^u - 1)/u, smooth through u = 0.
template <class T>
T exprel(const T& u) {
    using std::expm1;
    if (std::abs(primal(u)) < detail::kSeriesSwitch) {
        // sum_{n=0}^{10} u^n/(n+1)!
        static constexpr double c[] = {1.0,           1.0 / 2,        1.0 / 6,         1.0 / 24,
                                       1.0 / 120,     1.0 / 720,      1.0 / 5040,      1.0 / 40320,
                                       1.0 / 362880,  1.0 / 3628800,  1.0 / 39916800};
        T acc(c[10]);
        for (int n = 9; n >= 0; --n) acc = acc * u + c[n];
        return acc;
    }
    return expm1(u) / u;
}

/// log(1+u)/u, smooth through u = 0.
template <class T>
T log1prel(const T& u) {
    using std::log1p;
    if (std::abs(primal(u)) < detail::kSeriesSwitch) {
        // sum_{n=0}^{14} (-u)^n/(n+1)
        T acc(1.0 / 15.0);
        for (int n = 13; n >= 0; --n) acc = acc * (-u) + 1.0 / (n + 1.0);
        return acc;
    }
    return log1p(u) / u;
}

/// sinh(z x)/z = x sinhc(z x), the deformed "sinh(z J)/z" factor, valid at z = 0.
template <class T>
T sinh_over(double z, const T& x) {
    return x * sinhc(z * x);
}

}  // namespace curvkepler
