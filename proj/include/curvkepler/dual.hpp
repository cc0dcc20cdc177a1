#pragma once

/**
 * @file dual.hpp
 * @brief Forward-mode dual numbers with N simultaneous partial derivatives.
 *
 * A Dual<T, N> carries a value and the gradient of that value with respect to
 * N seeded inputs. T may itself be a Dual, which gives exact mixed second
 * derivatives (used to differentiate Jacobians of chart maps).
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace curvkepler {

template <class T, std::size_t N>
struct Dual {
    T value{};
    std::array<T, N> partials{};

    constexpr Dual() = default;
    constexpr Dual(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
    constexpr Dual(const T& v, const std::array<T, N>& d) : value(v), partials(d) {}

    template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
    constexpr Dual(const U& v) : value(v) {}  // NOLINT(google-explicit-constructor)

    /// Independent variable number `slot`.
    static constexpr Dual variable(const T& v, std::size_t slot) {
        Dual d(v, {});
        d.partials[slot] = T(1.0);
        return d;
    }

    constexpr Dual& operator+=(const Dual& o) {
        value += o.value;
        for (std::size_t i = 0; i < N; ++i) partials[i] += o.partials[i];
        return *this;
    }
    constexpr Dual& operator-=(const Dual& o) {
        value -= o.value;
        for (std::size_t i = 0; i < N; ++i) partials[i] -= o.partials[i];
        return *this;
    }
    constexpr Dual& operator*=(const Dual& o) {
        for (std::size_t i = 0; i < N; ++i) partials[i] = partials[i] * o.value + value * o.partials[i];
        value *= o.value;
        return *this;
    }
    constexpr Dual& operator/=(const Dual& o) {
        const T inv = T(1.0) / o.value;
        const T v = value * inv;
        for (std::size_t i = 0; i < N; ++i) partials[i] = (partials[i] - v * o.partials[i]) * inv;
        value = v;
        return *this;
    }
};

template <class>
struct is_dual : std::false_type {};
template <class T, std::size_t N>
struct is_dual<Dual<T, N>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Innermost real value, through any nesting depth.
inline constexpr double primal(double x) { return x; }
template <class T, std::size_t N>
constexpr double primal(const Dual<T, N>& x) {
    return primal(x.value);
}

// Chain rule helper: f(x) with f'(x) = slope.
template <class T, std::size_t N>
constexpr Dual<T, N> chain(const Dual<T, N>& x, const T& fx, const T& slope) {
    Dual<T, N> r(fx, {});
    for (std::size_t i = 0; i < N; ++i) r.partials[i] = slope * x.partials[i];
    return r;
}

template <class T, std::size_t N>
constexpr Dual<T, N> operator-(Dual<T, N> a) {
    a.value = -a.value;
    for (auto& d : a.partials) d = -d;
    return a;
}
template <class T, std::size_t N>
constexpr Dual<T, N> operator+(const Dual<T, N>& a) {
    return a;
}

#define CURVKEPLER_DUAL_BINARY(op, opeq)                                                  \
    template <class T, std::size_t N>                                                     \
    constexpr Dual<T, N> operator op(Dual<T, N> a, const Dual<T, N>& b) {                 \
        return a opeq b;                                                                  \
    }                                                                                     \
    template <class T, std::size_t N>                                                     \
    constexpr Dual<T, N> operator op(Dual<T, N> a, double b) {                            \
        return a opeq Dual<T, N>(b);                                                      \
    }                                                                                     \
    template <class T, std::size_t N>                                                     \
    constexpr Dual<T, N> operator op(double a, const Dual<T, N>& b) {                     \
        return Dual<T, N>(a) opeq b;                                                      \
    }

CURVKEPLER_DUAL_BINARY(+, +=)
CURVKEPLER_DUAL_BINARY(-, -=)
CURVKEPLER_DUAL_BINARY(*, *=)
CURVKEPLER_DUAL_BINARY(/, /=)
#undef CURVKEPLER_DUAL_BINARY

template <class T, std::size_t N>
constexpr bool operator<(const Dual<T, N>& a, const Dual<T, N>& b) {
    return primal(a) < primal(b);
}

// Elementary functions. `using std::f` lets the same body recurse into
// nested duals or terminate at double.

template <class T, std::size_t N>
Dual<T, N> exp(const Dual<T, N>& x) {
    using std::exp;
    const T e = exp(x.value);
    return chain(x, e, e);
}
template <class T, std::size_t N>
Dual<T, N> expm1(const Dual<T, N>& x) {
    using std::exp;
    using std::expm1;
    return chain(x, T(expm1(x.value)), T(exp(x.value)));
}
template <class T, std::size_t N>
Dual<T, N> log(const Dual<T, N>& x) {
    using std::log;
    return chain(x, T(log(x.value)), T(1.0 / x.value));
}
template <class T, std::size_t N>
Dual<T, N> log1p(const Dual<T, N>& x) {
    using std::log1p;
    return chain(x, T(log1p(x.value)), T(1.0 / (1.0 + x.value)));
}
template <class T, std::size_t N>
Dual<T, N> sqrt(const Dual<T, N>& x) {
    using std::sqrt;
    const T s = sqrt(x.value);
    return chain(x, s, T(0.5 / s));
}
template <class T, std::size_t N>
Dual<T, N> sin(const Dual<T, N>& x) {
    using std::cos;
    using std::sin;
    return chain(x, T(sin(x.value)), T(cos(x.value)));
}
template <class T, std::size_t N>
Dual<T, N> cos(const Dual<T, N>& x) {
    using std::cos;
    using std::sin;
    return chain(x, T(cos(x.value)), T(-sin(x.value)));
}
template <class T, std::size_t N>
Dual<T, N> tan(const Dual<T, N>& x) {
    using std::tan;
    const T t = tan(x.value);
    return chain(x, t, T(1.0 + t * t));
}
template <class T, std::size_t N>
Dual<T, N> sinh(const Dual<T, N>& x) {
    using std::cosh;
    using std::sinh;
    return chain(x, T(sinh(x.value)), T(cosh(x.value)));
}
template <class T, std::size_t N>
Dual<T, N> cosh(const Dual<T, N>& x) {
    using std::cosh;
    using std::sinh;
    return chain(x, T(cosh(x.value)), T(sinh(x.value)));
}
template <class T, std::size_t N>
Dual<T, N> tanh(const Dual<T, N>& x) {
    using std::tanh;
    const T t = tanh(x.value);
    return chain(x, t, T(1.0 - t * t));
}
template <class T, std::size_t N>
Dual<T, N> asin(const Dual<T, N>& x) {
    using std::asin;
    using std::sqrt;
    return chain(x, T(asin(x.value)), T(1.0 / sqrt(1.0 - x.value * x.value)));
}
template <class T, std::size_t N>
Dual<T, N> asinh(const Dual<T, N>& x) {
    using std::asinh;
    using std::sqrt;
    return chain(x, T(asinh(x.value)), T(1.0 / sqrt(1.0 + x.value * x.value)));
}
template <class T, std::size_t N>
Dual<T, N> atan(const Dual<T, N>& x) {
    using std::atan;
    return chain(x, T(atan(x.value)), T(1.0 / (1.0 + x.value * x.value)));
}
template <class T, std::size_t N>
Dual<T, N> atanh(const Dual<T, N>& x) {
    using std::atanh;
    return chain(x, T(atanh(x.value)), T(1.0 / (1.0 - x.value * x.value)));
}
template <class T, std::size_t N>
Dual<T, N> atan2(const Dual<T, N>& y, const Dual<T, N>& x) {
    using std::atan2;
    const T r2 = x.value * x.value + y.value * y.value;
    Dual<T, N> r(T(atan2(y.value, x.value)), {});
    for (std::size_t i = 0; i < N; ++i)
        r.partials[i] = (x.value * y.partials[i] - y.value * x.partials[i]) / r2;
    return r;
}

/// Integer power by repeated multiplication (exact derivative, no log).
template <class T>
T ipow(const T& x, int n) {
    T r(1.0);
    for (int i = 0; i < n; ++i) r = r * x;
    return r;
}

template <class T>
T sq(const T& x) {
    return x * x;
}

/// Sign of the primal value as a plain double (+1 for zero).
template <class T>
double sign_of(const T& x) {
    return primal(x) < 0.0 ? -1.0 : 1.0;
}

/// The six-slot scalar used for phase-space observables.
using KScalar = Dual<double, 6>;

}  // namespace curvkepler
