#pragma once

/**
 * @file observable.hpp
 * @brief Differentiable scalar fields on phase space and the canonical Poisson bracket.
 *
 * An Observable keeps two evaluation paths built from one generic callable:
 * a plain double path (used for values and by the finite-difference oracle)
 * and a KScalar path that returns the exact gradient in one pass.
 */

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "curvkepler/dual.hpp"
#include "curvkepler/phase.hpp"

namespace curvkepler {

class Observable {
public:
    using ValueFn = std::function<double(const PhasePoint&)>;
    using DualFn = std::function<KScalar(const PhaseArray<KScalar>&)>;

    Observable() = default;
    Observable(std::string name, std::optional<Chart> chart, ValueFn value, DualFn dual)
        : name_(std::move(name)), chart_(chart), value_(std::move(value)), dual_(std::move(dual)) {}

    /// Build from a generic callable `T f(const PhaseArray<T>&)`.
    template <class F>
    static Observable make(std::string name, std::optional<Chart> chart, F f) {
        return Observable(
            std::move(name), chart, [f](const PhasePoint& x) { return f(x); },
            [f](const PhaseArray<KScalar>& x) { return f(x); });
    }

    /// The literal constant c (chart-agnostic).
    static Observable constant(double c, std::string name = "const") {
        return make(std::move(name), std::nullopt, [c](const auto& x) {
            using T = typename std::decay_t<decltype(x)>::value_type;
            return T(c);
        });
    }

    /// Coordinate function x[slot] (chart-agnostic unless a chart is given).
    static Observable coordinate(int slot, std::optional<Chart> chart = std::nullopt, std::string name = {}) {
        if (name.empty()) name = "x" + std::to_string(slot);
        const auto i = static_cast<std::size_t>(slot);
        return make(std::move(name), chart, [i](const auto& x) { return x[i]; });
    }

    const std::string& name() const { return name_; }
    std::optional<Chart> chart() const { return chart_; }
    bool valid() const { return static_cast<bool>(value_); }

    Observable renamed(std::string name) const {
        Observable o = *this;
        o.name_ = std::move(name);
        return o;
    }

    /// Value at a chart-tagged state; rejects a foreign chart.
    double operator()(const PhaseState& s) const {
        check_chart(s.chart);
        return value_(s.x);
    }
    double at(const PhasePoint& x) const { return value_(x); }

    /// Value and exact gradient at x.
    KScalar dual_at(const PhasePoint& x) const {
        PhaseArray<KScalar> seeded;
        for (std::size_t i = 0; i < 6; ++i) seeded[i] = KScalar::variable(x[i], i);
        return dual_(seeded);
    }
    KScalar eval(const PhaseArray<KScalar>& x) const { return dual_(x); }

    void check_chart(Chart c) const {
        if (chart_ && *chart_ != c)
            throw ChartMismatch("observable '" + name_ + "' lives on chart " + std::string(to_string(*chart_)) +
                                ", state is on " + std::string(to_string(c)));
    }

private:
    std::string name_;
    std::optional<Chart> chart_;
    ValueFn value_;
    DualFn dual_;
};

/// Overload pair so generic code can evaluate an observable on either scalar type.
inline double evaluate(const Observable& o, const PhasePoint& x) { return o.at(x); }
inline KScalar evaluate(const Observable& o, const PhaseArray<KScalar>& x) { return o.eval(x); }

namespace detail {

inline std::optional<Chart> merge_chart(const Observable& a, const Observable& b) {
    if (a.chart() && b.chart() && *a.chart() != *b.chart())
        throw ChartMismatch("cannot combine observables '" + a.name() + "' and '" + b.name() +
                            "' from different charts");
    return a.chart() ? a.chart() : b.chart();
}

}  // namespace detail

/// Pointwise binary combination op(a, b).
template <class Op>
Observable combine(const Observable& a, const Observable& b, std::string name, Op op) {
    return Observable(
        std::move(name), detail::merge_chart(a, b),
        [a, b, op](const PhasePoint& x) { return op(a.at(x), b.at(x)); },
        [a, b, op](const PhaseArray<KScalar>& x) { return op(a.eval(x), b.eval(x)); });
}

/// Pointwise unary transformation op(a).
template <class Op>
Observable transform(const Observable& a, std::string name, Op op) {
    return Observable(
        std::move(name), a.chart(), [a, op](const PhasePoint& x) { return op(a.at(x)); },
        [a, op](const PhaseArray<KScalar>& x) { return op(a.eval(x)); });
}

/// a composed with a change of variables `map(const PhaseArray<T>&) -> PhaseArray<T>`.
template <class Map>
Observable remap(const Observable& a, std::string name, std::optional<Chart> chart, Map map) {
    return Observable(
        std::move(name), chart, [a, map](const PhasePoint& x) { return a.at(map(x)); },
        [a, map](const PhaseArray<KScalar>& x) { return a.eval(map(x)); });
}

inline Observable operator+(const Observable& a, const Observable& b) {
    return combine(a, b, "(" + a.name() + "+" + b.name() + ")", [](const auto& u, const auto& v) { return u + v; });
}
inline Observable operator-(const Observable& a, const Observable& b) {
    return combine(a, b, "(" + a.name() + "-" + b.name() + ")", [](const auto& u, const auto& v) { return u - v; });
}
inline Observable operator*(const Observable& a, const Observable& b) {
    return combine(a, b, a.name() + "*" + b.name(), [](const auto& u, const auto& v) { return u * v; });
}
inline Observable operator/(const Observable& a, const Observable& b) {
    return combine(a, b, a.name() + "/" + b.name(), [](const auto& u, const auto& v) { return u / v; });
}
inline Observable operator-(const Observable& a) {
    return transform(a, "-" + a.name(), [](const auto& u) { return -u; });
}
inline Observable operator*(double c, const Observable& a) {
    return transform(a, a.name(), [c](const auto& u) { return c * u; });
}
inline Observable square(const Observable& a) {
    return transform(a, a.name() + "^2", [](const auto& u) { return u * u; });
}

/// Exact gradient (d/dx1 .. d/dp3) by dual-number propagation.
inline Gradient grad(const Observable& f, const PhaseState& s) {
    f.check_chart(s.chart);
    const KScalar v = f.dual_at(s.x);
    if (!std::isfinite(v.value)) throw DomainError("grad: '" + f.name() + "' is not finite at the state");
    return v.partials;
}

/// Central finite-difference gradient; independent of the dual path.
inline Gradient fd_grad(const Observable& f, const PhaseState& s, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_grad: step must be positive");
    f.check_chart(s.chart);
    Gradient g{};
    for (std::size_t i = 0; i < 6; ++i) {
        PhasePoint xp = s.x, xm = s.x;
        xp[i] += h;
        xm[i] -= h;
        const double fp = f.at(xp), fm = f.at(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw DomainError("fd_grad: stencil leaves the domain of '" + f.name() + "'");
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// {f, g} = sum_i df/dq_i dg/dp_i - dg/dq_i df/dp_i.
inline double pbracket(const Gradient& df, const Gradient& dg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) acc += df[i] * dg[i + 3] - dg[i] * df[i + 3];
    return acc;
}

inline double pbracket(const Observable& f, const Observable& g, const PhaseState& s) {
    return pbracket(grad(f, s), grad(g, s));
}

/// Sum of the absolute bracket terms: the scale against which a bracket's cancellation is judged.
inline double bracket_magnitude(const Gradient& df, const Gradient& dg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) acc += std::abs(df[i] * dg[i + 3]) + std::abs(dg[i] * df[i + 3]);
    return acc;
}

}  // namespace curvkepler
