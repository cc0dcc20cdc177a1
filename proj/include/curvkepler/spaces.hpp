#pragma once

/**
 * @file spaces.hpp
 * @brief Parameters, Hamiltonian families and the chart maps between the
 *        coalgebra (Beltrami-like) chart and the geodesic polar charts.
 *
 * Conventions:
 *  - kappa1 = z, kappa2 = lambda2^2; k = 2 sqrt(2) gamma.
 *  - Every Hamiltonian is the doubled one, H = 2 * (coalgebra Hamiltonian).
 *  - Radial functions: cosh(lambda1 rho) = C_{-z}(rho), sinh(lambda1 rho)/lambda1 = S_{-z}(rho),
 *    lambda1 / tan(lambda1 r) = C_z(r)/S_z(r), sin(lambda2 theta)/lambda2 = S_{kappa2}(theta).
 *
 * Position map.  With w_i = q_i sqrt((e^{2 z q_i^2} - 1)/(2 z q_i^2)) and
 *   Y1 = w1,  Y2 = e^{z q1^2} w2,  Y3 = e^{z (q1^2 + q2^2)} w3,
 * the polar coordinates satisfy
 *   sqrt(2)|Y| = S_{-z}(rho) = T_z(r),
 *   Y3 = |Y| C_{kappa2}(theta),  (Y2, Y1) = |Y| sqrt(kappa2) S_{kappa2}(theta) (cos phi, sin phi).
 * The maps are odd in each q_i, so every octant is covered; the chart needs kappa2 > 0.
 *
 * Momentum map.  Polar momenta are twice the canonically conjugate ones:
 *   P = 2 (dq/dX)^T p.  With this scale the polar Hamiltonians and constants equal
 *   the Beltrami ones pointwise, and {f o T, g o T} = 2 {f, g} o T.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "curvkepler/coalgebra.hpp"
#include "curvkepler/dual.hpp"
#include "curvkepler/kappa.hpp"
#include "curvkepler/observable.hpp"
#include "curvkepler/phase.hpp"
#include "curvkepler/report.hpp"

namespace curvkepler {

struct SpaceParams {
    double z = 0.0;
    double kappa2 = 1.0;
    double gamma = 0.0;
    double k = 0.0;

    double kappa1() const { return z; }

    static SpaceParams from_gamma(double z, double kappa2, double gamma) {
        SpaceParams p{z, kappa2, gamma, 2.0 * std::numbers::sqrt2 * gamma};
        p.validate();
        return p;
    }
    static SpaceParams from_k(double z, double kappa2, double k) {
        SpaceParams p{z, kappa2, k / (2.0 * std::numbers::sqrt2), k};
        p.validate();
        return p;
    }

    void validate() const {
        if (!std::isfinite(z) || !std::isfinite(kappa2) || !std::isfinite(gamma) || !std::isfinite(k))
            throw std::invalid_argument("space parameters must be finite");
        if (kappa2 == 0.0) throw std::invalid_argument("kappa2 = 0 gives a degenerate metric");
        if (std::abs(k - 2.0 * std::numbers::sqrt2 * gamma) > 1e-12 * std::max(1.0, std::abs(k)))
            throw std::invalid_argument("k must equal 2 sqrt(2) gamma");
    }
};

/// Named constant-curvature space: (kappa1, kappa2).
struct Preset {
    std::string_view name;
    double kappa1;
    double kappa2;
};

inline constexpr std::array<Preset, 6> kPresets{{
    {"spherical", 1.0, 1.0},
    {"euclidean", 0.0, 1.0},
    {"hyperbolic", -1.0, 1.0},
    {"antidesitter", 1.0, -1.0},
    {"minkowski", 0.0, -1.0},
    {"desitter", -1.0, -1.0},
}};

inline SpaceParams preset(std::string_view name, double k = 1.0) {
    for (const auto& p : kPresets)
        if (p.name == name) return SpaceParams::from_k(p.kappa1, p.kappa2, k);
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

enum class Family { FreeNC, FreeCC, KeplerNC, KeplerCC, Custom };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::FreeNC: return "free-nc";
        case Family::FreeCC: return "free-cc";
        case Family::KeplerNC: return "kepler-nc";
        case Family::KeplerCC: return "kepler-cc";
        case Family::Custom: return "custom";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    for (Family f : {Family::FreeNC, Family::FreeCC, Family::KeplerNC, Family::KeplerCC, Family::Custom})
        if (to_string(f) == s) return f;
    throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

/// Geometry of the kinetic term: variable (NC) or constant (CC) curvature.
enum class Geometry { NC, CC };

inline std::string_view to_string(Geometry g) { return g == Geometry::NC ? "nc" : "cc"; }

inline Geometry parse_geometry(std::string_view s) {
    if (s == "nc") return Geometry::NC;
    if (s == "cc") return Geometry::CC;
    throw std::invalid_argument("unknown geometry '" + std::string(s) + "' (expected nc or cc)");
}

/// The kinetic factor f(u), u = z J-, and the potential U(z, J-) of a custom Hamiltonian
///   H = J+ f(z J-) + 2 U(z, J-).
struct CustomTerms {
    std::function<KScalar(const KScalar&)> f;
    std::function<KScalar(double, const KScalar&)> potential;
};

namespace detail {

template <class T, class Fn, class... Args>
T call_custom(const Fn& fn, const Args&... args) {
    if constexpr (std::is_same_v<T, double>)
        return fn(KScalar(args)...).value;
    else
        return fn(args...);
}

template <class T, class Fn>
T call_potential(const Fn& fn, double z, const T& jm) {
    if constexpr (std::is_same_v<T, double>)
        return fn(z, KScalar(jm)).value;
    else
        return fn(z, jm);
}

}  // namespace detail

struct HamiltonianSpec {
    Family family = Family::FreeNC;
    SpaceParams params;
    CustomTerms custom;

    static HamiltonianSpec named(Family f, const SpaceParams& p) {
        if (f == Family::Custom) throw std::invalid_argument("custom Hamiltonians need f and U, use custom_family()");
        return {f, p, {}};
    }

    /// Custom family; f(u) -> 1 as u -> 0 and U(z, J-) -> -gamma/sqrt(J-) as z -> 0 are checked.
    static HamiltonianSpec custom_family(const SpaceParams& p, CustomTerms terms) {
        if (!terms.f || !terms.potential) throw std::invalid_argument("custom Hamiltonian needs both f and U");
        for (double u : {0.0, 1e-10, -1e-10}) {
            const double fu = terms.f(KScalar(u)).value;
            if (!(std::abs(fu - 1.0) <= 1e-8)) throw std::invalid_argument("custom f must satisfy f(0) = 1");
        }
        for (double jm : {0.25, 1.0, 4.0}) {
            const double expected = -p.gamma / std::sqrt(jm);
            const double u = terms.potential(1e-10, KScalar(jm)).value;
            if (!(std::abs(u - expected) <= 1e-8 * std::max(1.0, std::abs(expected))))
                throw std::invalid_argument("custom U must tend to -gamma/sqrt(J-) as z -> 0");
        }
        return {Family::Custom, p, std::move(terms)};
    }
};

inline bool chart_allowed(Family f, Chart c) {
    switch (f) {
        case Family::FreeNC:
        case Family::KeplerNC: return c != Chart::PolarConstant;
        case Family::FreeCC:
        case Family::KeplerCC: return c != Chart::PolarVariable;
        case Family::Custom: return true;
    }
    return false;
}

inline Chart native_polar_chart(Family f) {
    return (f == Family::FreeCC || f == Family::KeplerCC) ? Chart::PolarConstant : Chart::PolarVariable;
}

// ---------------------------------------------------------------------------
// Position maps

template <class T>
using Triple = std::array<T, 3>;

namespace detail {

inline void require_riemannian_angle(const SpaceParams& p) {
    if (!(p.kappa2 > 0.0))
        throw DomainError("the Beltrami chart only covers kappa2 > 0 (no real point maps to a Lorentzian polar point)");
}

inline void require_polar(Chart c) {
    if (c == Chart::Beltrami) throw ChartMismatch("expected a polar chart, got beltrami");
}

/// sqrt(2)|Y| as a function of the polar radial coordinate.
template <class T>
T radial_size(const SpaceParams& p, Chart c, const T& radius) {
    return c == Chart::PolarVariable ? skappa(-p.z, radius) : tkappa(p.z, radius);
}

template <class T>
T radial_from_size(const SpaceParams& p, Chart c, const T& size) {
    return c == Chart::PolarVariable ? arcskappa(-p.z, size) : arctkappa(p.z, size);
}

}  // namespace detail

/// Polar position (radius, theta, phi) of a Beltrami position q.
template <class T>
Triple<T> polar_position(const Triple<T>& q, const SpaceParams& p, Chart target) {
    using std::atan2;
    using std::exp;
    using std::sqrt;
    detail::require_polar(target);
    detail::require_riemannian_angle(p);
    const double z = p.z;
    Triple<T> w;
    for (std::size_t i = 0; i < 3; ++i) w[i] = q[i] * sqrt(exprel(2.0 * z * q[i] * q[i]));
    const T y1 = w[0];
    const T y2 = exp(z * q[0] * q[0]) * w[1];
    const T y3 = exp(z * (q[0] * q[0] + q[1] * q[1])) * w[2];
    const T planar = sqrt(y1 * y1 + y2 * y2);
    const T size = sqrt(y1 * y1 + y2 * y2 + y3 * y3);
    const double sk2 = std::sqrt(p.kappa2);
    return {detail::radial_from_size(p, target, std::numbers::sqrt2 * size),
            kappa_angle(p.kappa2, T(planar / sk2), y3), atan2(y1, y2)};
}

/// Beltrami position q of a polar position (radius, theta, phi).
template <class T>
Triple<T> beltrami_position(const Triple<T>& x, const SpaceParams& p, Chart source) {
    using std::cos;
    using std::exp;
    using std::sin;
    using std::sqrt;
    detail::require_polar(source);
    detail::require_riemannian_angle(p);
    const double z = p.z;
    const T size = detail::radial_size(p, source, x[0]) / std::numbers::sqrt2;
    const T planar = size * std::sqrt(p.kappa2) * skappa(p.kappa2, x[1]);
    const T y3 = size * ckappa(p.kappa2, x[1]);
    const T y2 = planar * cos(x[2]);
    const T y1 = planar * sin(x[2]);
    // w^2 = (e^{2 z q^2} - 1)/(2z)  <=>  q = w sqrt(log(1 + 2 z w^2)/(2 z w^2))
    const auto unwrap = [z](const T& w) { return w * sqrt(log1prel(2.0 * z * w * w)); };
    Triple<T> q;
    q[0] = unwrap(y1);
    q[1] = unwrap(y2 * exp(-z * q[0] * q[0]));
    q[2] = unwrap(y3 * exp(-z * (q[0] * q[0] + q[1] * q[1])));
    return q;
}

// ---------------------------------------------------------------------------
// Phase maps

/// Scale of polar momenta relative to the canonically conjugate ones.
inline constexpr double kPolarMomentumScale = 2.0;

namespace detail {

/// Jacobian d map_i / d x_j by one nested-dual evaluation.
template <class T, class Map>
std::array<std::array<T, 3>, 3> jacobian3(const Triple<T>& x, Map map) {
    using D = Dual<T, 3>;
    Triple<D> xd;
    for (std::size_t j = 0; j < 3; ++j) xd[j] = D::variable(x[j], j);
    const Triple<D> y = map(xd);
    std::array<std::array<T, 3>, 3> jac{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) jac[i][j] = y[i].partials[j];
    return jac;
}

}  // namespace detail

/// Beltrami phase point -> polar phase point, with P = scale * (dq/dX)^T p.
template <class T>
PhaseArray<T> polar_phase(const PhaseArray<T>& s, const SpaceParams& p, Chart target,
                          double scale = kPolarMomentumScale) {
    const Triple<T> q{s[0], s[1], s[2]};
    const Triple<T> x = polar_position(q, p, target);
    const auto dq = detail::jacobian3(x, [&](const auto& xd) { return beltrami_position(xd, p, target); });
    PhaseArray<T> out{x[0], x[1], x[2], T(0.0), T(0.0), T(0.0)};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) out[j + 3] = out[j + 3] + scale * dq[i][j] * s[i + 3];
    return out;
}

/// Polar phase point -> Beltrami phase point, with p = (dX/dq)^T P / scale.
template <class T>
PhaseArray<T> beltrami_phase(const PhaseArray<T>& s, const SpaceParams& p, Chart source,
                             double scale = kPolarMomentumScale) {
    const Triple<T> x{s[0], s[1], s[2]};
    const Triple<T> q = beltrami_position(x, p, source);
    const auto dx = detail::jacobian3(q, [&](const auto& qd) { return polar_position(qd, p, source); });
    PhaseArray<T> out{q[0], q[1], q[2], T(0.0), T(0.0), T(0.0)};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) out[j + 3] = out[j + 3] + dx[i][j] * s[i + 3] / scale;
    return out;
}

/// Distance-like margin of a polar phase point from the chart's degeneracies
/// (radial S factor, polar axis, and for the variable chart the C_{-z} factor).
inline double chart_margin(const PhaseState& s, const SpaceParams& p) {
    const double r = s.x[0], th = s.x[1];
    switch (s.chart) {
        case Chart::Beltrami:
            return std::sqrt(s.x[0] * s.x[0] + s.x[1] * s.x[1] + s.x[2] * s.x[2]);
        case Chart::PolarVariable:
            return std::min({skappa(-p.z, r), std::abs(skappa(p.kappa2, th)), ckappa(-p.z, r)});
        case Chart::PolarConstant:
            return std::min(skappa(p.z, r), std::abs(skappa(p.kappa2, th)));
    }
    return 0.0;
}

/// Guard for the chart maps: points closer than this to a degeneracy are rejected.
inline constexpr double kChartEpsilon = 1e-8;

inline void check_polar_regular(const PhaseState& s, const SpaceParams& p, std::string_view what) {
    if (!(chart_margin(s, p) > kChartEpsilon))
        throw SingularityError(std::string(what) + ": point lies on a chart degeneracy (pole or polar axis)");
}

inline PhaseState to_polar(const PhaseState& s, const SpaceParams& p, Chart target,
                           double scale = kPolarMomentumScale) {
    require_chart(s, Chart::Beltrami, "to_polar");
    detail::require_polar(target);
    for (double v : s.x)
        if (!std::isfinite(v)) throw DomainError("to_polar: non-finite coordinate");
    const Triple<double> x = polar_position(Triple<double>{s.x[0], s.x[1], s.x[2]}, p, target);
    check_polar_regular(PhaseState{target, {x[0], x[1], x[2], 0.0, 0.0, 0.0}}, p, "to_polar");
    PhaseState out{target, polar_phase(s.x, p, target, scale)};
    for (double v : out.x)
        if (!std::isfinite(v)) throw DomainError("to_polar: point outside the chart domain");
    return out;
}

inline PhaseState from_polar(const PhaseState& s, const SpaceParams& p, double scale = kPolarMomentumScale) {
    detail::require_polar(s.chart);
    for (double v : s.x)
        if (!std::isfinite(v)) throw DomainError("from_polar: non-finite coordinate");
    if (s.chart == Chart::PolarConstant && p.z > 0.0 && !(s.x[0] < 0.5 * std::numbers::pi / std::sqrt(p.z)))
        throw DomainError("from_polar: r beyond the hemisphere covered by the Beltrami chart");
    if (s.chart == Chart::PolarVariable && p.z < 0.0 && !(s.x[0] < 0.5 * std::numbers::pi / std::sqrt(-p.z)))
        throw DomainError("from_polar: rho beyond the range covered by the Beltrami chart");
    if (!(s.x[0] > 0.0)) throw SingularityError("from_polar: radial coordinate must be positive");
    if (p.kappa2 > 0.0 && !(s.x[1] >= 0.0 && s.x[1] <= std::numbers::pi / std::sqrt(p.kappa2)))
        throw DomainError("from_polar: theta outside [0, pi/sqrt(kappa2)]");
    check_polar_regular(s, p, "from_polar");
    PhaseState out{Chart::Beltrami, beltrami_phase(s.x, p, s.chart, scale)};
    for (double v : out.x)
        if (!std::isfinite(v)) throw DomainError("from_polar: point outside the chart domain");
    return out;
}

/// f o from_polar: a Beltrami observable read on a polar chart.
inline Observable pull_to_polar(const Observable& f, const SpaceParams& p, Chart target,
                                double scale = kPolarMomentumScale) {
    f.check_chart(Chart::Beltrami);
    detail::require_polar(target);
    detail::require_riemannian_angle(p);
    return remap(f, f.name(), target, [p, target, scale](const auto& x) { return beltrami_phase(x, p, target, scale); });
}

/// f o to_polar: a polar observable read on the Beltrami chart.
inline Observable pull_to_beltrami(const Observable& f, const SpaceParams& p, Chart source,
                                   double scale = kPolarMomentumScale) {
    detail::require_polar(source);
    f.check_chart(source);
    detail::require_riemannian_angle(p);
    return remap(f, f.name(), Chart::Beltrami,
                 [p, source, scale](const auto& x) { return polar_phase(x, p, source, scale); });
}

// ---------------------------------------------------------------------------
// Hamiltonians

namespace detail {

/// p_theta^2 + p_phi^2 / S_{kappa2}(theta)^2 (the polar C^(3)).
template <class T>
T angular_casimir(const SpaceParams& p, const PhaseArray<T>& x) {
    const T s = skappa(p.kappa2, x[1]);
    return x[4] * x[4] + x[5] * x[5] / (s * s);
}

/// J- exprel(2 z J-) = (e^{2 z J-} - 1)/(2 z), the argument of the Kepler term.
template <class T>
T kepler_base(double z, const T& jm) {
    return jm * exprel(2.0 * z * jm);
}

template <class T>
T polar_nc(const SpaceParams& p, double k, const PhaseArray<T>& x) {
    const T c = ckappa(-p.z, x[0]);
    const T s = skappa(-p.z, x[0]);
    return 0.5 * c * (x[3] * x[3] + angular_casimir(p, x) / (p.kappa2 * s * s) - 2.0 * k * c / s);
}

template <class T>
T polar_cc(const SpaceParams& p, double k, const PhaseArray<T>& x) {
    const T c = ckappa(p.z, x[0]);
    const T s = skappa(p.z, x[0]);
    return 0.5 * (x[3] * x[3] + angular_casimir(p, x) / (p.kappa2 * s * s)) - k * c / s;
}

}  // namespace detail

inline Observable beltrami_hamiltonian(const HamiltonianSpec& spec) {
    const auto r = coalgebra::three_site(spec.params.z);
    const Observable jm = r.jminus, jp = r.jplus;
    const double z = spec.params.z, g = spec.params.gamma;
    const std::string name{to_string(spec.family)};
    switch (spec.family) {
        case Family::FreeNC:
            return Observable::make(name, Chart::Beltrami, [=](const auto& x) { return evaluate(jp, x); });
        case Family::FreeCC:
            return Observable::make(name, Chart::Beltrami, [=](const auto& x) {
                using std::exp;
                return evaluate(jp, x) * exp(z * evaluate(jm, x));
            });
        case Family::KeplerNC:
            return Observable::make(name, Chart::Beltrami, [=](const auto& x) {
                using std::exp;
                using std::sqrt;
                const auto m = evaluate(jm, x);
                return evaluate(jp, x) - 2.0 * g * exp(2.0 * z * m) / sqrt(detail::kepler_base(z, m));
            });
        case Family::KeplerCC:
            return Observable::make(name, Chart::Beltrami, [=](const auto& x) {
                using std::exp;
                using std::sqrt;
                const auto m = evaluate(jm, x);
                return evaluate(jp, x) * exp(z * m) - 2.0 * g / sqrt(detail::kepler_base(z, m));
            });
        case Family::Custom: {
            const CustomTerms t = spec.custom;
            return Observable::make(name, Chart::Beltrami, [=](const auto& x) {
                using T = typename std::decay_t<decltype(x)>::value_type;
                const T m = evaluate(jm, x);
                return evaluate(jp, x) * detail::call_custom<T>(t.f, T(z * m)) +
                       2.0 * detail::call_potential<T>(t.potential, z, m);
            });
        }
    }
    throw std::logic_error("unreachable family");
}

/// The doubled Hamiltonian H of a family on a chart.
inline Observable hamiltonian(const HamiltonianSpec& spec, Chart chart) {
    if (!chart_allowed(spec.family, chart))
        throw ChartMismatch("family " + std::string(to_string(spec.family)) + " is not defined on chart " +
                            std::string(to_string(chart)));
    if (chart == Chart::Beltrami) return beltrami_hamiltonian(spec);
    if (spec.family == Family::Custom) return pull_to_polar(beltrami_hamiltonian(spec), spec.params, chart);
    const SpaceParams p = spec.params;
    const std::string name{to_string(spec.family)};
    const bool kepler = spec.family == Family::KeplerNC || spec.family == Family::KeplerCC;
    const double k = kepler ? p.k : 0.0;
    if (chart == Chart::PolarVariable)
        return Observable::make(name, chart, [=](const auto& x) { return detail::polar_nc(p, k, x); });
    return Observable::make(name, chart, [=](const auto& x) { return detail::polar_cc(p, k, x); });
}

/// One-dimensional radial system left after fixing C^(3) = c3.
struct RadialSystem {
    Chart chart;
    std::function<double(double, double)> hamiltonian;  // (radius, radial momentum)
    std::function<double(double)> potential;            // hamiltonian at zero radial momentum
};

inline RadialSystem radial_reduction(const HamiltonianSpec& spec, double c3) {
    if (spec.family != Family::KeplerNC && spec.family != Family::KeplerCC)
        throw std::invalid_argument("radial_reduction: needs a Kepler family");
    if (!(c3 >= 0.0)) throw std::invalid_argument("radial_reduction: C3 must be nonnegative");
    const SpaceParams p = spec.params;
    const auto at = [p, c3](const auto& eval) {
        return [p, c3, eval](double r, double pr) {
            // any regular theta will do: p_theta = 0 and p_phi carry C3 = c3
            const double th = p.kappa2 > 0.0 ? 0.5 * std::numbers::pi / std::sqrt(p.kappa2) : 1.0;
            const double sth = skappa(p.kappa2, th);
            const PhasePoint x{r, th, 0.0, pr, 0.0, std::sqrt(c3) * std::abs(sth)};
            return eval(x);
        };
    };
    RadialSystem out;
    if (spec.family == Family::KeplerCC) {
        out.chart = Chart::PolarConstant;
        out.hamiltonian = at([p](const PhasePoint& x) { return detail::polar_cc(p, p.k, x); });
    } else {
        out.chart = Chart::PolarVariable;
        out.hamiltonian = at([p](const PhasePoint& x) { return detail::polar_nc(p, p.k, x); });
    }
    out.potential = [h = out.hamiltonian](double r) { return h(r, 0.0); };
    return out;
}

// ---------------------------------------------------------------------------
// Samplers

/// Ranges for random interior polar states.
struct PolarBox {
    double radius_lo, radius_hi;
    double theta_lo, theta_hi;
    double momentum = 1.0;
};

inline PolarBox default_box(const SpaceParams& p, Chart chart) {
    detail::require_polar(chart);
    // curvature label whose positive sign makes the radial S factor periodic
    const double radial_kappa = chart == Chart::PolarConstant ? p.z : -p.z;
    double rhi = 1.4;
    if (radial_kappa > 0.0) rhi = std::min(rhi, 0.45 * std::numbers::pi / std::sqrt(radial_kappa));
    double thi = 1.5;
    if (p.kappa2 > 0.0) thi = std::min(3.0, std::numbers::pi / std::sqrt(p.kappa2) - 0.2);
    return {0.2, rhi, 0.2, thi, 1.0};
}

inline PhaseState sample_polar(Rng& rng, Chart chart, const PolarBox& box) {
    PhaseState s{chart, {}};
    s.x[0] = rng.uniform(box.radius_lo, box.radius_hi);
    s.x[1] = rng.uniform(box.theta_lo, box.theta_hi);
    s.x[2] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    for (std::size_t i = 3; i < 6; ++i) s.x[i] = rng.uniform(-box.momentum, box.momentum);
    return s;
}

inline StateSampler polar_sampler(const SpaceParams& p, Chart chart) {
    const PolarBox box = default_box(p, chart);
    return [chart, box](Rng& rng) { return sample_polar(rng, chart, box); };
}

/// Random Beltrami point whose polar image is regular; q and p in [-2, 2].
inline StateSampler beltrami_sampler() {
    return [](Rng& rng) { return coalgebra::sample_beltrami(rng); };
}

}  // namespace curvkepler
