#pragma once

/**
 * @file coalgebra.hpp
 * @brief The deformed sl_z(2) Poisson coalgebra on up to three canonical pairs.
 *
 * Brackets:  {J3, J+} = 2 J+ cosh(z J-),  {J3, J-} = -2 sinh(z J-)/z,  {J-, J+} = 4 J3.
 * Coproduct: D(J-) = J- (x) 1 + 1 (x) J-,
 *            D(J)  = J (x) e^{z J-} + e^{-z J-} (x) J   for J in {J+, J3}.
 * Site k of a realization uses the canonical pair (q_k, p_k); the left leg of
 * the coproduct carries the lower site indices.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "curvkepler/kappa.hpp"
#include "curvkepler/observable.hpp"
#include "curvkepler/report.hpp"

namespace curvkepler::coalgebra {

struct Realization {
    int sites = 0;
    double z = 0.0;
    Observable jminus;
    Observable jplus;
    Observable jthree;
};

/// The three Casimir-derived constants: C12 (sites 1,2), C23 (sites 2,3), C123 (all sites).
struct CasimirSet {
    Observable c12;
    Observable c23;
    Observable c123;
};

/// (q, p) of site k (0-based) from a raw phase array.
template <class T>
std::pair<T, T> site(const PhaseArray<T>& x, int k) {
    return {x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k) + 3]};
}

/// One-particle realization on site 1: J- = q^2, J+ = sinhc(z q^2) p^2, J3 = sinhc(z q^2) q p.
inline Realization one_site(double z) {
    constexpr auto chart = Chart::Beltrami;
    Realization r;
    r.sites = 1;
    r.z = z;
    r.jminus = Observable::make("J-", chart, [](const auto& x) { return x[0] * x[0]; });
    r.jplus = Observable::make("J+", chart, [z](const auto& x) { return sinhc(z * x[0] * x[0]) * x[3] * x[3]; });
    r.jthree = Observable::make("J3", chart, [z](const auto& x) { return sinhc(z * x[0] * x[0]) * x[0] * x[3]; });
    return r;
}

/// Moves an observable's sites k -> k + offset (site pairs beyond 3 are dropped).
inline Observable shifted(const Observable& o, int offset) {
    if (offset == 0) return o;
    const auto off = static_cast<std::size_t>(offset);
    return remap(o, o.name(), o.chart(), [off](const auto& x) {
        using T = typename std::decay_t<decltype(x)>::value_type;
        PhaseArray<T> y{};
        for (std::size_t i = 0; i + off < 3; ++i) {
            y[i] = x[i + off];
            y[i + 3] = x[i + 3 + off];
        }
        return y;
    });
}

/// Coproduct of two realizations acting on disjoint canonical pairs.
inline Realization coproduct_join(const Realization& a, const Realization& b) {
    if (a.z != b.z) throw std::invalid_argument("coproduct_join: deformation parameters differ");
    if (a.sites + b.sites > 3) throw std::invalid_argument("coproduct_join: at most three sites are supported");
    const double z = a.z;
    const Observable bm = shifted(b.jminus, a.sites);
    const Observable bp = shifted(b.jplus, a.sites);
    const Observable b3 = shifted(b.jthree, a.sites);
    const Observable am = a.jminus, ap = a.jplus, a3 = a.jthree;

    Realization r;
    r.sites = a.sites + b.sites;
    r.z = z;
    r.jminus = (am + bm).renamed("J-");
    const auto leg = [z](const Observable& left, const Observable& left_minus, const Observable& right,
                         const Observable& right_minus, std::string name) {
        return Observable::make(std::move(name), Chart::Beltrami, [=](const auto& x) {
            using std::exp;
            return evaluate(left, x) * exp(z * evaluate(right_minus, x)) +
                   exp(-z * evaluate(left_minus, x)) * evaluate(right, x);
        });
    };
    r.jplus = leg(ap, am, bp, bm, "J+");
    r.jthree = leg(a3, am, b3, bm, "J3");
    return r;
}

/// Three-site realization built by iterating the coproduct.
inline Realization three_site(double z) {
    return coproduct_join(coproduct_join(one_site(z), one_site(z)), one_site(z));
}

/// The closed-form three-site generators, written out term by term.
inline Realization closed_form_three_site(double z) {
    constexpr auto chart = Chart::Beltrami;
    Realization r;
    r.sites = 3;
    r.z = z;
    r.jminus = Observable::make("J-", chart, [](const auto& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; });
    const auto sum = [z](const auto& x, auto term) {
        using std::exp;
        const auto q1 = x[0] * x[0], q2 = x[1] * x[1], q3 = x[2] * x[2];
        return sinhc(z * q1) * term(0) * exp(z * q2) * exp(z * q3) +
               sinhc(z * q2) * term(1) * exp(-z * q1) * exp(z * q3) +
               sinhc(z * q3) * term(2) * exp(-z * q1) * exp(-z * q2);
    };
    r.jplus = Observable::make("J+", chart, [sum](const auto& x) {
        return sum(x, [&x](std::size_t i) { return x[i + 3] * x[i + 3]; });
    });
    r.jthree = Observable::make("J3", chart, [sum](const auto& x) {
        return sum(x, [&x](std::size_t i) { return x[i] * x[i + 3]; });
    });
    return r;
}

/// The Casimir function (sinh(z J-)/z) J+ - J3^2 evaluated on a realization.
inline Observable casimir_of(const Realization& r) {
    const double z = r.z;
    const Observable m = r.jminus, p = r.jplus, t = r.jthree;
    return Observable::make("C", Chart::Beltrami, [=](const auto& x) {
        const auto jm = evaluate(m, x);
        const auto j3 = evaluate(t, x);
        return sinh_over(z, jm) * evaluate(p, x) - j3 * j3;
    });
}

/// Size of the two terms of casimir_of, used as its cancellation scale.
inline Observable casimir_scale(const Realization& r) {
    const double z = r.z;
    const Observable m = r.jminus, p = r.jplus, t = r.jthree;
    return Observable::make("|C|", Chart::Beltrami, [=](const auto& x) {
        const auto j3 = evaluate(t, x);
        return sinh_over(z, evaluate(m, x)) * evaluate(p, x) + j3 * j3;
    });
}

/// Realization on the sites [first, first + count) of a three-site phase space.
inline Realization sites_realization(double z, int first, int count) {
    Realization r = one_site(z);
    for (int i = 1; i < count; ++i) r = coproduct_join(r, one_site(z));
    r.jminus = shifted(r.jminus, first);
    r.jplus = shifted(r.jplus, first);
    r.jthree = shifted(r.jthree, first);
    return r;
}

/// Closed-form two- and three-site Casimirs.
inline CasimirSet casimirs(double z) {
    constexpr auto chart = Chart::Beltrami;
    // f_i = sinh(z q_i^2)/(z q_i^2), e_i = exp(z q_i^2), m_ij = q_i p_j - q_j p_i
    const auto pieces = [z](const auto& x) {
        using std::exp;
        using T = typename std::decay_t<decltype(x)>::value_type;
        struct P {
            std::array<T, 3> f, e;
            T m12, m13, m23;
        } p;
        for (std::size_t i = 0; i < 3; ++i) {
            p.f[i] = sinhc(z * x[i] * x[i]);
            p.e[i] = exp(z * x[i] * x[i]);
        }
        p.m12 = x[0] * x[4] - x[1] * x[3];
        p.m13 = x[0] * x[5] - x[2] * x[3];
        p.m23 = x[1] * x[5] - x[2] * x[4];
        return p;
    };
    CasimirSet c;
    c.c12 = Observable::make("C12", chart, [pieces](const auto& x) {
        const auto p = pieces(x);
        return p.f[0] * p.f[1] * p.m12 * p.m12 * p.e[1] / p.e[0];
    });
    c.c23 = Observable::make("C23", chart, [pieces](const auto& x) {
        const auto p = pieces(x);
        return p.f[1] * p.f[2] * p.m23 * p.m23 * p.e[2] / p.e[1];
    });
    c.c123 = Observable::make("C123", chart, [pieces](const auto& x) {
        const auto p = pieces(x);
        return p.f[0] * p.f[1] * p.m12 * p.m12 * p.e[1] * p.e[2] * p.e[2] / p.e[0] +
               p.f[0] * p.f[2] * p.m13 * p.m13 * p.e[2] / p.e[0] +
               p.f[1] * p.f[2] * p.m23 * p.m23 * p.e[2] / (p.e[0] * p.e[0] * p.e[1]);
    });
    return c;
}

/// Random regular Beltrami point: coordinates uniform in [lo, hi], |q_i| >= min_abs.
inline PhaseState sample_beltrami(Rng& rng, double lo = -2.0, double hi = 2.0, double min_abs = 1e-3) {
    PhaseState s{Chart::Beltrami, {}};
    for (;;) {
        for (auto& v : s.x) v = rng.uniform(lo, hi);
        if (std::abs(s.x[0]) >= min_abs && std::abs(s.x[1]) >= min_abs && std::abs(s.x[2]) >= min_abs) return s;
    }
}

/// Checks the three sl_z(2) brackets at `samples` random regular points.
inline BracketReport verify_sl2z(const Realization& r, std::size_t samples, std::uint64_t seed,
                                 const std::optional<Perturbation>& perturbation = std::nullopt) {
    const double z = r.z;
    const Observable jm = perturb(perturbation, r.jminus, "J-");
    const Observable jp = perturb(perturbation, r.jplus, "J+");
    const Observable j3 = perturb(perturbation, r.jthree, "J3");
    const Observable rhs1 = Observable::make("2J+cosh(zJ-)", Chart::Beltrami, [=](const auto& x) {
        using std::cosh;
        return 2.0 * evaluate(jp, x) * cosh(z * evaluate(jm, x));
    });
    const Observable rhs2 = Observable::make("-2sinh(zJ-)/z", Chart::Beltrami, [=](const auto& x) {
        return -2.0 * sinh_over(z, evaluate(jm, x));
    });
    IdentityGroup g("sl_z(2) brackets, " + std::to_string(r.sites) + "-site realization");
    g.bracket("{J3,J+} = 2 J+ cosh(z J-)", j3, jp, rhs1);
    g.bracket("{J3,J-} = -2 sinh(z J-)/z", j3, jm, rhs2);
    g.bracket("{J-,J+} = 4 J3", jm, jp, 4.0 * j3);
    BracketReport rep{"sl2z", {}};
    rep.groups.push_back(g.run([](Rng& rng) { return sample_beltrami(rng); }, samples, seed));
    return rep;
}

/// Casimir suite: closed forms vs coproduct Casimirs, centrality, involution.
/// `hamiltonians` are extra functions of the generators checked for involution.
inline BracketReport verify_casimirs(double z, std::size_t samples, std::uint64_t seed,
                                     const std::optional<Perturbation>& perturbation = std::nullopt) {
    Realization r3 = three_site(z);
    r3.jminus = perturb(perturbation, r3.jminus, "J-");
    r3.jplus = perturb(perturbation, r3.jplus, "J+");
    r3.jthree = perturb(perturbation, r3.jthree, "J3");
    const CasimirSet c = casimirs(z);
    const Realization r12 = sites_realization(z, 0, 2);
    const Realization r23 = sites_realization(z, 1, 2);
    const Realization r1 = one_site(z);

    const auto sampler = [](Rng& rng) { return sample_beltrami(rng); };
    BracketReport rep{"casimirs", {}};

    IdentityGroup forms("Casimir closed forms vs coproduct");
    forms.value("C(1-site) = 0", casimir_of(r1), Observable::constant(0.0), casimir_scale(r1));
    forms.value("C12 = C(sites 1,2)", c.c12, casimir_of(r12), casimir_scale(r12));
    forms.value("C23 = C(sites 2,3)", c.c23, casimir_of(r23), casimir_scale(r23));
    forms.value("C123 = C(sites 1,2,3)", c.c123, casimir_of(r3), casimir_scale(r3));
    rep.groups.push_back(forms.run(sampler, samples, seed));

    IdentityGroup central("Casimirs commute with the three-site generators");
    for (const auto* cas : {&c.c12, &c.c23, &c.c123})
        for (const auto* gen : {&r3.jminus, &r3.jplus, &r3.jthree})
            central.bracket("{" + cas->name() + "," + gen->name() + "} = 0", *cas, *gen);
    rep.groups.push_back(central.run(sampler, samples, seed + 1));

    IdentityGroup involution("Casimirs in involution");
    involution.bracket("{C12,C123} = 0", c.c12, c.c123);
    involution.bracket("{C23,C123} = 0", c.c23, c.c123);
    rep.groups.push_back(involution.run(sampler, samples, seed + 2));
    return rep;
}

}  // namespace curvkepler::coalgebra
