#pragma once

/**
 * @file symmetry.hpp
 * @brief Constants of motion, the so_{kappa1,kappa2}(4) generators, the
 *        Laplace-Runge-Lenz vector, their bracket tables and rank tests.
 *
 * Generators on the PolarConstant chart, with T1 = C_{kappa1}(r)/S_{kappa1}(r),
 * S = S_{kappa2}(theta), C = C_{kappa2}(theta):
 *   J01 = C pr - S T1 pt
 *   J02 = kappa2 S cos(phi) pr + C cos(phi) T1 pt - sin(phi) T1/S pp
 *   J03 = kappa2 S sin(phi) pr + C sin(phi) T1 pt + cos(phi) T1/S pp
 *   J12 = cos(phi) pt - sin(phi) C/S pp,  J13 = sin(phi) pt + cos(phi) C/S pp,  J23 = pp
 * The translations are the momenta of the ambient flat coordinates
 * (x1, x2, x3) = (r cos theta, r sin theta cos phi, r sin theta sin phi) at kappa1 = 0, kappa2 = 1.
 *
 * The rescaled components P1 = L1/lambda2, P2 = lambda2 L2, P3 = lambda2 L3 involve
 * odd powers of lambda2; their bracket table is checked after multiplying each
 * identity by the power of lambda2 that leaves only kappa2.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvkepler/coalgebra.hpp"
#include "curvkepler/kappa.hpp"
#include "curvkepler/observable.hpp"
#include "curvkepler/report.hpp"
#include "curvkepler/spaces.hpp"

namespace curvkepler {

struct GeneratorSet {
    Observable j01, j02, j03, j12, j13, j23;
    SpaceParams params;
};

struct LRLVector {
    Observable l1, l2, l3;
    Observable mu;  // 2 (kappa1 C3 - kappa2 H)
};

namespace detail {

template <class T>
struct Frame {
    T t1, s, c, cp, sp;
};

template <class T>
Frame<T> frame(const SpaceParams& p, const PhaseArray<T>& x) {
    using std::cos;
    using std::sin;
    return {cot_kappa(p.z, x[0]), skappa(p.kappa2, x[1]), ckappa(p.kappa2, x[1]), cos(x[2]), sin(x[2])};
}

}  // namespace detail

inline GeneratorSet so4_generators(const SpaceParams& p) {
    p.validate();
    constexpr auto chart = Chart::PolarConstant;
    const double k2 = p.kappa2;
    GeneratorSet g;
    g.params = p;
    g.j01 = Observable::make("J01", chart, [p](const auto& x) {
        const auto f = detail::frame(p, x);
        return f.c * x[3] - f.s * f.t1 * x[4];
    });
    g.j02 = Observable::make("J02", chart, [p, k2](const auto& x) {
        const auto f = detail::frame(p, x);
        return k2 * f.s * f.cp * x[3] + f.c * f.cp * f.t1 * x[4] - f.sp * f.t1 / f.s * x[5];
    });
    g.j03 = Observable::make("J03", chart, [p, k2](const auto& x) {
        const auto f = detail::frame(p, x);
        return k2 * f.s * f.sp * x[3] + f.c * f.sp * f.t1 * x[4] + f.cp * f.t1 / f.s * x[5];
    });
    g.j12 = Observable::make("J12", chart, [p](const auto& x) {
        const auto f = detail::frame(p, x);
        return f.cp * x[4] - f.sp * f.c / f.s * x[5];
    });
    g.j13 = Observable::make("J13", chart, [p](const auto& x) {
        const auto f = detail::frame(p, x);
        return f.sp * x[4] + f.cp * f.c / f.s * x[5];
    });
    g.j23 = Observable::make("J23", chart, [](const auto& x) { return x[5]; });
    return g;
}

inline LRLVector lrl(const SpaceParams& p) {
    const GeneratorSet g = so4_generators(p);
    const double k = p.k, k2 = p.kappa2;
    constexpr auto chart = Chart::PolarConstant;
    const auto J01 = g.j01, J02 = g.j02, J03 = g.j03, J12 = g.j12, J13 = g.j13, J23 = g.j23;
    LRLVector l;
    l.l1 = Observable::make("L1", chart, [=](const auto& x) {
        return -evaluate(J02, x) * evaluate(J12, x) - evaluate(J03, x) * evaluate(J13, x) +
               k * k2 * ckappa(k2, x[1]);
    });
    l.l2 = Observable::make("L2", chart, [=](const auto& x) {
        using std::cos;
        return evaluate(J01, x) * evaluate(J12, x) - evaluate(J03, x) * evaluate(J23, x) +
               k * k2 * skappa(k2, x[1]) * cos(x[2]);
    });
    l.l3 = Observable::make("L3", chart, [=](const auto& x) {
        using std::sin;
        return evaluate(J01, x) * evaluate(J13, x) + evaluate(J02, x) * evaluate(J23, x) +
               k * k2 * skappa(k2, x[1]) * sin(x[2]);
    });
    const Observable h = hamiltonian(HamiltonianSpec::named(Family::KeplerCC, p), chart);
    l.mu = Observable::make("mu", chart, [=](const auto& x) {
        return 2.0 * (p.z * detail::angular_casimir(p, x) - k2 * evaluate(h, x));
    });
    return l;
}

/// Constants of motion of a family on a chart:
/// C2, C2mid, C3 always; I2 for FreeCC; L1, L2, L3 for KeplerCC.
inline std::vector<Observable> constants(const HamiltonianSpec& spec, Chart chart) {
    if (!chart_allowed(spec.family, chart))
        throw ChartMismatch("family " + std::string(to_string(spec.family)) + " is not defined on chart " +
                            std::string(to_string(chart)));
    const SpaceParams p = spec.params;
    std::vector<Observable> out;
    if (chart == Chart::Beltrami) {
        const auto c = coalgebra::casimirs(p.z);
        const double k2 = p.kappa2, z = p.z;
        out.push_back((4.0 * c.c12).renamed("C2"));
        out.push_back((4.0 * k2 * c.c23).renamed("C2mid"));
        out.push_back((4.0 * k2 * c.c123).renamed("C3"));
        if (spec.family == Family::FreeCC)
            out.push_back(Observable::make("I2", chart, [z, k2](const auto& x) {
                using std::exp;
                const auto a = x[0] * x[0];
                return 2.0 * k2 * sinhc(z * a) * exp(z * a) * x[3] * x[3];
            }));
        if (spec.family == Family::KeplerCC) {
            const LRLVector l = lrl(p);
            for (const auto* li : {&l.l1, &l.l2, &l.l3}) out.push_back(pull_to_beltrami(*li, p, Chart::PolarConstant));
        }
        return out;
    }
    out.push_back(Observable::make("C2", chart, [](const auto& x) { return x[5] * x[5]; }));
    out.push_back(Observable::make("C2mid", chart, [p](const auto& x) {
        const auto f = detail::frame(p, x);
        const auto j12 = f.cp * x[4] - f.sp * f.c / f.s * x[5];
        return j12 * j12;
    }));
    out.push_back(Observable::make("C3", chart, [p](const auto& x) { return detail::angular_casimir(p, x); }));
    if (spec.family == Family::FreeCC) out.push_back(square(so4_generators(p).j03).renamed("I2"));
    if (spec.family == Family::KeplerCC) {
        const LRLVector l = lrl(p);
        out.push_back(l.l1);
        out.push_back(l.l2);
        out.push_back(l.l3);
    }
    return out;
}

inline const Observable& find(const std::vector<Observable>& set, std::string_view name) {
    for (const auto& o : set)
        if (o.name() == name) return o;
    throw std::invalid_argument("no observable named '" + std::string(name) + "'");
}

/// Random interior PolarConstant state for the given space.
inline StateSampler so4_sampler(const SpaceParams& p) { return polar_sampler(p, Chart::PolarConstant); }

inline BracketReport verify_so4(const SpaceParams& p, std::size_t samples, std::uint64_t seed,
                                const std::optional<Perturbation>& perturbation = std::nullopt) {
    const GeneratorSet g0 = so4_generators(p);
    const auto J = [&](const Observable& o) { return perturb(perturbation, o, o.name()); };
    const Observable j01 = J(g0.j01), j02 = J(g0.j02), j03 = J(g0.j03);
    const Observable j12 = J(g0.j12), j13 = J(g0.j13), j23 = J(g0.j23);
    const double k1 = p.z, k2 = p.kappa2;
    const StateSampler sampler = so4_sampler(p);

    BracketReport rep{"so4", {}};
    IdentityGroup lie("so_{kappa1,kappa2}(4) brackets");
    lie.bracket("{J12,J13} = k2 J23", j12, j13, k2 * j23)
        .bracket("{J12,J23} = -J13", j12, j23, -j13)
        .bracket("{J13,J23} = J12", j13, j23, j12)
        .bracket("{J12,J01} = J02", j12, j01, j02)
        .bracket("{J13,J01} = J03", j13, j01, j03)
        .bracket("{J23,J02} = J03", j23, j02, j03)
        .bracket("{J12,J02} = -k2 J01", j12, j02, -k2 * j01)
        .bracket("{J13,J03} = -k2 J01", j13, j03, -k2 * j01)
        .bracket("{J23,J03} = -J02", j23, j03, -j02)
        .bracket("{J01,J02} = k1 J12", j01, j02, k1 * j12)
        .bracket("{J01,J03} = k1 J13", j01, j03, k1 * j13)
        .bracket("{J02,J03} = k1 k2 J23", j02, j03, k1 * k2 * j23)
        .bracket("{J01,J23} = 0", j01, j23)
        .bracket("{J02,J13} = 0", j02, j13)
        .bracket("{J03,J12} = 0", j03, j12);
    rep.groups.push_back(lie.run(sampler, samples, seed));

    const auto free = HamiltonianSpec::named(Family::FreeCC, p);
    const Observable h = hamiltonian(free, Chart::PolarConstant);
    const auto consts = constants(free, Chart::PolarConstant);
    const Observable casimir = Observable::make("k2 J01^2 + J02^2 + J03^2 + k1 (J12^2 + J13^2 + k2 J23^2)",
                                                Chart::PolarConstant, [=](const auto& x) {
        const auto a = evaluate(j01, x), b = evaluate(j02, x), c = evaluate(j03, x);
        const auto d = evaluate(j12, x), e = evaluate(j13, x), f = evaluate(j23, x);
        return k2 * a * a + b * b + c * c + k1 * (d * d + e * e + k2 * f * f);
    });
    IdentityGroup real("realization of the constants");
    real.value("2 k2 H = quadratic Casimir", 2.0 * k2 * h, casimir)
        .value("C2 = J23^2", find(consts, "C2"), square(j23))
        .value("C2mid = J12^2", find(consts, "C2mid"), square(j12))
        .value("C3 = J12^2 + J13^2 + k2 J23^2", find(consts, "C3"), square(j12) + square(j13) + k2 * square(j23))
        .value("I2 = J03^2", find(consts, "I2"), square(j03));
    rep.groups.push_back(real.run(sampler, samples, seed + 1));
    return rep;
}

inline BracketReport verify_lrl_algebra(const SpaceParams& p, std::size_t samples, std::uint64_t seed,
                                        const std::optional<Perturbation>& perturbation = std::nullopt) {
    const GeneratorSet g = so4_generators(p);
    const LRLVector v = lrl(p);
    const auto P = [&](const Observable& o) { return perturb(perturbation, o, o.name()); };
    const Observable l1 = P(v.l1), l2 = P(v.l2), l3 = P(v.l3);
    const Observable j12 = P(g.j12), j13 = P(g.j13), j23 = P(g.j23);
    const Observable mu = v.mu;
    const Observable h = hamiltonian(HamiltonianSpec::named(Family::KeplerCC, p), Chart::PolarConstant);
    const double k2 = p.kappa2;
    const StateSampler sampler = so4_sampler(p);
    BracketReport rep{"lrl", {}};
    std::uint64_t s = seed;

    IdentityGroup cons("conservation");
    cons.bracket("{L1,H} = 0", l1, h).bracket("{L2,H} = 0", l2, h).bracket("{L3,H} = 0", l3, h);
    rep.groups.push_back(cons.run(sampler, samples, s++));

    IdentityGroup rot("rotation action on L");
    rot.bracket("{J12,L1} = k2 L2", j12, l1, k2 * l2)
        .bracket("{J12,L2} = -L1", j12, l2, -l1)
        .bracket("{J12,L3} = 0", j12, l3)
        .bracket("{J13,L1} = k2 L3", j13, l1, k2 * l3)
        .bracket("{J13,L2} = 0", j13, l2)
        .bracket("{J13,L3} = -L1", j13, l3, -l1)
        .bracket("{J23,L1} = 0", j23, l1)
        .bracket("{J23,L2} = L3", j23, l2, l3)
        .bracket("{J23,L3} = -L2", j23, l3, -l2);
    rep.groups.push_back(rot.run(sampler, samples, s++));

    IdentityGroup mutual("mutual brackets of L");
    mutual.bracket("{L1,L2} = mu J12", l1, l2, mu * j12)
        .bracket("{L1,L3} = mu J13", l1, l3, mu * j13)
        .bracket("{L2,L3} = mu J23", l2, l3, mu * j23);
    rep.groups.push_back(mutual.run(sampler, samples, s++));

    // Even forms: P1 = L1/lambda2, P2 = lambda2 L2, P3 = lambda2 L3.
    IdentityGroup higgs12("Higgs subalgebra {J12, P1, P2}");
    higgs12.bracket("{J12,P1} = P2  <=>  {J12,L1} = k2 L2", j12, l1, k2 * l2)
        .bracket("{J12,P2} = -k2 P1  <=>  {J12,L2} = -L1", j12, l2, -l1)
        .bracket("{P1,P2} = mu J12  <=>  {L1,L2} = mu J12", l1, l2, mu * j12);
    rep.groups.push_back(higgs12.run(sampler, samples, s++));

    IdentityGroup higgs13("Higgs subalgebra {J13, P1, P3}");
    higgs13.bracket("{J13,P1} = P3  <=>  {J13,L1} = k2 L3", j13, l1, k2 * l3)
        .bracket("{J13,P3} = -k2 P1  <=>  {J13,L3} = -L1", j13, l3, -l1)
        .bracket("{P1,P3} = mu J13  <=>  {L1,L3} = mu J13", l1, l3, mu * j13);
    rep.groups.push_back(higgs13.run(sampler, samples, s++));

    IdentityGroup higgs23("Higgs subalgebra {J23, P2, P3}");
    higgs23.bracket("{J23,P2} = P3  <=>  {J23,L2} = L3", j23, l2, l3)
        .bracket("{J23,P3} = -P2  <=>  {J23,L3} = -L2", j23, l3, -l2)
        .bracket("{P2,P3} = mu k2 J23  <=>  k2 {L2,L3} = mu k2 J23", l2, l3, k2 * mu * j23, k2);
    rep.groups.push_back(higgs23.run(sampler, samples, s++));

    IdentityGroup rotations("rotation subalgebra");
    rotations.bracket("{J12,J13} = k2 J23", j12, j13, k2 * j23)
        .bracket("{J12,J23} = -J13", j12, j23, -j13)
        .bracket("{J13,J23} = J12", j13, j23, j12);
    rep.groups.push_back(rotations.run(sampler, samples, s++));

    IdentityGroup vanish("vanishing pairs");
    vanish.bracket("{P1,J23} = 0", l1, j23).bracket("{P2,J13} = 0", l2, j13).bracket("{P3,J12} = 0", l3, j12);
    rep.groups.push_back(vanish.run(sampler, samples, s++));

    IdentityGroup invol("involution triples");
    const Observable j23sq = square(j23), j12sq = square(j12);
    const auto cc = constants(HamiltonianSpec::named(Family::KeplerCC, p), Chart::PolarConstant);
    const Observable j13sq = (find(cc, "C3") - find(cc, "C2mid") - k2 * find(cc, "C2")).renamed("J13^2");
    invol.bracket("{J23^2,L1} = 0", j23sq, l1)
        .bracket("{J23^2,H} = 0", j23sq, h)
        .bracket("{J13^2,L2} = 0", j13sq, l2)
        .bracket("{J13^2,H} = 0", j13sq, h)
        .bracket("{J12^2,L3} = 0", j12sq, l3)
        .bracket("{J12^2,H} = 0", j12sq, h)
        .value("J13^2 = C3 - C2mid - k2 C2", j13sq, square(g.j13));
    rep.groups.push_back(invol.run(sampler, samples, s++));
    return rep;
}

/// Numerical rank of the Jacobian of `observables` at s (threshold relative to the largest singular value).
inline int independence_rank(const std::vector<Observable>& observables, const PhaseState& s,
                             double rel_threshold = 1e-8) {
    if (observables.empty()) return 0;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(observables.size()), 6);
    for (std::size_t i = 0; i < observables.size(); ++i) {
        const Gradient g = grad(observables[i], s);
        for (std::size_t j = 0; j < 6; ++j) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[j];
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_threshold * sv(0)) ++rank;
    return rank;
}

}  // namespace curvkepler
