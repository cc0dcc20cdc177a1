#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvkepler/geometry.hpp"
#include "curvkepler/spaces.hpp"
#include "curvkepler/symmetry.hpp"

using namespace curvkepler;

namespace {

constexpr double pi = std::numbers::pi;

PhaseState bel(std::array<double, 6> x) { return {Chart::Beltrami, x}; }

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

std::vector<PhaseState> beltrami_points(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    Rng rng(seed);
    std::vector<PhaseState> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(coalgebra::sample_beltrami(rng, lo, hi, 0.05));
    return out;
}

std::vector<PhaseState> polar_points(const SpaceParams& p, Chart chart, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const PolarBox box = default_box(p, chart);
    std::vector<PhaseState> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_polar(rng, chart, box));
    return out;
}

// Textbook spherical coordinates with axis order (q3 polar, q2, q1 azimuthal), radius sqrt(2)|q|.
std::array<double, 6> spherical_oracle(const PhasePoint& s) {
    const double q1 = s[0], q2 = s[1], q3 = s[2];
    const double rq = std::sqrt(q1 * q1 + q2 * q2 + q3 * q3);
    const double th = std::acos(q3 / rq);
    const double ph = std::atan2(q1, q2);
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    const double rho = std::sqrt(2.0) * rq;
    // p_X = 2 (dq/dX)^T p with q = (rho/sqrt2)(st sp, st cp, ct)
    const double a = 1.0 / std::sqrt(2.0);
    const double prho = 2.0 * a * (st * sp * s[3] + st * cp * s[4] + ct * s[5]);
    const double pth = 2.0 * a * rho * (ct * sp * s[3] + ct * cp * s[4] - st * s[5]);
    const double pph = 2.0 * a * rho * (st * cp * s[3] - st * sp * s[4]);
    return {rho, th, ph, prho, pth, pph};
}

const std::array<Family, 4> kNamed{Family::FreeNC, Family::FreeCC, Family::KeplerNC, Family::KeplerCC};

}  // namespace

TEST(SpaceParams, CouplingAndValidation) {
    const SpaceParams p = SpaceParams::from_gamma(0.3, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(p.k, 2.0 * std::sqrt(2.0) * 0.5);
    EXPECT_DOUBLE_EQ(SpaceParams::from_k(0.0, 1.0, 1.0).gamma, 1.0 / (2.0 * std::sqrt(2.0)));
    EXPECT_THROW(SpaceParams::from_k(0.1, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW((SpaceParams{0.0, 1.0, 1.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW(SpaceParams::from_k(NAN, 1.0, 1.0), std::invalid_argument);
}

TEST(SpaceParams, Presets) {
    const std::map<std::string, std::pair<double, double>> expected{
        {"spherical", {1, 1}},    {"euclidean", {0, 1}}, {"hyperbolic", {-1, 1}},
        {"antidesitter", {1, -1}}, {"minkowski", {0, -1}}, {"desitter", {-1, -1}}};
    for (const auto& [name, zk] : expected) {
        const SpaceParams p = preset(name, 2.0);
        EXPECT_EQ(p.z, zk.first) << name;
        EXPECT_EQ(p.kappa2, zk.second) << name;
        EXPECT_EQ(p.k, 2.0);
    }
    EXPECT_THROW(preset("torus"), std::invalid_argument);
}

TEST(Names, ParseRoundTrip) {
    for (Family f : kNamed) EXPECT_EQ(parse_family(to_string(f)), f);
    for (Chart c : {Chart::Beltrami, Chart::PolarVariable, Chart::PolarConstant}) EXPECT_EQ(parse_chart(to_string(c)), c);
    EXPECT_THROW(parse_family("kepler"), std::invalid_argument);
    EXPECT_THROW(parse_geometry("xx"), std::invalid_argument);
}

TEST(Hamiltonian, SpecExamples) {
    const auto h = hamiltonian(HamiltonianSpec::named(Family::FreeNC, SpaceParams::from_k(0.0, 1.0, 1.0)),
                               Chart::Beltrami);
    for (const auto& s : beltrami_points(20, 1)) {
        const double p2 = s.x[3] * s.x[3] + s.x[4] * s.x[4] + s.x[5] * s.x[5];
        EXPECT_NEAR(h(s), p2, 1e-14 * std::max(1.0, p2));
    }
    const auto hk = hamiltonian(HamiltonianSpec::named(Family::KeplerCC, preset("euclidean")), Chart::PolarConstant);
    EXPECT_NEAR(hk(PhaseState{Chart::PolarConstant, {1, pi / 2, 0, 0, 0, 1}}), -0.5, 1e-15);

    const SpaceParams p = SpaceParams::from_k(0.2, 1.0, 1.0);
    const auto spec = HamiltonianSpec::named(Family::FreeCC, p);
    for (const auto& s : beltrami_points(20, 2))
        EXPECT_LT(rel(hamiltonian(spec, Chart::Beltrami)(s),
                      hamiltonian(spec, Chart::PolarConstant)(to_polar(s, p, Chart::PolarConstant))),
                  1e-10);
}

TEST(Hamiltonian, ChartCompatibility) {
    const SpaceParams p = preset("spherical");
    EXPECT_THROW(hamiltonian(HamiltonianSpec::named(Family::FreeNC, p), Chart::PolarConstant), ChartMismatch);
    EXPECT_THROW(hamiltonian(HamiltonianSpec::named(Family::KeplerCC, p), Chart::PolarVariable), ChartMismatch);
    EXPECT_THROW(HamiltonianSpec::named(Family::Custom, p), std::invalid_argument);
    const auto h = hamiltonian(HamiltonianSpec::named(Family::KeplerCC, p), Chart::PolarConstant);
    EXPECT_THROW(h(bel({0.1, 0.2, 0.3, 0, 0, 0})), ChartMismatch);
}

TEST(Hamiltonian, AgreesAcrossChartsForAllFamilies) {
    for (double z : {-0.6, 0.0, 0.4})
        for (double k2 : {0.5, 1.0}) {
            const SpaceParams p = SpaceParams::from_k(z, k2, 1.3);
            for (Family f : kNamed) {
                const auto spec = HamiltonianSpec::named(f, p);
                const Chart chart = native_polar_chart(f);
                const auto hb = hamiltonian(spec, Chart::Beltrami), hp = hamiltonian(spec, chart);
                for (const auto& s : polar_points(p, chart, 50, 3)) EXPECT_LT(rel(hb(from_polar(s, p)), hp(s)), 1e-10);
            }
        }
}

TEST(Hamiltonian, KeplerContraction) {
    for (double z : {0.0, 1e-10})
        for (Family f : {Family::KeplerNC, Family::KeplerCC}) {
            const SpaceParams p = SpaceParams::from_gamma(z, 1.0, 0.7);
            const auto h = hamiltonian(HamiltonianSpec::named(f, p), Chart::Beltrami);
            for (const auto& s : beltrami_points(50, 4)) {
                const auto& x = s.x;
                const double p2 = x[3] * x[3] + x[4] * x[4] + x[5] * x[5];
                const double q = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
                EXPECT_LT(rel(0.5 * h(s), 0.5 * p2 - p.gamma / q), 1e-8);
            }
        }
}

TEST(Hamiltonian, CustomFamilyReproducesNamedKepler) {
    const SpaceParams p = SpaceParams::from_k(0.3, 1.0, 1.0);
    CustomTerms t;
    t.f = [](const KScalar& u) {
        using std::exp;
        return exp(u);
    };
    const double g = p.gamma;
    t.potential = [g](double z, const KScalar& jm) {
        using std::sqrt;
        return -g / sqrt(jm * exprel(2.0 * z * jm));
    };
    const auto custom = HamiltonianSpec::custom_family(p, t);
    const auto named = HamiltonianSpec::named(Family::KeplerCC, p);
    for (const auto& s : beltrami_points(20, 5)) {
        EXPECT_LT(rel(hamiltonian(custom, Chart::Beltrami)(s), hamiltonian(named, Chart::Beltrami)(s)), 1e-13);
        const PhaseState sp = to_polar(s, p, Chart::PolarConstant);
        EXPECT_LT(rel(hamiltonian(custom, Chart::PolarConstant)(sp), hamiltonian(named, Chart::PolarConstant)(sp)),
                  1e-10);
    }
    CustomTerms bad = t;
    bad.f = [](const KScalar& u) { return 2.0 + u; };
    EXPECT_THROW(HamiltonianSpec::custom_family(p, bad), std::invalid_argument);
    bad = t;
    bad.potential = [](double, const KScalar& jm) { return -1.0 / jm; };
    EXPECT_THROW(HamiltonianSpec::custom_family(p, bad), std::invalid_argument);
}

TEST(ChartMap, OriginAndPoleLimits) {
    const SpaceParams p = SpaceParams::from_k(0.4, 1.0, 1.0);
    for (Chart c : {Chart::PolarVariable, Chart::PolarConstant}) {
        const auto x = polar_position(Triple<double>{0.0, 0.0, 0.0}, p, c);
        EXPECT_EQ(x[0], 0.0);
        EXPECT_NEAR(ckappa(-p.z, x[0]) * ckappa(-p.z, x[0]), 1.0, 1e-15);
        const auto q = beltrami_position(Triple<double>{0.0, 0.7, 0.3}, p, c);
        for (double v : q) EXPECT_EQ(v, 0.0);
    }
    EXPECT_THROW(to_polar(bel({0, 0, 0, 1, 1, 1}), p, Chart::PolarVariable), SingularityError);
    EXPECT_THROW(from_polar(PhaseState{Chart::PolarVariable, {0, 1, 1, 0, 0, 0}}, p), SingularityError);
    EXPECT_THROW(from_polar(PhaseState{Chart::PolarConstant, {0.5, 3.5, 1, 0, 0, 0}}, p), DomainError);
    EXPECT_THROW(from_polar(PhaseState{Chart::PolarConstant, {0.5, 0.0, 1, 0, 0, 0}}, p), SingularityError);
}

TEST(ChartMap, FlatLimitIsSphericalCoordinates) {
    for (double z : {0.0, 1e-10}) {
        const SpaceParams p = SpaceParams::from_k(z, 1.0, 1.0);
        for (const auto& s : beltrami_points(30, 6)) {
            const auto oracle = spherical_oracle(s.x);
            for (Chart c : {Chart::PolarVariable, Chart::PolarConstant}) {
                const PhaseState t = to_polar(s, p, c);
                for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(t.x[i], oracle[i], 1e-6 * std::max(1.0, std::abs(oracle[i])));
            }
        }
    }
}

TEST(ChartMap, RoundTripsOnAllOctants) {
    for (double z : {-0.7, 0.0, 0.5})
        for (double k2 : {0.5, 1.0, 2.0}) {
            const SpaceParams p = SpaceParams::from_k(z, k2, 1.0);
            for (Chart c : {Chart::PolarVariable, Chart::PolarConstant}) {
                for (const auto& s : beltrami_points(100, 7)) {
                    const PhaseState back = from_polar(to_polar(s, p, c), p);
                    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(back.x[i], s.x[i], 1e-10) << i;
                }
                for (const auto& s : polar_points(p, c, 100, 8)) {
                    const PhaseState back = to_polar(from_polar(s, p), p, c);
                    EXPECT_NEAR(back.x[0], s.x[0], 1e-10);
                    EXPECT_NEAR(back.x[1], s.x[1], 1e-10);
                    EXPECT_NEAR(std::remainder(back.x[2] - s.x[2], 2 * pi), 0.0, 1e-10);
                    for (std::size_t i = 3; i < 6; ++i) EXPECT_NEAR(back.x[i], s.x[i], 1e-10);
                }
            }
        }
}

TEST(ChartMap, LorentzianSignatureHasNoBeltramiImage) {
    const SpaceParams p = preset("desitter");
    EXPECT_THROW(to_polar(bel({0.3, 0.2, 0.4, 0, 0, 0}), p, Chart::PolarConstant), std::exception);
    EXPECT_THROW(from_polar(PhaseState{Chart::PolarConstant, {0.5, 0.5, 0.5, 0, 0, 0}}, p), std::exception);
}

TEST(ChartMap, CanonicalLiftPreservesBrackets) {
    for (double z : {-0.5, 0.3}) {
        const SpaceParams p = SpaceParams::from_k(z, 1.0, 1.0);
        for (Chart c : {Chart::PolarVariable, Chart::PolarConstant}) {
            std::array<Observable, 6> lifted, doubled;
            for (int i = 0; i < 6; ++i) {
                lifted[static_cast<std::size_t>(i)] = pull_to_beltrami(Observable::coordinate(i, c), p, c, 1.0);
                doubled[static_cast<std::size_t>(i)] = pull_to_beltrami(Observable::coordinate(i, c), p, c);
            }
            for (const auto& s : beltrami_points(50, 9))
                for (std::size_t i = 0; i < 6; ++i)
                    for (std::size_t j = 0; j < 6; ++j) {
                        const double canonical = (i < 3 && j == i + 3) ? 1.0 : (j < 3 && i == j + 3) ? -1.0 : 0.0;
                        EXPECT_NEAR(pbracket(lifted[i], lifted[j], s), canonical, 1e-9);
                        // the default lift doubles momenta, so brackets pick up the same factor
                        EXPECT_NEAR(pbracket(doubled[i], doubled[j], s), kPolarMomentumScale * canonical, 1e-9);
                    }
        }
    }
}

TEST(Constants, AgreeAcrossChartsWithStatedScalings) {
    for (double z : {-0.4, 0.0, 0.6}) {
        const SpaceParams p = SpaceParams::from_k(z, 0.8, 1.0);
        for (Family f : kNamed) {
            const auto spec = HamiltonianSpec::named(f, p);
            const Chart c = native_polar_chart(f);
            const auto cb = constants(spec, Chart::Beltrami), cp = constants(spec, c);
            ASSERT_EQ(cb.size(), cp.size());
            for (const auto& s : beltrami_points(30, 10)) {
                const PhaseState t = to_polar(s, p, c);
                for (std::size_t i = 0; i < cb.size(); ++i) {
                    EXPECT_EQ(cb[i].name(), cp[i].name());
                    EXPECT_LT(rel(cb[i](s), cp[i](t)), 1e-10) << to_string(f) << " " << cb[i].name();
                }
            }
        }
    }
}

TEST(Metric, SpecExamples) {
    const Mat3 g = metric(Chart::Beltrami, Geometry::NC, {0.4, -0.3, 0.9}, SpaceParams::from_k(0.0, 1.0, 1.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(g[i][j], i == j ? 2.0 : 0.0);
    const double th = 0.8;
    const Mat3 gs = metric(Chart::PolarConstant, Geometry::CC, {pi / 2, th, 0.3}, preset("spherical"));
    EXPECT_NEAR(gs[0][0], 1.0, 1e-15);
    EXPECT_NEAR(gs[1][1], 1.0, 1e-15);
    EXPECT_NEAR(gs[2][2], std::sin(th) * std::sin(th), 1e-15);
    EXPECT_THROW(metric(Chart::PolarConstant, Geometry::CC, {0.0, th, 0.3}, preset("spherical")), SingularityError);
}

TEST(Metric, ConstantCurvatureIsConformalToVariable) {
    const SpaceParams p = SpaceParams::from_k(0.35, 1.0, 1.0);
    for (const auto& s : beltrami_points(20, 12)) {
        const Vec3 q{s.x[0], s.x[1], s.x[2]};
        const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
        const Mat3 nc = metric(Chart::Beltrami, Geometry::NC, q, p), cc = metric(Chart::Beltrami, Geometry::CC, q, p);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(cc[i][i], nc[i][i] * std::exp(-p.z * q2), 1e-14 * nc[i][i]);
    }
}

// Legendre oracle: the momentum Hessian of H equals s^2 g^{-1}, with s the momentum scale of the chart
// relative to Beltrami momenta (Beltrami 2, polar 1), i.e. 2T(v) = g(v, v) for v = dH/dp / s.
TEST(Metric, LegendreTransformOfHamiltonian) {
    for (double z : {-0.5, 0.3})
        for (Family f : kNamed) {
            const SpaceParams p = SpaceParams::from_k(z, 1.0, 1.0);
            const auto spec = HamiltonianSpec::named(f, p);
            const Geometry kind = (f == Family::FreeNC || f == Family::KeplerNC) ? Geometry::NC : Geometry::CC;
            for (Chart c : {Chart::Beltrami, native_polar_chart(f)}) {
                const auto h = hamiltonian(spec, c);
                const double scale = c == Chart::Beltrami ? kPolarMomentumScale : 1.0;
                for (const auto& sb : beltrami_points(10, 13)) {
                    const PhaseState s = c == Chart::Beltrami ? sb : to_polar(sb, p, c);
                    const auto kinetic = [&](const std::array<double, 3>& mom) {
                        PhaseState a = s, b = s;
                        for (std::size_t i = 0; i < 3; ++i) a.x[i + 3] = mom[i];
                        for (std::size_t i = 0; i < 3; ++i) b.x[i + 3] = 0.0;
                        return h(a) - h(b);
                    };
                    const Mat3 ginv = detail::inverse(metric(c, kind, {s.x[0], s.x[1], s.x[2]}, p));
                    for (std::size_t i = 0; i < 3; ++i)
                        for (std::size_t j = 0; j < 3; ++j) {
                            std::array<double, 3> ei{}, ej{}, eij{};
                            ei[i] = 1;
                            ej[j] = 1;
                            eij[i] += 1;
                            eij[j] += 1;
                            const double hess = kinetic(eij) - kinetic(ei) - kinetic(ej);  // = 2 B(e_i, e_j)
                            EXPECT_NEAR(hess, scale * scale * ginv[i][j], 1e-10 * std::max(1.0, std::abs(hess)));
                        }
                    // Lagrangian form: g(v, v) with v = (dH/dp)/s equals the Legendre value p.v - ... = K(p)*2/s^2
                    const Gradient dh = grad(h, s);
                    const Mat3 g = metric(c, kind, {s.x[0], s.x[1], s.x[2]}, p);
                    double gvv = 0.0;
                    for (std::size_t i = 0; i < 3; ++i)
                        for (std::size_t j = 0; j < 3; ++j) gvv += g[i][j] * dh[i + 3] * dh[j + 3];
                    const double two_t = gvv / (scale * scale);
                    const double legendre = 2.0 * kinetic({s.x[3], s.x[4], s.x[5]});
                    EXPECT_NEAR(two_t, legendre, 1e-10 * std::max(1.0, std::abs(legendre)));
                }
            }
        }
}

TEST(RadialReduction, EuclideanEffectivePotential) {
    for (Family f : {Family::KeplerCC, Family::KeplerNC}) {
        const auto red = radial_reduction(HamiltonianSpec::named(f, preset("euclidean")), 1.0);
        for (double r : {0.3, 1.0, 2.5}) EXPECT_NEAR(red.potential(r), 0.5 / (r * r) - 1.0 / r, 1e-15);
        // golden-section search for the minimum
        double a = 0.2, b = 5.0;
        const double gr = (std::sqrt(5.0) - 1) / 2;
        for (int i = 0; i < 200; ++i) {
            const double c = b - gr * (b - a), d = a + gr * (b - a);
            (red.potential(c) < red.potential(d) ? b : a) = (red.potential(c) < red.potential(d) ? d : c);
        }
        EXPECT_NEAR(0.5 * (a + b), 1.0, 1e-7);
        EXPECT_NEAR(red.potential(0.5 * (a + b)), -0.5, 1e-14);
        EXPECT_NEAR(red.hamiltonian(1.0, 0.4), 0.5 * 0.16 - 0.5, 1e-15);
    }
    EXPECT_THROW(radial_reduction(HamiltonianSpec::named(Family::FreeCC, preset("euclidean")), 1.0),
                 std::invalid_argument);
    EXPECT_THROW(radial_reduction(HamiltonianSpec::named(Family::KeplerCC, preset("euclidean")), -1.0),
                 std::invalid_argument);
}

TEST(RadialReduction, MatchesFullHamiltonian) {
    for (const char* name : {"spherical", "hyperbolic", "desitter"}) {
        const SpaceParams p = preset(name);
        const auto spec = HamiltonianSpec::named(Family::KeplerCC, p);
        const auto h = hamiltonian(spec, Chart::PolarConstant);
        const auto c3 = find(constants(spec, Chart::PolarConstant), "C3");
        for (const auto& s : polar_points(p, Chart::PolarConstant, 30, 14)) {
            const auto red = radial_reduction(spec, c3(s));
            EXPECT_LT(rel(red.hamiltonian(s.x[0], s.x[3]), h(s)), 1e-12);
        }
    }
}

TEST(Samplers, StayInsideTheirBoxes) {
    for (const auto& pr : kPresets) {
        const SpaceParams p = preset(pr.name);
        const PolarBox box = default_box(p, Chart::PolarConstant);
        for (const auto& s : polar_points(p, Chart::PolarConstant, 100, 15)) {
            EXPECT_GE(s.x[0], box.radius_lo);
            EXPECT_LE(s.x[0], box.radius_hi);
            EXPECT_GT(chart_margin(s, p), 1e-3);
        }
    }
}
