#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "curvkepler/geometry.hpp"

using namespace curvkepler;

namespace {

std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed, Vec3 lo, Vec3 hi) {
    Rng rng(seed);
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]), rng.uniform(lo[2], hi[2])});
    return out;
}

void expect_close(const Curvature& a, const Curvature& b, double tol) {
    EXPECT_NEAR(a.k12, b.k12, tol);
    EXPECT_NEAR(a.k13, b.k13, tol);
    EXPECT_NEAR(a.k23, b.k23, tol);
    EXPECT_NEAR(a.scalar, b.scalar, tol);
}

}  // namespace

TEST(NumericCurvature, UnitThreeSphere) {
    const auto g = [](const Vec3& x) {
        const double s = std::sin(x[0]), t = std::sin(x[1]);
        return Mat3{{{1, 0, 0}, {0, s * s, 0}, {0, 0, s * s * t * t}}};
    };
    for (const auto& x : random_points(10, 1, {0.4, 0.4, 0.0}, {2.5, 2.5, 6.0}))
        expect_close(numeric_curvature(g, x), {1, 1, 1, 6}, 1e-6);
}

TEST(NumericCurvature, FlatSpaceInSphericalCoordinates) {
    const auto g = [](const Vec3& x) {
        const double t = std::sin(x[1]);
        return Mat3{{{1, 0, 0}, {0, x[0] * x[0], 0}, {0, 0, x[0] * x[0] * t * t}}};
    };
    for (const auto& x : random_points(10, 2, {0.5, 0.4, 0.0}, {3.0, 2.5, 6.0}))
        expect_close(numeric_curvature(g, x), {0, 0, 0, 0}, 1e-6);
}

TEST(NumericCurvature, ProductOfSphereAndLine) {
    // S^2 of radius 2 in (x1, x2), line in x3: K12 = 1/4, others 0, scalar 1/2
    const auto g = [](const Vec3& x) {
        const double s = std::sin(x[0]);
        return Mat3{{{4, 0, 0}, {0, 4 * s * s, 0}, {0, 0, 1}}};
    };
    for (const auto& x : random_points(10, 3, {0.4, 0.0, -1.0}, {2.5, 6.0, 1.0}))
        expect_close(numeric_curvature(g, x), {0.25, 0, 0, 0.5}, 1e-6);
}

TEST(Curvature, ConstantCurvatureOnEveryChart) {
    const SpaceParams p = SpaceParams::from_k(0.3, 1.0, 1.0);
    const Vec3 polar{0.7, 1.0, 0.4};
    for (const auto& [chart, x] : {std::pair{Chart::Beltrami, Vec3{0.4, 0.5, 0.3}}, std::pair{Chart::PolarVariable, polar},
                                   std::pair{Chart::PolarConstant, polar}}) {
        const auto res = curvature(chart, Geometry::CC, x, p);
        EXPECT_NEAR(res.numeric.scalar, 1.8, 1e-5) << to_string(chart);
        EXPECT_NEAR(res.numeric.k12, 0.3, 1e-5);
        EXPECT_NEAR(res.numeric.k13, 0.3, 1e-5);
        EXPECT_NEAR(res.numeric.k23, 0.3, 1e-5);
        ASSERT_TRUE(res.closed_form.has_value());
        EXPECT_EQ(res.closed_form->scalar, 6 * 0.3);
    }
}

TEST(Curvature, VariableCurvatureVanishesAtOrigin) {
    const auto res = curvature(Chart::Beltrami, Geometry::NC, {0.0, 0.0, 0.0}, SpaceParams::from_k(0.6, 1.0, 1.0));
    EXPECT_NEAR(res.numeric.scalar, 0.0, 1e-6);
    EXPECT_EQ(res.closed_form->scalar, 0.0);
}

TEST(Curvature, VariablePolarScalarAgainstHyperbolicFunctions) {
    const double z = 0.25, lam = 0.5, rho = 1.0;
    const auto res = curvature(Chart::PolarVariable, Geometry::NC, {rho, 1.1, 0.3}, SpaceParams::from_k(z, 1.0, 1.0));
    const double expected = -2.5 * lam * lam * std::pow(std::sinh(lam * rho), 2) / std::cosh(lam * rho);
    EXPECT_NEAR(res.numeric.scalar, expected, 1e-4);
    EXPECT_NEAR(res.closed_form->scalar, expected, 1e-14);
}

TEST(Curvature, ClosedFormsAtRandomPoints) {
    for (double z : {-0.6, 0.35, 0.8}) {
        const SpaceParams p = SpaceParams::from_k(z, 1.0, 1.0);
        for (const auto& x : random_points(20, 4, {0.2, 0.2, 0.2}, {0.9, 0.9, 0.9})) {
            const auto res = curvature(Chart::Beltrami, Geometry::NC, x, p);
            expect_close(res.numeric, *res.closed_form, 1e-4);
            const double q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            EXPECT_NEAR(res.closed_form->scalar, -5 * z * std::sinh(z * q2), 1e-14);
        }
        for (Chart c : {Chart::PolarVariable, Chart::PolarConstant})
            for (const auto& x : random_points(20, 5, {0.3, 0.4, 0.0}, {1.0, 2.6, 6.0})) {
                const auto res = curvature(c, Geometry::NC, x, p);
                expect_close(res.numeric, *res.closed_form, 1e-4);
            }
    }
}

TEST(Curvature, FlatWhenUndeformed) {
    const SpaceParams p = SpaceParams::from_k(0.0, 1.0, 1.0);
    for (Geometry kind : {Geometry::NC, Geometry::CC}) {
        expect_close(curvature(Chart::Beltrami, kind, {0.3, 0.6, 0.8}, p).numeric, {0, 0, 0, 0}, 1e-6);
        expect_close(curvature(Chart::PolarConstant, kind, {0.9, 1.2, 0.5}, p).numeric, {0, 0, 0, 0}, 1e-6);
    }
}

TEST(Curvature, LorentzianSignatureIsSupportedOnPolarCharts) {
    const SpaceParams p = preset("desitter");
    const auto res = curvature(Chart::PolarConstant, Geometry::CC, {0.8, 0.6, 0.2}, p);
    EXPECT_NEAR(res.numeric.scalar, -6.0, 1e-5);
}

TEST(Curvature, RejectsStencilsTouchingSingularities) {
    EXPECT_THROW(curvature(Chart::PolarConstant, Geometry::CC, {1e-5, 1.0, 0.3}, preset("spherical")),
                 SingularityError);
    EXPECT_THROW(curvature(Chart::PolarConstant, Geometry::CC, {0.5, 0.0, 0.3}, preset("spherical")),
                 SingularityError);
}
