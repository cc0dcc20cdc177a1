#pragma once

/**
 * @file geometry.hpp
 * @brief Metrics of the curved spaces and their curvature from finite differences.
 *
 * The Beltrami-chart metric keeps the overall factor 2 of the Lagrangian form,
 * ds^2 = sum_i 2 a_i dq_i^2, so at z = 0 it is 2 * identity.  The polar metrics are
 *   PolarVariable: (1/C_{-z}(rho)) (drho^2 + kappa2 S_{-z}^2(rho) (dtheta^2 + S_{kappa2}^2(theta) dphi^2))
 *   PolarConstant: dr^2 + kappa2 S_z^2(r) (dtheta^2 + S_{kappa2}^2(theta) dphi^2)
 * and ds^2_cc = ds^2_nc e^{-z q^2} relates the two geometries on every chart.
 *
 * Curvature: R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb},
 * with Christoffel symbols from central differences of the metric and their
 * derivatives from central differences of the Christoffels.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "curvkepler/kappa.hpp"
#include "curvkepler/phase.hpp"
#include "curvkepler/spaces.hpp"

namespace curvkepler {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct Curvature {
    double k12 = 0.0;
    double k13 = 0.0;
    double k23 = 0.0;
    double scalar = 0.0;
};

struct CurvatureResult {
    Curvature numeric;
    std::optional<Curvature> closed_form;
};

namespace detail {

inline void require_regular_metric(const Mat3& g, std::string_view what) {
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(g[i][i]) || std::abs(g[i][i]) < 1e-14)
            throw SingularityError(std::string(what) + ": metric degenerates at this point");
}

inline Mat3 diagonal(double a, double b, double c) { return {{{a, 0.0, 0.0}, {0.0, b, 0.0}, {0.0, 0.0, c}}}; }

inline Mat3 inverse(const Mat3& g) {
    const double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                       g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                       g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    Mat3 inv{};
    inv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) / det;
    inv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) / det;
    inv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) / det;
    inv[1][0] = (g[1][2] * g[2][0] - g[1][0] * g[2][2]) / det;
    inv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) / det;
    inv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) / det;
    inv[2][0] = (g[1][0] * g[2][1] - g[1][1] * g[2][0]) / det;
    inv[2][1] = (g[0][1] * g[2][0] - g[0][0] * g[2][1]) / det;
    inv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) / det;
    return inv;
}

/// Smallest of the radial and angular S factors (and C_{-z} on the variable chart), with sign.
inline double signed_polar_margin(Chart chart, const Vec3& x, const SpaceParams& p) {
    const double angular = skappa(p.kappa2, x[1]);
    if (chart == Chart::PolarVariable) return std::min({skappa(-p.z, x[0]), ckappa(-p.z, x[0]), angular});
    return std::min(skappa(p.z, x[0]), angular);
}

}  // namespace detail

/// Metric coefficients at a position triple of `chart`.
inline Mat3 metric(Chart chart, Geometry kind, const Vec3& x, const SpaceParams& p) {
    const double z = p.z;
    Mat3 g{};
    switch (chart) {
        case Chart::Beltrami: {
            const double a1 = x[0] * x[0], a2 = x[1] * x[1], a3 = x[2] * x[2];
            const double cc = kind == Geometry::CC ? std::exp(-z * (a1 + a2 + a3)) : 1.0;
            g = detail::diagonal(2.0 / sinhc(z * a1) * std::exp(-z * a2) * std::exp(-z * a3) * cc,
                                 2.0 / sinhc(z * a2) * std::exp(z * a1) * std::exp(-z * a3) * cc,
                                 2.0 / sinhc(z * a3) * std::exp(z * a1) * std::exp(z * a2) * cc);
            break;
        }
        case Chart::PolarVariable: {
            const double c = ckappa(-z, x[0]), s = skappa(-z, x[0]);
            const double st = skappa(p.kappa2, x[1]);
            const double conf = kind == Geometry::NC ? 1.0 / c : 1.0 / (c * c);
            g = detail::diagonal(conf, conf * p.kappa2 * s * s, conf * p.kappa2 * s * s * st * st);
            break;
        }
        case Chart::PolarConstant: {
            const double c = ckappa(z, x[0]), s = skappa(z, x[0]);
            const double st = skappa(p.kappa2, x[1]);
            const double conf = kind == Geometry::CC ? 1.0 : 1.0 / c;
            g = detail::diagonal(conf, conf * p.kappa2 * s * s, conf * p.kappa2 * s * s * st * st);
            break;
        }
    }
    detail::require_regular_metric(g, "metric");
    return g;
}

/// Curvature formulas known in closed form for (chart, kind); empty otherwise.
inline std::optional<Curvature> curvature_closed_form(Chart chart, Geometry kind, const Vec3& x,
                                                      const SpaceParams& p) {
    const double z = p.z;
    if (kind == Geometry::CC) return Curvature{z, z, z, 6.0 * z};
    switch (chart) {
        case Chart::Beltrami: {
            const double e1 = std::exp(2.0 * z * x[0] * x[0]);
            const double e2 = std::exp(2.0 * z * x[1] * x[1]);
            const double e3 = std::exp(2.0 * z * x[2] * x[2]);
            const double q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            const double pre = 0.25 * z * std::exp(-z * q2);
            const double eq = e1 * e2 * e3;
            return Curvature{pre * (1.0 + e3 - 2.0 * eq), pre * (2.0 - e3 + e2 * e3 - 2.0 * eq),
                             pre * (2.0 - e2 * e3 - eq), -5.0 * z * std::sinh(z * q2)};
        }
        case Chart::PolarVariable: {
            const double c = ckappa(-z, x[0]), s = skappa(-z, x[0]);
            const double k12 = -0.5 * z * z * s * s / c;
            return Curvature{k12, k12, 0.5 * k12, 5.0 * k12};
        }
        case Chart::PolarConstant: {
            // same planes as the variable chart, with C_{-z}(rho) = 1/C_z(r)
            const double c = ckappa(z, x[0]), s = skappa(z, x[0]);
            const double k12 = -0.5 * z * z * s * s / c;
            return Curvature{k12, k12, 0.5 * k12, 5.0 * k12};
        }
    }
    return std::nullopt;
}

/// Step of the central differences in the curvature pipeline.
inline constexpr double kCurvatureStep = 1e-4;

/// Sectional curvatures of the coordinate planes and the scalar curvature, from the metric alone.
template <class MetricFn>
Curvature numeric_curvature(MetricFn g_at, const Vec3& x, double h = kCurvatureStep) {
    using Gamma = std::array<Mat3, 3>;  // Gamma[a][b][c] = G^a_{bc}
    const auto christoffel = [&](const Vec3& y) {
        std::array<Mat3, 3> dg{};  // dg[k][i][j] = d_k g_ij
        for (int k = 0; k < 3; ++k) {
            Vec3 yp = y, ym = y;
            yp[k] += h;
            ym[k] -= h;
            const Mat3 gp = g_at(yp), gm = g_at(ym);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
        }
        const Mat3 ginv = detail::inverse(g_at(y));
        Gamma gam{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    double acc = 0.0;
                    for (int d = 0; d < 3; ++d) acc += ginv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                    gam[a][b][c] = 0.5 * acc;
                }
        return gam;
    };

    const Gamma gam = christoffel(x);
    std::array<Gamma, 3> dgam{};  // dgam[e] = d_e Gamma
    for (int e = 0; e < 3; ++e) {
        Vec3 xp = x, xm = x;
        xp[e] += h;
        xm[e] -= h;
        const Gamma gp = christoffel(xp), gm = christoffel(xm);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) dgam[e][a][b][c] = (gp[a][b][c] - gm[a][b][c]) / (2.0 * h);
    }

    // R^a_{bcd}
    double riem[3][3][3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    double r = dgam[c][a][d][b] - dgam[d][a][c][b];
                    for (int e = 0; e < 3; ++e) r += gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b];
                    riem[a][b][c][d] = r;
                }

    const Mat3 g = g_at(x);
    const Mat3 ginv = detail::inverse(g);
    const auto lowered = [&](int a, int b, int c, int d) {
        double acc = 0.0;
        for (int e = 0; e < 3; ++e) acc += g[a][e] * riem[e][b][c][d];
        return acc;
    };
    // K(i,j) = <R(e_i, e_j) e_j, e_i> / |e_i ^ e_j|^2 = R_{ijij} / (g_ii g_jj - g_ij^2)
    const auto sectional = [&](int i, int j) {
        return lowered(i, j, i, j) / (g[i][i] * g[j][j] - g[i][j] * g[i][j]);
    };
    double scalar = 0.0;
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) {
            double ricci = 0.0;
            for (int a = 0; a < 3; ++a) ricci += riem[a][b][a][d];
            scalar += ginv[b][d] * ricci;
        }
    return {sectional(0, 1), sectional(0, 2), sectional(1, 2), scalar};
}

inline CurvatureResult curvature(Chart chart, Geometry kind, const Vec3& x, const SpaceParams& p,
                                 double h = kCurvatureStep) {
    // every stencil point must be regular, not just the centre, and on the same side of each degeneracy
    for (int i = 0; i < 3; ++i)
        for (double d : {-2.0 * h, 0.0, 2.0 * h}) {
            Vec3 y = x;
            y[i] += d;
            metric(chart, kind, y, p);
            if (chart != Chart::Beltrami && !(detail::signed_polar_margin(chart, y, p) > kChartEpsilon))
                throw SingularityError("curvature: stencil reaches a polar-chart degeneracy");
        }
    const auto g_at = [&](const Vec3& y) { return metric(chart, kind, y, p); };
    return {numeric_curvature(g_at, x, h), curvature_closed_form(chart, kind, x, p)};
}

}  // namespace curvkepler
