// Scalar curvature of the variable-curvature metric along a radial line,
// numerical pipeline next to the closed form.  The stencil loses digits as rho
// approaches the pole, where the metric degenerates.

#include <cstdio>

#include "curvkepler/geometry.hpp"

using namespace curvkepler;

int main() {
    const SpaceParams p = SpaceParams::from_k(0.5, 1.0, 1.0);
    std::printf("%8s %14s %14s %10s\n", "rho", "K numeric", "K closed", "|diff|");
    for (int i = 1; i <= 12; ++i) {
        const double rho = 0.1 * i;
        const auto res = curvature(Chart::PolarVariable, Geometry::NC, {rho, 1.0, 0.5}, p);
        std::printf("%8.2f %14.8f %14.8f %10.2e\n", rho, res.numeric.scalar, res.closed_form->scalar,
                    std::abs(res.numeric.scalar - res.closed_form->scalar));
    }
}
