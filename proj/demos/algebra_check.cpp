// Runs every bracket suite on one space and prints the worst residual per group.

#include <cstdio>
#include <string>

#include "curvkepler/coalgebra.hpp"
#include "curvkepler/symmetry.hpp"

using namespace curvkepler;

namespace {

void show(const BracketReport& rep) {
    std::printf("%s: max residual %.2e\n", rep.suite.c_str(), rep.max_residual());
    for (const auto& g : rep.groups) std::printf("  %-55s %.2e\n", g.name.c_str(), g.max_residual());
}

}  // namespace

int main(int argc, char** argv) {
    const SpaceParams p = preset(argc > 1 ? argv[1] : "hyperbolic");
    std::printf("z = %g, kappa2 = %g\n", p.z, p.kappa2);
    show(coalgebra::verify_sl2z(coalgebra::three_site(p.z), 100, 1));
    show(coalgebra::verify_casimirs(p.z, 100, 1));
    show(verify_so4(p, 100, 1));
    show(verify_lrl_algebra(p, 100, 1));

    // a broken generator is caught
    const auto bad = verify_so4(p, 100, 1, Perturbation{"J02", 1.01});
    std::printf("so4 with J02 scaled by 1.01: max residual %.2e\n", bad.max_residual());
}
