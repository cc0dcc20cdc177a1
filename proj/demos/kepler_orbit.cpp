// Integrates one Kepler orbit on the three-sphere and prints how well the
// constants of motion hold along it.  Pass a file name to also get the CSV.

#include <cstdio>
#include <fstream>
#include <numbers>

#include "curvkepler/dynamics.hpp"
#include "curvkepler/symmetry.hpp"

using namespace curvkepler;

int main(int argc, char** argv) {
    const SpaceParams p = preset("spherical");
    const auto spec = HamiltonianSpec::named(Family::KeplerCC, p);
    const Observable h = hamiltonian(spec, Chart::PolarConstant);

    std::vector<Observable> monitors{h};
    for (const auto& c : constants(spec, Chart::PolarConstant)) monitors.push_back(c);

    IntegratorConfig cfg;
    cfg.t_end = 20.0;
    const PhaseState s0{Chart::PolarConstant, {0.7, std::numbers::pi / 2, 0.0, 0.2, 0.0, 0.9}};
    const Trajectory tr = integrate(h, s0, cfg, monitors, p);

    std::printf("status %s after %zu steps, r in [", std::string(to_string(tr.status)).c_str(), tr.accepted_steps);
    double lo = INFINITY, hi = 0.0;
    for (const auto& s : tr.states) {
        lo = std::min(lo, s.x[0]);
        hi = std::max(hi, s.x[0]);
    }
    std::printf("%.6f, %.6f]\n", lo, hi);
    for (const auto& [name, e] : drift_report(tr))
        std::printf("  %-10s drift %.2e (worst at t=%.3f)\n", name.c_str(), e.max_drift, e.time_of_worst);

    if (argc > 1) {
        std::ofstream out(argv[1], std::ios::binary);
        write_csv(out, tr);
    }
}
