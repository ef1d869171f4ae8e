// Assembles the field from its cone profiles, samples a small grid and
// prints the compatibility report along the light cross.
#include <cstdio>

#include "hyperwave/field.hpp"

using namespace hyperwave;

int main() {
    const WaveParameters p{-1.0, 1.0, 1.0, -3.0};
    const auto fs = make_field_sampler(SurfaceProfile::sphere(), p, {}, 20.0);

    GridSpec g;
    g.xmin = g.ymin = -4.0;
    g.xmax = g.ymax = 4.0;
    g.nx = g.ny = 9;
    const auto grid = sample_field(fs, 0.5, g, 2);
    std::printf("u0 on a 9x9 grid at t = 0.5 (x across, y down; '  cross' on |x| = |y|)\n");
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const auto& n = grid.nodes[j * g.nx + i];
            if (n.cone == Cone::Cross) std::printf("  cross");
            else std::printf(" %+.3f", n.u[0]);
        }
        std::printf("\n");
    }

    const auto rep = compatibility_report(fs, 0.5);
    std::printf("log coefficients: phi1 = %.6f / %.6f, phi2 = %.6f / %.6f\n", rep.phi1_plus, rep.phi1_minus,
                rep.phi2_plus, rep.phi2_minus);
    std::printf("u_xi decay exponent %.4f (kappa/2 = %.4f), zero sum %.2e\n", rep.u_xi_decay_exponent,
                0.5 * fs.kappa(), rep.zero_sum);
    std::printf("verdict: %s\n", to_string(rep.overall));
}
