// Solves the reference profile for both signs of mu, prints residuals and
// the tail fit that matches each regime.
#include <cstdio>

#include "hyperwave/asymptotics.hpp"

using namespace hyperwave;

int main() {
    const auto sphere = SurfaceProfile::sphere();
    for (double mu : {-1.0, 1.0}) {
        const WaveParameters p{mu, 1.0, 1.0, -3.0};
        const auto rep = classify(p);
        std::printf("mu = %+g: %s, kappa = %.15g\n", mu, to_string(rep.regime), rep.kappa);

        const auto tr = solve_profile(sphere, p, {}, 1000.0);
        const auto& res = tr.residuals();
        std::printf("  %zu knots, sigma identity %.2e, energy defect %.2e\n", tr.size(), res.sigma_identity,
                    res.energy_defect);

        for (double a : {1e-4, 1e-2, 1.0, 10.0, 100.0, 1000.0}) {
            const auto st = tr.state(a);
            std::printf("  a = %-7g s = %+.10e  s_a = %+.10e\n", a, st.s, st.s_a);
        }

        const std::pair<double, double> window{500.0, 1000.0};
        const auto fit = mu < 0.0 ? fit_decay_to_center(tr, window) : fit_approach_to_pole(tr, window);
        std::printf("  tail: %s, E_inf = %.6g, freq = %.6g, log drift = %.4g\n", to_string(fit.scenario), fit.E_inf,
                    fit.freq, fit.log_drift);
    }
}
