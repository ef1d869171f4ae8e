// Self-similar profile with an interior limit: s(r) settles at s_star
// below the first zero of H.
#include <cstdio>
#include <numbers>

#include "hyperwave/selfsimilar.hpp"

using namespace hyperwave;

int main() {
    const auto sphere = SurfaceProfile::sphere();
    const WaveParameters p{3.0, 1.0, -1.0, -3.0};

    std::printf("H(pi) = %g, interior condition: %s\n", capH(sphere, p, std::numbers::pi),
                interior_star_condition(sphere, p) ? "yes" : "no");

    const auto tr = solve_selfsimilar(sphere, p, {}, 100.0);
    std::printf("H invariant residual: %.2e over %zu steps\n", check_H_invariant(tr), tr.size());

    for (double r : {0.01, 0.1, 1.0, 5.0, 20.0, 50.0, 100.0}) {
        std::printf("  r = %-5g s = %.12f\n", r, tr.state(r).s);
    }

    const auto est = estimate_s_star(tr);
    std::printf("s_star = %.12f, s1 = %.12f, decay rate = %.3f, converged: %s\n", est.s_star, est.s_one, est.rate,
                est.converged ? "yes" : "no");

    SelfSimVariant vertical;
    vertical.vertical = true;
    const auto tv = solve_selfsimilar(sphere, p, {}, 100.0, {}, vertical);
    std::printf("vertical variant: s(100) = %.12f, H residual %.2e\n", tv.state(100.0).s, check_H_invariant(tv));
}
