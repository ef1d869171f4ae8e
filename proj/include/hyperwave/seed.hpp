#pragma once

#include <algorithm>
#include <cmath>

#include "hyperwave/odeint.hpp"
#include "hyperwave/profile_rhs.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

struct SeedSpec {
    double q0 = 0.1;
    double a_seed = 1e-6;
    double consistency_tol = 1e-8;
};

// Leading-order point on the unstable manifold through s = 0:
// s = q0 a^κ, s_a = κ q0 a^(κ-1), σ = -cF/(aΓ).
inline ProfileState seed_state(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec) {
    const RegimeReport rep = require_case_one(p);
    if (!(spec.a_seed > 0.0)) throw std::invalid_argument("seed: a_seed must be positive");
    const double kappa = rep.kappa;
    const double a = spec.a_seed;
    const double ak = std::pow(a, kappa);
    ProfileState st;
    st.a = a;
    st.s = spec.q0 * ak;
    if (std::abs(st.s) >= kSeriesThreshold) {
        throw std::invalid_argument("seed: |q0 a_seed^kappa| exceeds the series range, lower a_seed");
    }
    st.s_a = kappa * spec.q0 * ak / a;
    st.sigma = sigma_from_identity(sf, p, a, st.s);
    return st;
}

// Absolute tolerance measured against the seed amplitude. A bare atol of
// 1e-12 would swamp a seed of size 1e-9 and move the solution off the manifold.
inline IntegrationConfig seeded_config(IntegrationConfig cfg, double seed_amplitude) {
    const double amp = std::abs(seed_amplitude);
    if (amp > 0.0) cfg.atol *= std::min(1.0, amp);
    return cfg;
}

namespace detail {

inline Vec<3> integrate_seed_to(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                double a_match, const IntegrationConfig& cfg) {
    const ProfileState st = seed_state(sf, p, spec);
    if (st.s == 0.0) return {0.0, 0.0, 0.0};
    IntegrationConfig c = seeded_config(cfg, st.s);
    c.log_time = true;
    const auto tr = integrate<2>(reduced_field(sf, p), Vec<2>{st.s, st.s_a}, st.a, a_match, c);
    if (tr.termination() != Termination::ReachedEnd) {
        throw IntegrationError("seed validation run terminated early", tr.t_back(), detail::to_vector(tr.states().back()));
    }
    const Vec<2> y = tr.states().back();
    return {y[0], y[1], sigma_from_identity(sf, p, a_match, y[0])};
}

}  // namespace detail

// Relative discrepancy at a_match between runs seeded at a_seed and a_seed/4.
inline double validate_seed(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                            double a_match, const IntegrationConfig& cfg = {}) {
    if (!(a_match > spec.a_seed)) throw std::invalid_argument("validate_seed: a_match must exceed a_seed");
    if (spec.q0 == 0.0) return 0.0;
    SeedSpec finer = spec;
    finer.a_seed = spec.a_seed / 4.0;
    const Vec<3> y1 = detail::integrate_seed_to(sf, p, spec, a_match, cfg);
    const Vec<3> y2 = detail::integrate_seed_to(sf, p, finer, a_match, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double scale = std::max(std::abs(y1[i]), std::abs(y2[i]));
        if (scale > 0.0) worst = std::max(worst, std::abs(y1[i] - y2[i]) / scale);
    }
    return worst;
}

}  // namespace hyperwave
