#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hyperwave/odeint.hpp"
#include "hyperwave/profile_rhs.hpp"
#include "hyperwave/seed.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

// One row of a stored profile: a, s, s_a, σ, E.
struct ProfileRow {
    double a = 0.0, s = 0.0, s_a = 0.0, sigma = 0.0, energy = 0.0;
};

struct InvariantCheck {
    std::string name;
    bool passed = true;
    double worst = 0.0;      // largest normalized violation seen
    long first_bad_row = -1;  // zero-based data row
};

struct RowValidation {
    bool ok = true;
    std::vector<InvariantCheck> checks;

    const InvariantCheck* first_failure() const {
        for (const auto& c : checks) {
            if (!c.passed) return &c;
        }
        return nullptr;
    }
};

struct RowTolerances {
    double sigma_identity = 1e-8;
    double energy_column = 1e-12;
    double seed = 1e-14;
    // Re-integrating one stored step must land within this many local error budgets.
    double step_budget = 1e3;
};

namespace detail {

inline void record(InvariantCheck& c, double value, double limit, std::size_t row) {
    const bool bad = !(value <= limit);
    if (bad && c.passed) c.first_bad_row = static_cast<long>(row);
    if (bad) c.passed = false;
    if (std::isnan(value) || value > c.worst) c.worst = value;
}

}  // namespace detail

// Checks stored rows against the model they claim to solve: the seed, the
// σ identity, the energy column, and agreement of each stored step with a
// fresh integration between consecutive rows.
inline RowValidation validate_rows(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                   const IntegrationConfig& cfg, const std::vector<ProfileRow>& rows,
                                   const RowTolerances& tol = {}) {
    RowValidation out;
    InvariantCheck finite{"finite"}, order{"monotone_abscissa"}, seed{"seed_state"}, sigma{"sigma_identity"},
        energy_col{"energy_column"}, step{"step_consistency"};
    if (rows.empty()) {
        finite.passed = false;
        out.checks = {finite};
        out.ok = false;
        return out;
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool fin = std::isfinite(r.a) && std::isfinite(r.s) && std::isfinite(r.s_a) && std::isfinite(r.sigma) &&
                         std::isfinite(r.energy);
        detail::record(finite, fin ? 0.0 : 1.0, 0.0, i);
        if (i > 0) detail::record(order, r.a > rows[i - 1].a ? 0.0 : 1.0, 0.0, i);
    }
    if (!finite.passed || !order.passed) {
        out.checks = {finite, order};
        out.ok = false;
        return out;
    }

    const ProfileState st0 = seed_state(sf, p, spec);
    const auto& r0 = rows.front();
    const double seed_dev = std::max({std::abs(r0.a - st0.a) / st0.a,
                                      std::abs(r0.s - st0.s) / std::max(std::abs(st0.s), 1e-300),
                                      std::abs(r0.s_a - st0.s_a) / std::max(std::abs(st0.s_a), 1e-300)});
    detail::record(seed, st0.s == 0.0 ? std::abs(r0.s) + std::abs(r0.s_a) : seed_dev, tol.seed, 0);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto pt = surface_eval(sf, r.s);
        const double cf = p.c * pt.capF;
        detail::record(sigma, std::abs(r.a * pt.gamma * r.sigma + cf) / (1.0 + std::abs(cf)), tol.sigma_identity, i);
        const double e = energy(sf, p, {r.a, r.s, r.s_a, r.sigma});
        detail::record(energy_col, std::abs(e - r.energy) / (1.0 + std::abs(e)), tol.energy_column, i);
    }

    IntegrationConfig c = seeded_config(cfg, st0.s);
    c.log_time = true;
    const auto rhs = reduced_field(sf, p);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& n = rows[i + 1];
        const auto tr = integrate<2>(rhs, Vec<2>{r.s, r.s_a}, r.a, n.a, c);
        const Vec<2> y = tr.states().back();
        double worst = 0.0;
        const double got[2] = {n.s, n.s_a};
        for (int k = 0; k < 2; ++k) {
            const double budget = c.atol + c.rtol * std::max(std::abs(got[k]), std::abs(y[k]));
            worst = std::max(worst, std::abs(y[k] - got[k]) / budget);
        }
        detail::record(step, worst, tol.step_budget, i + 1);
    }

    out.checks = {finite, order, seed, sigma, energy_col, step};
    for (const auto& ch : out.checks) out.ok = out.ok && ch.passed;
    return out;
}

}  // namespace hyperwave
