#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hyperwave/errors.hpp"
#include "hyperwave/odeint.hpp"
#include "hyperwave/profile_rhs.hpp"
#include "hyperwave/quadrature.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/seed.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

struct SelfSimilarState {
    double r = 1.0;
    double s = 0.0;
    double s_r = 0.0;
    double sigma = 0.0;
};

// Horizontal cones carry the drift (c/r - r/2)σ; vertical cones flip the
// sign of r/2 and of μ. drift_scale = 0 drops the drift entirely.
struct SelfSimVariant {
    bool vertical = false;
    double drift_scale = 1.0;

    double mu_sign() const { return vertical ? -1.0 : 1.0; }
    double drift() const { return (vertical ? -0.5 : 0.5) * drift_scale; }
};

inline ProfileDerivative selfsim_rhs(const SurfaceProfile& sf, const WaveParameters& p, const SelfSimilarState& st,
                                     const SelfSimVariant& var = {}) {
    if (!(st.r > 0.0)) throw DomainError("selfsim_rhs: r must be positive");
    WaveParameters q = p;
    q.mu *= var.mu_sign();
    ProfileDerivative d = detail::full_derivative(sf, q, st.r, st.s, st.s_r, st.sigma);
    const double half_r = var.drift() * st.r;
    d.ds_a -= half_r * st.sigma;
    d.dsigma += half_r * st.s_r;
    return d;
}

inline Rhs<3> selfsim_field(const SurfaceProfile& sf, const WaveParameters& p, const SelfSimVariant& var = {}) {
    return [sf, p, var](double r, const Vec<3>& y) {
        const auto d = selfsim_rhs(sf, p, {r, y[0], y[1], y[2]}, var);
        return Vec<3>{d.ds, d.ds_a, d.dsigma};
    };
}

// r²(s_r² + (σ - 2μΓ/r)²) - H(s); vertical cones share H with the horizontal μ.
inline double h_residual(const SurfaceProfile& sf, const WaveParameters& p, const SelfSimilarState& st) {
    const auto pt = surface_eval(sf, st.s);
    const double t = st.sigma - 2.0 * p.mu * pt.gamma / st.r;
    return st.r * st.r * (st.s_r * st.s_r + t * t) - capH(sf, p, st.s);
}

class SelfSimilarTrajectory {
public:
    SelfSimilarTrajectory(SurfaceProfile sf, WaveParameters p, SeedSpec spec, SelfSimVariant var, Trajectory<3> tr)
        : surface_(std::move(sf)), params_(p), seed_(spec), variant_(var), tr_(std::move(tr)) {
        monitor_.reserve(tr_.size());
        for (std::size_t i = 0; i < tr_.size(); ++i) monitor_.push_back(relative_residual(knot(i)));
    }

    const SurfaceProfile& surface() const { return surface_; }
    const WaveParameters& params() const { return params_; }
    const SeedSpec& seed() const { return seed_; }
    const SelfSimVariant& variant() const { return variant_; }
    const Trajectory<3>& raw() const { return tr_; }

    std::size_t size() const { return tr_.size(); }
    double r_min() const { return tr_.t_front(); }
    double r_max() const { return tr_.t_back(); }
    Termination termination() const { return tr_.termination(); }
    bool trivial() const { return seed_.q0 == 0.0; }

    SelfSimilarState knot(std::size_t i) const { return make_state(tr_.t(i), tr_.y(i)); }
    SelfSimilarState state(double r) const { return make_state(r, tr_(r)); }

    // Relative H residual at each knot, recorded once per accepted step.
    const std::vector<double>& monitor() const { return monitor_; }

    double relative_residual(const SelfSimilarState& st) const {
        return std::abs(h_residual(surface_, params_, st)) / (1.0 + std::abs(capH(surface_, params_, st.s)));
    }

    std::vector<double> dense_abscissae() const {
        std::vector<double> out;
        out.reserve(2 * size());
        for (std::size_t i = 0; i < size(); ++i) {
            const double r = tr_.t(i);
            if (i > 0) out.push_back(std::sqrt(out.back() * r));
            out.push_back(r);
        }
        return out;
    }

    // Fault injection: σ is scaled by factor for r >= r_from.
    void corrupt_sigma(double r_from, double factor) {
        corrupt_from_ = r_from;
        corrupt_factor_ = factor;
    }

private:
    SelfSimilarState make_state(double r, const Vec<3>& y) const {
        SelfSimilarState st{r, y[0], y[1], y[2]};
        if (r >= corrupt_from_) st.sigma *= corrupt_factor_;
        return st;
    }

    SurfaceProfile surface_;
    WaveParameters params_;
    SeedSpec seed_;
    SelfSimVariant variant_;
    Trajectory<3> tr_;
    std::vector<double> monitor_;
    double corrupt_from_ = std::numeric_limits<double>::infinity();
    double corrupt_factor_ = 1.0;
};

// s = q0 r^κ, s_r = κ s/r, and σ from (rΓσ)_r = (±r²/2 - c)F_r integrated
// with F ~ s²/2.
inline SelfSimilarState selfsim_seed(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                     const SelfSimVariant& var = {}) {
    const ProfileState base = seed_state(sf, p, spec);
    const double kappa = require_case_one(p).kappa;
    SelfSimilarState st{base.a, base.s, base.s_a, 0.0};
    if (st.s != 0.0) {
        const double r = st.r;
        const double lift = 2.0 * var.drift() * kappa / (2.0 * kappa + 2.0) * r * r;
        st.sigma = (lift - p.c) * F_over_gamma(sf, st.s) / r;
    }
    return st;
}

inline SelfSimilarTrajectory solve_selfsimilar(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                               double r_max, const IntegrationConfig& cfg = {},
                                               const SelfSimVariant& var = {}) {
    const SelfSimilarState st = selfsim_seed(sf, p, spec, var);
    if (!(r_max > st.r)) throw std::invalid_argument("solve_selfsimilar: r_max must exceed the seed radius");
    IntegrationConfig c = seeded_config(cfg, st.s);
    c.log_time = true;
    std::vector<Event<3>> ev;
    if (sf.compact() && spec.q0 != 0.0) {
        ev.push_back({"pole", [&](double, const Vec<3>& y) { return sf.s0 - std::abs(y[0]) - 1e-9; }});
    }
    auto tr = integrate<3>(selfsim_field(sf, p, var), Vec<3>{st.s, st.s_r, st.sigma}, st.r, r_max, c, ev);
    const Termination term = tr.termination();
    if (term == Termination::BlowUp || term == Termination::StepLimit ||
        (term == Termination::Event && tr.event_name() == "pole")) {
        throw IntegrationError(std::string("self-similar run failed: ") + to_string(term), tr.t_back(),
                               detail::to_vector(tr.states().back()));
    }
    return SelfSimilarTrajectory(sf, p, spec, var, std::move(tr));
}

// max |r²(s_r² + (σ - 2μΓ/r)²) - H(s)| / (1 + |H(s)|) over knots and step midpoints.
inline double check_H_invariant(const SelfSimilarTrajectory& tr) {
    if (tr.trivial()) return 0.0;
    double worst = 0.0;
    for (double r : tr.dense_abscissae()) worst = std::max(worst, tr.relative_residual(tr.state(r)));
    return worst;
}

struct SStarEstimate {
    double s_star = 0.0;
    double rate = 0.0;
    bool converged = false;
    bool within_bounds = false;  // 0 < s★ ≤ min(s0, s1) and H(s★) ≥ -tol
    double s_one = std::numeric_limits<double>::infinity();
};

namespace detail {

// Tail mean of s over [lo, hi] by dense-output quadrature.
inline double tail_mean(const SelfSimilarTrajectory& tr, double lo, double hi) {
    const double integral = integrate_along(tr.raw(), [](double, const Vec<3>& y) { return y[0]; }, lo, hi);
    return integral / (hi - lo);
}

}  // namespace detail

// s★ from the mean over [0.8, 1]·r_max; the rate is the slope of log of the
// local maxima of |s - s★| against log r over [0.08, 0.8]·r_max.
inline SStarEstimate estimate_s_star(const SelfSimilarTrajectory& tr, double tol = 1e-8) {
    SStarEstimate out;
    const auto& sf = tr.surface();
    const auto& p = tr.params();
    if (tr.trivial()) return out;
    const double r_end = tr.r_max();
    if (r_end < 50.0) return out;
    out.s_star = detail::tail_mean(tr, 0.8 * r_end, r_end);

    // Local oscillation has angular frequency ≈ r/2: sample 32 points per period.
    std::vector<double> rr, dev;
    double r = 0.08 * r_end;
    while (r < 0.8 * r_end) {
        rr.push_back(r);
        dev.push_back(std::abs(tr.state(r).s - out.s_star));
        r += 2.0 * std::numbers::pi / (0.5 * r) / 32.0;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 1; i + 1 < rr.size(); ++i) {
        if (dev[i] > dev[i - 1] && dev[i] >= dev[i + 1] && dev[i] > 0.0) {
            lx.push_back(std::log(rr[i]));
            ly.push_back(std::log(dev[i]));
        }
    }
    if (lx.size() >= 8) {
        const double n = static_cast<double>(lx.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i] / n;
            my += ly[i] / n;
        }
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        out.rate = sxy / sxx;
        out.converged = out.rate < 0.0;
    }

    if (capH_curvature(p) > 0.0) out.s_one = s_one(sf, p).value;
    const double ceiling = std::min(sf.s0, out.s_one);
    const double s_abs = std::abs(out.s_star);
    out.within_bounds = s_abs > 0.0 && s_abs <= ceiling * (1.0 + tol) && capH(sf, p, out.s_star) >= -tol;
    return out;
}

// 2μc - bk + k²F(s0) < 0 together with Case I gives s★ in (0, s0).
inline bool interior_star_condition(const SurfaceProfile& sf, const WaveParameters& p) {
    if (!sf.compact()) throw DomainError("interior_star_condition needs a compact target");
    const double q = -(p.k * p.k + p.b * p.k);
    const bool case_one = p.c * p.c < 4.0 * q;
    return case_one && 2.0 * p.mu * p.c - p.b * p.k + p.k * p.k * area_at_pole(sf) < 0.0;
}

}  // namespace hyperwave
