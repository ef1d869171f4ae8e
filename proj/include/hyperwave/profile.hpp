#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "hyperwave/odeint.hpp"
#include "hyperwave/profile_rhs.hpp"
#include "hyperwave/quadrature.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/seed.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

struct ProfileResiduals {
    double sigma_identity = 0.0;   // max |aΓσ + cF| / (1 + |cF|)
    double energy_defect = 0.0;    // max |E(a) - E(a_seed) + ∫ 2μaF| / (1 + |E|)
    double pole_distance = std::numeric_limits<double>::infinity();  // min s0 - |s|
};

struct ProfileOptions {
    // The full formulation stops (event "axis") where s first returns to 0.
    Formulation formulation = Formulation::Reduced;
    // Tolerate blow-up on the pseudo-sphere with μ > 0 instead of failing.
    bool exploratory = false;
};

class ProfileTrajectory {
public:
    using Reduced = Trajectory<2>;
    using Full = Trajectory<3>;

    ProfileTrajectory(SurfaceProfile sf, WaveParameters p, SeedSpec spec, double kappa, Formulation form,
                      std::variant<Reduced, Full> tr)
        : surface_(std::move(sf)), params_(p), seed_(spec), kappa_(kappa), form_(form), tr_(std::move(tr)) {}

    const SurfaceProfile& surface() const { return surface_; }
    const WaveParameters& params() const { return params_; }
    const SeedSpec& seed() const { return seed_; }
    double kappa() const { return kappa_; }
    Formulation formulation() const { return form_; }

    std::size_t size() const {
        return std::visit([](const auto& t) { return t.size(); }, tr_);
    }
    double a_min() const {
        return std::visit([](const auto& t) { return t.t_front(); }, tr_);
    }
    double a_max() const {
        return std::visit([](const auto& t) { return t.t_back(); }, tr_);
    }
    Termination termination() const {
        return std::visit([](const auto& t) { return t.termination(); }, tr_);
    }
    std::string event_name() const {
        return std::visit([](const auto& t) { return t.event_name(); }, tr_);
    }

    ProfileState knot(std::size_t i) const {
        return std::visit([&](const auto& t) { return make_state(t.t(i), t.y(i)); }, tr_);
    }

    ProfileState state(double a) const {
        return std::visit([&](const auto& t) { return make_state(a, t(a)); }, tr_);
    }

    // d/da of (s, s_a, σ) from the dense output.
    std::array<double, 3> derivative(double a) const {
        return std::visit(
            [&](const auto& t) {
                const auto d = t.derivative(a);
                if constexpr (std::tuple_size_v<std::decay_t<decltype(d)>> == 3) {
                    return std::array<double, 3>{d[0], d[1], d[2]};
                } else {
                    const auto pd = profile_rhs(surface_, params_, make_state(a, t(a)), form_);
                    return std::array<double, 3>{d[0], d[1], pd.dsigma};
                }
            },
            tr_);
    }

    // ∫_{a1}^{a2} g(state) da on the dense output.
    template <class G>
    double integrate(G&& g, double a1, double a2) const {
        return std::visit(
            [&](const auto& t) {
                return integrate_along(t, [&](double a, const auto& y) { return g(make_state(a, y)); }, a1, a2);
            },
            tr_);
    }

    template <class G>
    std::vector<double> cumulative(G&& g) const {
        return std::visit(
            [&](const auto& t) {
                return cumulative_integral(t, [&](double a, const auto& y) { return g(make_state(a, y)); });
            },
            tr_);
    }

    // Dense sample points: every knot plus the midpoint of each step.
    std::vector<double> dense_abscissae() const {
        std::vector<double> out;
        const std::size_t n = size();
        out.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = knot(i).a;
            if (i > 0) out.push_back(std::sqrt(out.back() * a));
            out.push_back(a);
        }
        return out;
    }

    const ProfileResiduals& residuals() const { return residuals_; }
    void set_residuals(const ProfileResiduals& r) { residuals_ = r; }

    bool trivial() const { return seed_.q0 == 0.0; }

    // Fault injection for detector tests: every reported σ is scaled by factor.
    void corrupt_sigma(double factor) { sigma_factor_ = factor; }

private:
    template <std::size_t N>
    ProfileState make_state(double a, const Vec<N>& y) const {
        ProfileState st;
        st.a = a;
        st.s = y[0];
        st.s_a = y[1];
        if constexpr (N == 3) {
            st.sigma = y[2];
        } else {
            st.sigma = sigma_from_identity(surface_, params_, a, y[0]);
        }
        st.sigma *= sigma_factor_;
        return st;
    }

    SurfaceProfile surface_;
    WaveParameters params_;
    SeedSpec seed_;
    double kappa_;
    Formulation form_;
    std::variant<Reduced, Full> tr_;
    ProfileResiduals residuals_;
    double sigma_factor_ = 1.0;
};

// max |aΓσ + cF| / (1 + |cF|) over the dense sample points.
inline double check_sigma_identity(const ProfileTrajectory& tr) {
    const auto& sf = tr.surface();
    const double c = tr.params().c;
    double worst = 0.0;
    for (double a : tr.dense_abscissae()) {
        const ProfileState st = tr.state(a);
        const auto pt = surface_eval(sf, st.s);
        const double cf = c * pt.capF;
        worst = std::max(worst, std::abs(a * pt.gamma * st.sigma + cf) / (1.0 + std::abs(cf)));
    }
    return worst;
}

// E(a2) - E(a1) + ∫_{a1}^{a2} 2μaF da.
inline double energy_law_defect(const ProfileTrajectory& tr, double a1, double a2) {
    const auto& sf = tr.surface();
    const auto& p = tr.params();
    const double e1 = energy(sf, p, tr.state(a1));
    const double e2 = energy(sf, p, tr.state(a2));
    const double work =
        tr.integrate([&](const ProfileState& st) { return 2.0 * p.mu * st.a * surface_eval(sf, st.s).capF; }, a1, a2);
    return e2 - e1 + work;
}

inline ProfileResiduals compute_residuals(const ProfileTrajectory& tr) {
    ProfileResiduals r;
    r.sigma_identity = check_sigma_identity(tr);
    const auto& sf = tr.surface();
    const auto& p = tr.params();
    const auto work =
        tr.cumulative([&](const ProfileState& st) { return 2.0 * p.mu * st.a * surface_eval(sf, st.s).capF; });
    const double e0 = energy(sf, p, tr.knot(0));
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const ProfileState st = tr.knot(i);
        const double e = energy(sf, p, st);
        const double scale = 1.0 + std::max(std::abs(e0), std::abs(e));
        r.energy_defect = std::max(r.energy_defect, std::abs(e - e0 + work[i]) / scale);
        if (sf.compact()) r.pole_distance = std::min(r.pole_distance, sf.s0 - std::abs(st.s));
    }
    return r;
}

// Integrates the profile equation from the seed to a_max.
inline ProfileTrajectory solve_profile(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                       double a_max, const IntegrationConfig& cfg = {},
                                       const ProfileOptions& opt = {}) {
    const RegimeReport rep = require_case_one(p);
    const ProfileState st = seed_state(sf, p, spec);
    if (!(a_max > spec.a_seed)) throw std::invalid_argument("solve_profile: a_max must exceed a_seed");

    IntegrationConfig c = seeded_config(cfg, st.s);
    c.log_time = true;

    const bool guard = sf.compact() && p.c != 0.0;
    const double pole_margin = 1e-9;

    auto finish = [&](auto&& traj) {
        const Termination term = traj.termination();
        if (term == Termination::Event && traj.event_name() == "pole") {
            throw IntegrationError("profile reached the opposite pole; accuracy failure", traj.t_back(),
                                   detail::to_vector(traj.states().back()));
        }
        if (term == Termination::BlowUp) {
            const bool tolerated = opt.exploratory && sf.kind == SurfaceKind::PseudoSphere && p.mu > 0.0;
            if (!tolerated) {
                throw IntegrationError("profile blew up", traj.t_back(), detail::to_vector(traj.states().back()));
            }
        }
        if (term == Termination::StepLimit) {
            throw IntegrationError("step limit reached", traj.t_back(), detail::to_vector(traj.states().back()));
        }
        ProfileTrajectory out(sf, p, spec, rep.kappa, opt.formulation, std::move(traj));
        out.set_residuals(compute_residuals(out));
        return out;
    };

    if (opt.formulation == Formulation::Full) {
        // The 3-state system conserves D = aΓσ + cF; for D != 0 (rounding is
        // enough) the axis s = 0 is a centrifugal barrier, so the run stops there.
        std::vector<Event<3>> ev;
        if (spec.q0 != 0.0) {
            // |s| / (a|s_a|) equals 1/κ at the seed and tends to 0 only on approach to the axis.
            ev.push_back({"axis", [](double a, const Vec<3>& y) { return std::abs(y[0]) - 1e-3 * a * std::abs(y[1]); }});
        }
        if (guard) ev.push_back({"pole", [&](double, const Vec<3>& y) { return sf.s0 - std::abs(y[0]) - pole_margin; }});
        return finish(integrate<3>(full_field(sf, p), Vec<3>{st.s, st.s_a, st.sigma}, st.a, a_max, c, ev));
    }
    std::vector<Event<2>> ev;
    if (guard) ev.push_back({"pole", [&](double, const Vec<2>& y) { return sf.s0 - std::abs(y[0]) - pole_margin; }});
    return finish(integrate<2>(reduced_field(sf, p), Vec<2>{st.s, st.s_a}, st.a, a_max, c, ev));
}

struct ProbeReport {
    std::array<std::array<double, 3>, 3> jacobian{};
    std::array<double, 3> spectrum{};
    std::array<double, 3> unstable_direction{};
    double q_at_one = 0.0;
    double min_q_ratio = 1.0;  // min Q(a)/Q(1) over [a_min, 1]
    double gronwall_floor = 0.0;
    double a_min = 1e-6;
};

// Radial (k = 0) probe: linearization at the origin and the backward
// behaviour of Q = a²s_a² + c²F²/Γ².
inline ProbeReport radial_probe(const SurfaceProfile& sf, const WaveParameters& p, double s1, double s_a1,
                                const IntegrationConfig& cfg = {}, double a_min = 1e-6) {
    if (p.k != 0.0) throw RegimeError("radial_probe needs k = 0");
    ProbeReport rep;
    rep.a_min = a_min;

    // (s, ρ, a)' = (ρ, μa²Γ(s), a) with ρ = a s_a, differentiated at the origin.
    const auto o = surface_eval(sf, 0.0);
    const double a0 = 0.0;
    rep.jacobian = {{{0.0, 1.0, 0.0}, {p.mu * a0 * a0 * o.gamma_s, 0.0, 2.0 * p.mu * a0 * o.gamma}, {0.0, 0.0, 1.0}}};
    for (std::size_t i = 0; i < 3; ++i) rep.spectrum[i] = rep.jacobian[i][i];
    // Upper triangular with a simple eigenvalue 1: (J - I)v = 0 gives v = (0, 0, 1).
    rep.unstable_direction = {0.0, 0.0, 1.0};

    auto q_of = [&](double a, double s, double s_a) {
        const double fg = F_over_gamma(sf, s);
        return a * a * s_a * s_a + p.c * p.c * fg * fg;
    };
    rep.q_at_one = q_of(1.0, s1, s_a1);
    if (rep.q_at_one == 0.0) {
        rep.min_q_ratio = 1.0;
        return rep;
    }
    rep.gronwall_floor = p.c != 0.0 ? std::exp(-std::abs(p.mu) / std::abs(p.c) * 4.0) : 0.0;

    IntegrationConfig c = cfg;
    c.log_time = true;
    c.atol *= std::min(1.0, std::abs(s1) + std::abs(s_a1));
    const auto tr = integrate<2>(reduced_field(sf, p), Vec<2>{s1, s_a1}, 1.0, a_min, c);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double a = tr.t(i);
        worst = std::min(worst, q_of(a, tr.y(i)[0], tr.y(i)[1]));
        if (i > 0) {
            const double m = std::sqrt(a * tr.t(i - 1));
            const auto y = tr(m);
            worst = std::min(worst, q_of(m, y[0], y[1]));
        }
    }
    rep.min_q_ratio = worst / rep.q_at_one;
    return rep;
}

}  // namespace hyperwave
