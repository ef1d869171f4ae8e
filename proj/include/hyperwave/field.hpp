#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hyperwave/errors.hpp"
#include "hyperwave/parallel.hpp"
#include "hyperwave/profile.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/selfsimilar.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

enum class Cone { HPlus, HMinus, VPlus, VMinus, Cross };

inline const char* to_string(Cone c) {
    switch (c) {
        case Cone::HPlus: return "h+";
        case Cone::HMinus: return "h-";
        case Cone::VPlus: return "v+";
        case Cone::VMinus: return "v-";
        case Cone::Cross: return "cross";
    }
    return "?";
}

inline bool is_horizontal(Cone c) { return c == Cone::HPlus || c == Cone::HMinus; }

struct HyperbolicCoords {
    double a = 0.0;
    double alpha = 0.0;
    Cone cone = Cone::Cross;
};

// From characteristic coordinates ξ = x + y, η = x - y; a² = |ξη| without
// the cancellation of x² - y² near the cross.
inline HyperbolicCoords hyperbolic_coords_characteristic(double xi, double eta) {
    HyperbolicCoords hc;
    if (xi == 0.0 || eta == 0.0) return hc;
    hc.a = std::sqrt(std::abs(xi) * std::abs(eta));
    hc.alpha = 0.5 * std::log(std::abs(xi) / std::abs(eta));
    if (xi > 0.0) {
        hc.cone = eta > 0.0 ? Cone::HPlus : Cone::VPlus;
    } else {
        hc.cone = eta < 0.0 ? Cone::HMinus : Cone::VMinus;
    }
    return hc;
}

// x = a cosh α, y = a sinh α in h+, with the analogous charts in the other cones.
inline HyperbolicCoords hyperbolic_coords(double x, double y) { return hyperbolic_coords_characteristic(x + y, x - y); }

// Integrand of the non-logarithmic part of ψ: (2k/a) F(s).
inline double psi_integrand(const SurfaceProfile& sf, const WaveParameters& p, double a, double s) {
    return 2.0 * p.k * surface_eval(sf, s).capF / a;
}

// A cone profile as a function of its radial variable x (a, or r in
// similarity variables): s(x), β(x) anchored at x = 1, and
// φ3(x) = -∫_0^x (2k/x')F(s(x')) dx'. Below the seed abscissa the seed
// series s = q0 x^κ is used.
class ConeProfile {
public:
    static ConeProfile trivial(double x_max) {
        ConeProfile cp;
        cp.x_max_ = x_max;
        return cp;
    }

    static ConeProfile from(const ProfileTrajectory& tr) {
        if (tr.trivial()) return trivial(tr.a_max());
        auto shared = std::make_shared<const ProfileTrajectory>(tr);
        const auto sf = tr.surface();
        const auto p = tr.params();
        ConeProfile cp = base(sf, p, tr.seed(), tr.kappa(), tr.a_min(), tr.a_max());
        cp.eval_ = [shared, sf, p](double a) {
            const double s = shared->state(a).s;
            return std::array<double, 2>{s, -p.c * F_over_gamma2(sf, s) / a};
        };
        cp.knots_.reserve(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) cp.knots_.push_back(tr.knot(i).a);
        cp.beta_cum_ = tr.cumulative([&](const ProfileState& st) { return -p.c * F_over_gamma2(sf, st.s) / st.a; });
        cp.phi_cum_ = tr.cumulative([&](const ProfileState& st) { return psi_integrand(sf, p, st.a, st.s); });
        cp.finish();
        return cp;
    }

    static ConeProfile from(const SelfSimilarTrajectory& tr) {
        if (tr.trivial()) return trivial(tr.r_max());
        auto shared = std::make_shared<const SelfSimilarTrajectory>(tr);
        const auto sf = tr.surface();
        const auto p = tr.params();
        ConeProfile cp = base(sf, p, tr.seed(), require_case_one(p).kappa, tr.r_min(), tr.r_max());
        auto rate = [sf](double sigma, double s) { return sigma / surface_eval(sf, s).gamma; };
        cp.eval_ = [shared, rate](double r) {
            const auto st = shared->state(r);
            return std::array<double, 2>{st.s, rate(st.sigma, st.s)};
        };
        cp.knots_.reserve(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) cp.knots_.push_back(tr.knot(i).r);
        cp.beta_cum_ = cumulative_integral(tr.raw(), [&](double, const Vec<3>& y) { return rate(y[2], y[0]); });
        cp.phi_cum_ =
            cumulative_integral(tr.raw(), [&](double r, const Vec<3>& y) { return psi_integrand(sf, p, r, y[0]); });
        cp.finish();
        return cp;
    }

    bool is_trivial() const { return !eval_; }
    double x_seed() const { return x_seed_; }
    double x_max() const { return x_max_; }

    double s(double x) const {
        check(x);
        if (is_trivial()) return 0.0;
        if (x < x_seed_) return q0_ * std::pow(x, kappa_);
        return eval_(x)[0];
    }

    double beta(double x) const {
        check(x);
        if (is_trivial()) return 0.0;
        if (x < x_seed_) {
            const double tk = 2.0 * kappa_;
            const double corr = eps_ * q0_ * q0_ * (std::pow(x_seed_, tk) - std::pow(x, tk)) / (16.0 * kappa_);
            return beta_seed_ + c_ * (0.5 * std::log(x_seed_ / x) - corr);
        }
        return running(beta_cum_, x, 1) - beta_anchor_;
    }

    double phi3(double x) const {
        check(x);
        if (is_trivial()) return 0.0;
        if (x < x_seed_) return -k_ * q0_ * q0_ * std::pow(x, 2.0 * kappa_) / (2.0 * kappa_);
        return -(phi_head_ + running(phi_cum_, x, 2));
    }

private:
    static ConeProfile base(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec, double kappa,
                            double x_seed, double x_max) {
        ConeProfile cp;
        cp.sf_ = sf;
        cp.q0_ = spec.q0;
        cp.kappa_ = kappa;
        cp.k_ = p.k;
        cp.c_ = p.c;
        cp.eps_ = sf.gamma3_at_0;
        cp.x_seed_ = x_seed;
        cp.x_max_ = x_max;
        cp.phi_head_ = p.k * spec.q0 * spec.q0 * std::pow(x_seed, 2.0 * kappa) / (2.0 * kappa);
        return cp;
    }

    void finish() {
        beta_anchor_ = running(beta_cum_, std::clamp(1.0, x_seed_, x_max_), 1);
        beta_seed_ = -beta_anchor_;
    }

    void check(double x) const {
        if (!(x > 0.0)) throw DomainError("cone profile: radial variable must be positive");
        if (x > x_max_ * (1.0 + 1e-13)) throw DomainError("cone profile: abscissa beyond the solved range");
    }

    // Cumulative table value at the knot below x plus the partial step.
    double running(const std::vector<double>& cum, double x, int which) const {
        x = std::min(x, knots_.back());
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        const std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        const double lo = knots_[i];
        if (x == lo) return cum[i];
        auto g = [&](double u) {
            const auto v = eval_(u);
            return which == 1 ? v[1] : 2.0 * k_ * surface_eval(sf_, v[0]).capF / u;
        };
        return cum[i] + boost::math::quadrature::gauss<double, 15>::integrate(g, lo, x);
    }

    SurfaceProfile sf_ = SurfaceProfile::sphere();
    std::function<std::array<double, 2>(double)> eval_;
    std::vector<double> knots_, beta_cum_, phi_cum_;
    double q0_ = 0.0, kappa_ = 1.0, k_ = 0.0, c_ = 0.0, eps_ = 0.0;
    double x_seed_ = 0.0, x_max_ = 0.0;
    double phi_head_ = 0.0, beta_anchor_ = 0.0, beta_seed_ = 0.0;
};

// ψ(a) = b log a + φ3(a).
struct PsiProfile {
    ConeProfile cone;
    double b = 0.0;

    double operator()(double a) const { return b * std::log(a) + cone.phi3(a); }
    double phi3(double a) const { return cone.phi3(a); }
};

inline PsiProfile psi_profile(const ProfileTrajectory& tr) { return {ConeProfile::from(tr), tr.params().b}; }

struct FieldNode {
    double x = 0.0, y = 0.0;
    std::array<double, 3> u{1.0, 0.0, 0.0};
    double phi = 0.0;  // NaN on the cross
    Cone cone = Cone::Cross;
    bool log_singular = false;
};

class FieldSampler {
public:
    FieldSampler(SurfaceProfile sf, WaveParameters p, double kappa, ConeProfile horizontal, ConeProfile vertical,
                 bool selfsimilar)
        : sf_(std::move(sf)), p_(p), kappa_(kappa), h_(std::move(horizontal)), v_(std::move(vertical)),
          selfsimilar_(selfsimilar) {}

    const SurfaceProfile& surface() const { return sf_; }
    const WaveParameters& params() const { return p_; }
    double kappa() const { return kappa_; }
    bool selfsimilar() const { return selfsimilar_; }
    const ConeProfile& profile(Cone c) const { return is_horizontal(c) ? h_ : v_; }

    FieldNode node(double t, double x, double y) const {
        FieldNode n = node_characteristic(t, x + y, x - y);
        n.x = x;
        n.y = y;
        return n;
    }

    FieldNode node_characteristic(double t, double xi, double eta) const {
        FieldNode n;
        n.x = 0.5 * (xi + eta);
        n.y = 0.5 * (xi - eta);
        const HyperbolicCoords hc = hyperbolic_coords_characteristic(xi, eta);
        n.cone = hc.cone;
        if (hc.cone == Cone::Cross) {
            n.u = {1.0, 0.0, 0.0};
            n.phi = std::numeric_limits<double>::quiet_NaN();
            n.log_singular = true;
            return n;
        }
        double x = hc.a;
        double phase;
        if (selfsimilar_) {
            if (!(t > 0.0)) throw DomainError("self-similar field needs t > 0");
            x = hc.a / std::sqrt(t);
            phase = p_.mu * std::log(t);
        } else {
            phase = p_.mu * t;
        }
        const ConeProfile& cp = profile(hc.cone);
        const double s = cp.s(x);
        const auto pt = surface_eval(sf_, s);
        const double angle = cp.beta(x) + p_.k * hc.alpha + phase;
        n.u = {pt.gamma_s, pt.gamma * std::cos(angle), pt.gamma * std::sin(angle)};
        n.phi = p_.c * hc.alpha + p_.b * std::log(x) + cp.phi3(x);
        return n;
    }

private:
    SurfaceProfile sf_;
    WaveParameters p_;
    double kappa_;
    ConeProfile h_, v_;
    bool selfsimilar_;
};

// Solves the horizontal and vertical profiles and wraps them. On a
// non-compact target a cone whose effective μ is positive carries the
// trivial profile.
inline FieldSampler make_field_sampler(const SurfaceProfile& sf, const WaveParameters& p, const SeedSpec& spec,
                                       double x_max, bool selfsimilar = false, const IntegrationConfig& cfg = {}) {
    const double kappa = require_case_one(p).kappa;
    const WaveParameters vp = vertical_params(p);
    auto build = [&](const WaveParameters& eff, bool vertical) {
        if (spec.q0 == 0.0 || (!sf.compact() && eff.mu > 0.0)) return ConeProfile::trivial(x_max);
        if (selfsimilar) return ConeProfile::from(solve_selfsimilar(sf, p, spec, x_max, cfg, {vertical, 1.0}));
        return ConeProfile::from(solve_profile(sf, eff, spec, x_max, cfg));
    };
    return FieldSampler(sf, p, kappa, build(p, false), build(vp, true), selfsimilar);
}

struct GridSpec {
    double xmin = -10.0, xmax = 10.0, ymin = -10.0, ymax = 10.0;
    std::size_t nx = 512, ny = 512;
    int refine_levels = 0;  // extra nodes at |x ± y| = 2^-j, j = 1..refine_levels
};

struct FieldGrid {
    double t = 0.0;
    GridSpec spec;
    std::vector<FieldNode> nodes;  // row-major in y then x, refinement nodes appended
};

namespace detail {

// Mirror-symmetric linspace: equal and opposite nodes match exactly.
inline double lin_node(double lo, double hi, std::size_t i, std::size_t n) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const double step = static_cast<double>(2 * i) - static_cast<double>(n - 1);
    return mid + half * step / static_cast<double>(n - 1);
}

}  // namespace detail

inline FieldGrid sample_field(const FieldSampler& fs, double t, const GridSpec& g, unsigned jobs = 1) {
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("grid counts must be at least 2");
    FieldGrid out;
    out.t = t;
    out.spec = g;
    std::vector<std::array<double, 2>> pts;
    pts.reserve(g.nx * g.ny);
    for (std::size_t j = 0; j < g.ny; ++j) {
        const double y = detail::lin_node(g.ymin, g.ymax, j, g.ny);
        for (std::size_t i = 0; i < g.nx; ++i) pts.push_back({detail::lin_node(g.xmin, g.xmax, i, g.nx), y});
    }
    // Refinement bands: ξ (or η) swept along the grid diagonal, the other fixed at ±2^-j.
    const std::size_t nd = std::max(g.nx, g.ny);
    const double span = std::min(g.xmax - g.xmin, g.ymax - g.ymin);
    for (int lev = 1; lev <= g.refine_levels; ++lev) {
        const double e = std::ldexp(1.0, -lev);
        for (std::size_t i = 0; i < nd; ++i) {
            const double w = detail::lin_node(-0.5 * span, 0.5 * span, i, nd);
            for (double sgn : {-1.0, 1.0}) {
                pts.push_back({0.5 * (w + sgn * e), 0.5 * (w - sgn * e)});
                pts.push_back({0.5 * (sgn * e + w), 0.5 * (sgn * e - w)});
            }
        }
    }
    out.nodes.resize(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t i) { out.nodes[i] = fs.node(t, pts[i][0], pts[i][1]); });
    return out;
}

enum class Verdict { Pass, Fail, Undetermined };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

struct CompatibilityReport {
    double phi1_plus = 0.0, phi1_minus = 0.0, phi2_plus = 0.0, phi2_minus = 0.0;
    double jump_phi1 = 0.0, jump_phi2 = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double u_xi_decay_exponent = std::numeric_limits<double>::infinity();
    double zero_sum = 0.0;      // (φ3h- + φ3h+) - (φ3v- + φ3v+) at the origin
    double continuity = 0.0;    // spread of the log coefficients across ξ (or η) samples
    Verdict verdict_continuity = Verdict::Undetermined;  // log coefficients continuous and constant
    Verdict verdict_zero_sum = Verdict::Undetermined;
    Verdict verdict_vanishing = Verdict::Undetermined;   // jumps and c_i annihilate ∇u on the cross
    Verdict verdict_regularity = Verdict::Undetermined;  // u_ξ exponent ≥ κ/2 - 0.05
    Verdict overall = Verdict::Undetermined;
};

struct CompatibilityOptions {
    int j_lo = 20, j_hi = 40;           // log-coefficient regression levels
    int fd_lo = 4, fd_hi = 24;          // u_ξ exponent levels
    double tol = 1e-6;
    double fd_step = 1e-4;
    std::vector<double> probes{0.5, 1.0, 2.0};
};

namespace detail {

struct LogFit {
    double intercept = 0.0;
    double slope = 0.0;
    double max_residual = 0.0;
    bool ok = false;
};

// y ≈ A + B log|z| by least squares.
inline LogFit log_fit(const std::vector<double>& z, const std::vector<double>& y) {
    LogFit f;
    const double n = static_cast<double>(z.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        mx += std::log(std::abs(z[i])) / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double lx = std::log(std::abs(z[i])) - mx;
        sxy += lx * (y[i] - my);
        sxx += lx * lx;
    }
    if (!(sxx > 0.0) || !std::isfinite(sxy)) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < z.size(); ++i) {
        f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * std::log(std::abs(z[i]))));
    }
    f.ok = std::isfinite(f.slope) && std::isfinite(f.intercept);
    return f;
}

inline double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace detail

inline CompatibilityReport compatibility_report(const FieldSampler& fs, double t, const CompatibilityOptions& opt = {}) {
    CompatibilityReport rep;
    bool conditioned = true;
    auto phi = [&](double xi, double eta) { return fs.node_characteristic(t, xi, eta).phi; };

    // Regress φ against log|η| at fixed ξ0 (or against log|ξ| at fixed η0).
    auto fit_eta = [&](double xi0, double sign) {
        std::vector<double> z, y;
        for (int j = opt.j_lo; j <= opt.j_hi; ++j) {
            z.push_back(sign * std::ldexp(1.0, -j));
            y.push_back(phi(xi0, z.back()));
        }
        auto f = detail::log_fit(z, y);
        if (!f.ok || f.max_residual > 1e-6 * (1.0 + std::abs(f.intercept))) conditioned = false;
        return f;
    };
    auto fit_xi = [&](double eta0, double sign) {
        std::vector<double> z, y;
        for (int j = opt.j_lo; j <= opt.j_hi; ++j) {
            z.push_back(sign * std::ldexp(1.0, -j));
            y.push_back(phi(z.back(), eta0));
        }
        auto f = detail::log_fit(z, y);
        if (!f.ok || f.max_residual > 1e-6 * (1.0 + std::abs(f.intercept))) conditioned = false;
        return f;
    };

    // Log coefficients per cone, and their spread over the probes.
    // φ1: cone at (ξ0, η→0±). φ2: cone at (ξ→0±, η0).
    std::array<std::vector<double>, 4> phi1_by_cone, phi2_by_cone;
    auto cone_index = [](double xi, double eta) { return static_cast<int>(hyperbolic_coords_characteristic(xi, eta).cone); };
    for (double p : opt.probes) {
        for (double xs : {-1.0, 1.0}) {
            for (double es : {-1.0, 1.0}) {
                phi1_by_cone[cone_index(xs, es)].push_back(fit_eta(xs * p, es).slope);
                phi2_by_cone[cone_index(xs, es)].push_back(fit_xi(es * p, xs).slope);
            }
        }
    }
    auto mean = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x / static_cast<double>(v.size());
        return m;
    };
    std::array<double, 4> phi1c{}, phi2c{};
    double spread = 0.0;
    for (int c = 0; c < 4; ++c) {
        phi1c[c] = mean(phi1_by_cone[c]);
        phi2c[c] = mean(phi2_by_cone[c]);
        for (double v : phi1_by_cone[c]) spread = std::max(spread, std::abs(v - phi1c[c]));
        for (double v : phi2_by_cone[c]) spread = std::max(spread, std::abs(v - phi2c[c]));
    }
    const int hp = static_cast<int>(Cone::HPlus), hm = static_cast<int>(Cone::HMinus);
    const int vp = static_cast<int>(Cone::VPlus), vm = static_cast<int>(Cone::VMinus);
    // φ1^+ joins v- (ξ ≤ 0) and h+ (ξ > 0); φ1^- joins h- and v+.
    // φ2^+ joins v+ (η ≤ 0) and h+ (η > 0); φ2^- joins h- and v-.
    spread = std::max({spread, std::abs(phi1c[vm] - phi1c[hp]), std::abs(phi1c[hm] - phi1c[vp]),
                       std::abs(phi2c[vp] - phi2c[hp]), std::abs(phi2c[hm] - phi2c[vm])});
    rep.continuity = spread;
    rep.phi1_plus = 0.5 * (phi1c[vm] + phi1c[hp]);
    rep.phi1_minus = 0.5 * (phi1c[hm] + phi1c[vp]);
    rep.phi2_plus = 0.5 * (phi2c[vp] + phi2c[hp]);
    rep.phi2_minus = 0.5 * (phi2c[hm] + phi2c[vm]);
    rep.jump_phi1 = std::max(std::abs(phi1c[hp] - phi1c[vp]), std::abs(phi1c[vm] - phi1c[hm]));
    rep.jump_phi2 = std::max(std::abs(phi2c[hp] - phi2c[vm]), std::abs(phi2c[vp] - phi2c[hm]));

    // φ3 on the axes: the regression intercept minus the other log term.
    auto phi3_on_eta_axis = [&](double xi0, double sign) {
        const int c = cone_index(xi0, sign);
        return fit_eta(xi0, sign).intercept - phi2c[c] * std::log(std::abs(xi0));
    };
    auto phi3_on_xi_axis = [&](double eta0, double sign) {
        const int c = cone_index(sign, eta0);
        return fit_xi(eta0, sign).intercept - phi1c[c] * std::log(std::abs(eta0));
    };
    for (double p : opt.probes) {
        rep.c1 = std::max(rep.c1, std::abs(phi3_on_eta_axis(p, -1.0) - phi3_on_eta_axis(p, 1.0)));
        rep.c3 = std::max(rep.c3, std::abs(phi3_on_eta_axis(-p, 1.0) - phi3_on_eta_axis(-p, -1.0)));
        rep.c2 = std::max(rep.c2, std::abs(phi3_on_xi_axis(-p, -1.0) - phi3_on_xi_axis(-p, 1.0)));
        rep.c4 = std::max(rep.c4, std::abs(phi3_on_xi_axis(p, 1.0) - phi3_on_xi_axis(p, -1.0)));
    }

    // φ3 near the origin in each cone.
    const double e0 = std::ldexp(1.0, -opt.j_hi);
    auto phi3_origin = [&](double xs, double es) {
        const int c = cone_index(xs, es);
        return phi(xs * e0, es * e0) - phi1c[c] * std::log(e0) - phi2c[c] * std::log(e0);
    };
    rep.zero_sum = (phi3_origin(-1, -1) + phi3_origin(1, 1)) - (phi3_origin(-1, 1) + phi3_origin(1, -1));

    // |u_ξ(ξ0, η)| ~ |η|^(κ/2) as η → 0.
    bool any_nontrivial = false;
    for (double xs : {-1.0, 1.0}) {
        for (double es : {-1.0, 1.0}) {
            const Cone cone = hyperbolic_coords_characteristic(xs, es).cone;
            if (fs.profile(cone).is_trivial()) continue;
            any_nontrivial = true;
            std::vector<double> z, y;
            for (int j = opt.fd_lo; j <= opt.fd_hi; ++j) {
                const double eta = es * std::ldexp(1.0, -j);
                const double h = opt.fd_step;
                const auto up = fs.node_characteristic(t, xs + h, eta).u;
                const auto dn = fs.node_characteristic(t, xs - h, eta).u;
                const std::array<double, 3> d{(up[0] - dn[0]) / (2 * h), (up[1] - dn[1]) / (2 * h),
                                              (up[2] - dn[2]) / (2 * h)};
                const double m = detail::norm3(d);
                if (!(m > 0.0)) continue;
                z.push_back(eta);
                y.push_back(std::log(m));
            }
            const auto f = detail::log_fit(z, y);
            if (!f.ok || z.size() < 4) {
                conditioned = false;
                continue;
            }
            rep.u_xi_decay_exponent = std::min(rep.u_xi_decay_exponent, f.slope);
        }
    }

    if (!conditioned) {
        rep.overall = Verdict::Undetermined;
        return rep;
    }
    auto verdict = [](bool ok) { return ok ? Verdict::Pass : Verdict::Fail; };
    rep.verdict_continuity = verdict(spread < opt.tol);
    rep.verdict_zero_sum = verdict(std::abs(rep.zero_sum) < opt.tol);
    const double cmax = std::max({rep.c1, rep.c2, rep.c3, rep.c4});
    rep.verdict_vanishing = verdict(rep.jump_phi1 < opt.tol && rep.jump_phi2 < opt.tol && cmax < opt.tol);
    rep.verdict_regularity =
        verdict(!any_nontrivial || rep.u_xi_decay_exponent >= 0.5 * fs.kappa() - 0.05);
    const bool all = rep.verdict_continuity == Verdict::Pass && rep.verdict_zero_sum == Verdict::Pass &&
                     rep.verdict_vanishing == Verdict::Pass && rep.verdict_regularity == Verdict::Pass;
    rep.overall = verdict(all);
    return rep;
}

}  // namespace hyperwave
