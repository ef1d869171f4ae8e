#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/errors.hpp"
#include "hyperwave/profile.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

enum class TailScenario { DecayToCenter, PoleDegenerate, PoleGeneric, Unbounded, Undetermined };

inline const char* to_string(TailScenario s) {
    switch (s) {
        case TailScenario::DecayToCenter: return "DecayToCenter";
        case TailScenario::PoleDegenerate: return "PoleDegenerate";
        case TailScenario::PoleGeneric: return "PoleGeneric";
        case TailScenario::Unbounded: return "Unbounded";
        case TailScenario::Undetermined: return "Undetermined";
    }
    return "?";
}

struct AsymptoticFit {
    TailScenario scenario = TailScenario::Undetermined;
    double E_inf = 0.0;
    double theta0 = 0.0;
    double freq = 0.0;
    double log_drift = 0.0;
    double rate_exponent = 0.0;
    std::pair<double, double> window{0.0, 0.0};

    // Diagnostics beyond the report fields.
    std::size_t crossings = 0;
    double mean_spacing = 0.0;
    double fluctuation = 0.0;  // max |local energy - E_inf| / E_inf
    double w2_min = 0.0;       // μw² extremes (pole tail)
    double w2_max = 0.0;
};

// Uniform samples of (a, s, s_a) on a window.
struct TailSamples {
    std::vector<double> a, s, s_a;

    std::size_t size() const { return a.size(); }

    static TailSamples from(const ProfileTrajectory& tr, double a_lo, double a_hi, double spacing) {
        if (a_lo < tr.a_min() || a_hi > tr.a_max() || !(a_hi > a_lo)) {
            throw DomainError("tail window not covered by the trajectory");
        }
        const auto n = static_cast<std::size_t>(std::ceil((a_hi - a_lo) / spacing)) + 1;
        TailSamples out;
        out.a.reserve(n);
        out.s.reserve(n);
        out.s_a.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = i + 1 == n ? a_hi : a_lo + (a_hi - a_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            const ProfileState st = tr.state(a);
            out.a.push_back(a);
            out.s.push_back(st.s);
            out.s_a.push_back(st.s_a);
        }
        return out;
    }
};

namespace detail {

// Roots of a sampled function with known derivative, via the cubic Hermite
// interpolant on each bracketing cell.
inline std::vector<double> hermite_roots(const std::vector<double>& x, const std::vector<double>& f,
                                         const std::vector<double>& df) {
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double f0 = f[i], f1 = f[i + 1];
        if (f0 == 0.0) {
            roots.push_back(x[i]);
            continue;
        }
        if ((f0 < 0.0) == (f1 < 0.0) || f1 == 0.0) continue;
        const double h = x[i + 1] - x[i];
        const double m0 = df[i] * h, m1 = df[i + 1] * h;
        auto p = [&](double t) {
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * m1;
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((p(mid) < 0.0) == (f0 < 0.0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(x[i] + 0.5 * (lo + hi) * h);
    }
    return roots;
}

inline std::vector<double> unwrap(const std::vector<double>& phase) {
    std::vector<double> out(phase.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < phase.size(); ++i) {
        if (i > 0) {
            const double d = phase[i] + offset - out[i - 1];
            if (d > std::numbers::pi) offset -= 2 * std::numbers::pi;
            if (d < -std::numbers::pi) offset += 2 * std::numbers::pi;
        }
        out[i] = phase[i] + offset;
    }
    return out;
}

inline double wrap_angle(double x) {
    x = std::remainder(x, 2 * std::numbers::pi);
    return x <= -std::numbers::pi ? x + 2 * std::numbers::pi : x;
}

// Least squares r ≈ c0 + c1 log a + c2 / a, where r is the phase with its
// linear part removed. The 1/a column absorbs the second-order frequency shift.
inline Eigen::Vector3d phase_regression(const std::vector<double>& a, const std::vector<double>& r) {
    Eigen::MatrixXd m(a.size(), 3);
    Eigen::VectorXd rhs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        m(j, 0) = 1.0;
        m(j, 1) = std::log(a[i]);
        m(j, 2) = 1.0 / a[i];
        rhs(j) = r[i];
    }
    return m.colPivHouseholderQr().solve(rhs);
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Decay exponent of the oscillating part of a local energy: slope of
// log(peak-to-peak per chunk) against log(chunk midpoint).
inline double residual_rate(const std::vector<double>& a, const std::vector<double>& e, std::size_t chunks = 8) {
    std::vector<double> lx, ly;
    const std::size_t n = a.size() / chunks;
    if (n < 4) return 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const auto b = e.begin() + static_cast<std::ptrdiff_t>(c * n);
        const auto [lo, hi] = std::minmax_element(b, b + static_cast<std::ptrdiff_t>(n));
        const double ptp = *hi - *lo;
        if (!(ptp > 0.0)) continue;
        lx.push_back(std::log(0.5 * (a[c * n] + a[c * n + n - 1])));
        ly.push_back(std::log(ptp));
    }
    return lx.size() >= 3 ? slope(lx, ly) : 0.0;
}

inline double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace detail

// μ < 0: s ≈ √(2E∞/(a|μ|)) cos(θ0 - √|μ| a - L log a).
inline AsymptoticFit fit_decay_to_center(const TailSamples& ts, const WaveParameters& p, const SurfaceProfile& sf) {
    if (!(p.mu < 0.0)) throw RegimeError("fit_decay_to_center needs mu < 0");
    AsymptoticFit fit;
    fit.window = {ts.a.front(), ts.a.back()};
    const double m = std::sqrt(-p.mu);
    const std::size_t n = ts.size();

    std::vector<double> e(n), theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = ts.a[i], ra = std::sqrt(a);
        const double w = ra * ts.s[i];
        const double wa = ts.s[i] / (2 * ra) + ra * ts.s_a[i];
        e[i] = 0.5 * wa * wa + w * w / (8 * a * a) - p.mu * a * surface_eval(sf, ts.s[i]).capF;
        theta[i] = std::atan2(wa / m, w);
    }
    fit.E_inf = detail::mean(e);

    const auto roots = detail::hermite_roots(ts.a, ts.s, ts.s_a);
    fit.crossings = roots.size();
    if (roots.size() < 10 || !(fit.E_inf > 0.0)) {
        fit.scenario = TailScenario::Undetermined;
        return fit;
    }
    fit.scenario = TailScenario::DecayToCenter;
    fit.mean_spacing = (roots.back() - roots.front()) / static_cast<double>(roots.size() - 1);
    fit.freq = std::numbers::pi / fit.mean_spacing;

    auto th = detail::unwrap(theta);
    for (std::size_t i = 0; i < n; ++i) th[i] += m * ts.a[i];
    const Eigen::Vector3d coef = detail::phase_regression(ts.a, th);
    fit.theta0 = detail::wrap_angle(coef(0));
    fit.log_drift = -coef(1);

    double worst = 0.0;
    for (double v : e) worst = std::max(worst, std::abs(v - fit.E_inf));
    fit.fluctuation = worst / fit.E_inf;
    fit.rate_exponent = detail::residual_rate(ts.a, e);
    return fit;
}

// μ > 0 on a compact target: s ≈ s0 - w/√a with w² oscillating at frequency 2√μ.
inline AsymptoticFit fit_approach_to_pole(const TailSamples& ts, const WaveParameters& p, const SurfaceProfile& sf) {
    if (!sf.compact()) throw DomainError("fit_approach_to_pole needs a compact target");
    if (!(p.mu > 0.0)) throw RegimeError("fit_approach_to_pole needs mu > 0");
    AsymptoticFit fit;
    fit.window = {ts.a.front(), ts.a.back()};
    const double rm = std::sqrt(p.mu);
    const double f0 = area_at_pole(sf);
    const double floor_e = rm * std::abs(p.c) * f0;
    const std::size_t n = ts.size();

    std::vector<double> w2(n), w2a(n), e(n), wwa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = ts.a[i], ra = std::sqrt(a);
        const double sgn = ts.s[i] < 0.0 ? -1.0 : 1.0;
        const double st = sf.s0 - std::abs(ts.s[i]);
        const double w = ra * st;
        const double wa = st / (2 * ra) - ra * sgn * ts.s_a[i];
        w2[i] = w * w;
        wwa[i] = w * wa;
        w2a[i] = 2 * w * wa;
        e[i] = 0.5 * wa * wa + 0.5 * p.mu * w * w + p.c * p.c * f0 * f0 / (2 * w * w);
    }
    fit.E_inf = detail::mean(e);
    const auto [lo, hi] = std::minmax_element(w2.begin(), w2.end());
    fit.w2_min = p.mu * *lo;
    fit.w2_max = p.mu * *hi;
    double worst = 0.0;
    for (double v : e) worst = std::max(worst, std::abs(v - fit.E_inf));
    fit.fluctuation = worst / fit.E_inf;

    const double mean_w2 = detail::mean(w2);
    if (std::abs(fit.E_inf - floor_e) < 1e-4 * fit.E_inf && (*hi - *lo) < 1e-3 * mean_w2) {
        fit.scenario = TailScenario::PoleDegenerate;
        return fit;
    }

    std::vector<double> centered(n), theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        centered[i] = w2[i] - fit.E_inf / p.mu;
        theta[i] = std::atan2(centered[i], wwa[i] / rm);
    }
    const auto roots = detail::hermite_roots(ts.a, centered, w2a);
    fit.crossings = roots.size();
    if (roots.size() < 10) {
        fit.scenario = TailScenario::Undetermined;
        return fit;
    }
    fit.scenario = TailScenario::PoleGeneric;
    fit.mean_spacing = (roots.back() - roots.front()) / static_cast<double>(roots.size() - 1);
    fit.freq = std::numbers::pi / fit.mean_spacing;

    auto th = detail::unwrap(theta);
    for (std::size_t i = 0; i < n; ++i) th[i] -= 2 * rm * ts.a[i];
    const Eigen::Vector3d coef = detail::phase_regression(ts.a, th);
    fit.theta0 = detail::wrap_angle(coef(0));
    fit.log_drift = -coef(1);
    fit.rate_exponent = detail::residual_rate(ts.a, e);
    return fit;
}

namespace detail {

inline double tail_spacing(const WaveParameters& p) {
    const double period = 2 * std::numbers::pi / std::sqrt(std::abs(p.mu));
    return period / 64.0;
}

}  // namespace detail

inline AsymptoticFit fit_decay_to_center(const ProfileTrajectory& tr, std::pair<double, double> window) {
    const auto ts = TailSamples::from(tr, window.first, window.second, detail::tail_spacing(tr.params()));
    return fit_decay_to_center(ts, tr.params(), tr.surface());
}

inline AsymptoticFit fit_approach_to_pole(const ProfileTrajectory& tr, std::pair<double, double> window) {
    // w² oscillates twice as fast as the underlying rotation.
    const auto ts = TailSamples::from(tr, window.first, window.second, 0.5 * detail::tail_spacing(tr.params()));
    return fit_approach_to_pole(ts, tr.params(), tr.surface());
}

inline TailScenario classify_tail(const ProfileTrajectory& tr) {
    const auto& p = tr.params();
    const auto& sf = tr.surface();
    if (tr.termination() == Termination::BlowUp) return TailScenario::Unbounded;
    if (tr.trivial() || p.mu == 0.0) return TailScenario::Undetermined;
    const double a_hi = tr.a_max();
    const double a_lo = std::max(tr.a_min(), 0.5 * a_hi);
    if (!(a_hi - a_lo > 0.0)) return TailScenario::Undetermined;
    double s_min = std::numeric_limits<double>::infinity(), s_max = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto st = tr.knot(i);
        if (st.a < a_lo) continue;
        s_min = std::min(s_min, std::abs(st.s));
        s_max = std::max(s_max, std::abs(st.s));
    }
    if (!std::isfinite(s_max)) return TailScenario::Unbounded;
    if (p.mu < 0.0) {
        if (sf.compact() && s_max >= sf.s0) return TailScenario::Undetermined;
        return fit_decay_to_center(tr, {a_lo, a_hi}).scenario;
    }
    if (!sf.compact()) return TailScenario::Undetermined;
    if (!(s_min > 0.0)) return TailScenario::Undetermined;
    return fit_approach_to_pole(tr, {a_lo, a_hi}).scenario;
}

}  // namespace hyperwave
