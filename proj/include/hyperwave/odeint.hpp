#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyperwave/detail/dop853_tableau.hpp"
#include "hyperwave/errors.hpp"

namespace hyperwave {

struct IntegrationConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double blowup_norm = 1e8;
    std::size_t max_steps = 10'000'000;
    // Integrate in u = log t instead of t. Requires t > 0 on the whole range.
    bool log_time = false;
};

enum class Termination { ReachedEnd, Event, BlowUp, StepLimit };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedEnd: return "ReachedEnd";
        case Termination::Event: return "Event";
        case Termination::BlowUp: return "BlowUp";
        case Termination::StepLimit: return "StepLimit";
    }
    return "?";
}

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<Vec<N>(double, const Vec<N>&)>;

// Terminal event: integration stops where g changes sign.
template <std::size_t N>
struct Event {
    std::string name;
    std::function<double(double, const Vec<N>&)> g;
};

template <std::size_t N>
class Trajectory {
public:
    struct Step {
        double u0;  // start, in the integration variable
        double h;   // signed step length
        std::array<Vec<N>, 8> r;
    };

    std::size_t size() const { return t_.size(); }
    double t(std::size_t i) const { return t_[i]; }
    const Vec<N>& y(std::size_t i) const { return y_[i]; }
    double t_front() const { return t_.front(); }
    double t_back() const { return t_.back(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<Vec<N>>& states() const { return y_; }

    bool log_time() const { return log_time_; }
    Termination termination() const { return termination_; }
    const std::string& event_name() const { return event_name_; }
    std::size_t rejected_steps() const { return rejected_; }

    // Integration variable of a physical time.
    double to_internal(double t) const { return log_time_ ? std::log(t) : t; }
    double to_physical(double u) const { return log_time_ ? std::exp(u) : u; }

    std::size_t step_count() const { return steps_.size(); }
    const Step& step(std::size_t i) const { return steps_[i]; }
    // Internal-variable extent of step i, truncated at an event if needed.
    std::pair<double, double> step_span(std::size_t i) const {
        return {u_[i], u_[i + 1]};
    }

    bool contains(double t) const {
        const double lo = std::min(t_.front(), t_.back());
        const double hi = std::max(t_.front(), t_.back());
        return t >= lo && t <= hi;
    }

    Vec<N> operator()(double t) const { return eval_internal(to_internal(clamp_knot(t))); }

    // dy/dt in the physical variable.
    Vec<N> derivative(double t) const {
        const double u = to_internal(clamp_knot(t));
        Vec<N> d = derivative_internal(u);
        if (log_time_) {
            for (auto& v : d) v /= t;
        }
        return d;
    }

    Vec<N> eval_internal(double u) const {
        if (steps_.empty()) return y_.front();
        const Step& st = steps_[locate(u)];
        const double s = (u - st.u0) / st.h;
        const double s1 = 1.0 - s;
        Vec<N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            const auto& r = st.r;
            const double a6 = r[6][i] + s * r[7][i];
            const double a5 = r[5][i] + a6 * s1;
            const double a4 = r[4][i] + a5 * s;
            const double a3 = r[3][i] + a4 * s1;
            const double a2 = r[2][i] + a3 * s;
            const double a1 = r[1][i] + a2 * s1;
            out[i] = r[0][i] + s * a1;
        }
        return out;
    }

    Vec<N> derivative_internal(double u) const {
        Vec<N> out{};
        if (steps_.empty()) return out;
        const Step& st = steps_[locate(u)];
        const double s = (u - st.u0) / st.h;
        const double s1 = 1.0 - s;
        for (std::size_t i = 0; i < N; ++i) {
            const auto& r = st.r;
            const double a6 = r[6][i] + s * r[7][i];
            const double a5 = r[5][i] + a6 * s1;
            const double a4 = r[4][i] + a5 * s;
            const double a3 = r[3][i] + a4 * s1;
            const double a2 = r[2][i] + a3 * s;
            const double a1 = r[1][i] + a2 * s1;
            out[i] = (a1 - s * (a2 - s1 * (a3 - s * (a4 - s1 * (a5 - s * (a6 - s1 * r[7][i])))))) / st.h;
        }
        return out;
    }

    // Builds a single-knot trajectory (used for degenerate ranges and tests).
    static Trajectory constant(double t0, const Vec<N>& y0, bool log_time = false) {
        Trajectory tr;
        tr.log_time_ = log_time;
        tr.t_.push_back(t0);
        tr.u_.push_back(log_time ? std::log(t0) : t0);
        tr.y_.push_back(y0);
        return tr;
    }

private:
    template <std::size_t M>
    friend Trajectory<M> integrate(const Rhs<M>&, const Vec<M>&, double, double,
                                   const IntegrationConfig&, const std::vector<Event<M>>&);

    double clamp_knot(double t) const {
        // Knot times are stored exactly; tolerate rounding from callers that
        // recompute the endpoints.
        const double lo = std::min(t_.front(), t_.back());
        const double hi = std::max(t_.front(), t_.back());
        const double slack = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
        if (t < lo - slack || t > hi + slack) {
            throw DomainError("trajectory evaluated outside its range");
        }
        return std::clamp(t, lo, hi);
    }

    std::size_t locate(double u) const {
        const bool forward = u_.back() >= u_.front();
        std::size_t idx;
        if (forward) {
            idx = static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin());
        } else {
            idx = static_cast<std::size_t>(
                std::upper_bound(u_.begin(), u_.end(), u, std::greater<double>()) - u_.begin());
        }
        if (idx == 0) return 0;
        return std::min(idx - 1, steps_.size() - 1);
    }

    bool log_time_ = false;
    std::vector<double> t_;
    std::vector<double> u_;
    std::vector<Vec<N>> y_;
    std::vector<Step> steps_;
    Termination termination_ = Termination::ReachedEnd;
    std::string event_name_;
    std::size_t rejected_ = 0;
};

namespace detail {

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

template <std::size_t N>
double max_abs(const Vec<N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
std::vector<double> to_vector(const Vec<N>& v) {
    return std::vector<double>(v.begin(), v.end());
}

}  // namespace detail

// Adaptive DOP853 integration from t0 to t1 (either direction) with dense output.
template <std::size_t N>
Trajectory<N> integrate(const Rhs<N>& rhs, const Vec<N>& y0, double t0, double t1,
                        const IntegrationConfig& cfg, const std::vector<Event<N>>& events = {}) {
    using namespace detail::dop853;

    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0) || !(cfg.blowup_norm > 0.0)) {
        throw std::invalid_argument("integrate: tolerances and blow-up norm must be positive");
    }
    if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) {
        throw std::invalid_argument("integrate: degenerate time range");
    }
    if (cfg.log_time && (t0 <= 0.0 || t1 <= 0.0)) {
        throw std::invalid_argument("integrate: log-time needs a positive range");
    }
    if (!detail::all_finite(y0)) {
        throw IntegrationError("non-finite initial state", t0, detail::to_vector(y0));
    }

    const bool lt = cfg.log_time;
    auto f = [&](double u, const Vec<N>& y) {
        if (!lt) return rhs(u, y);
        const double t = std::exp(u);
        Vec<N> d = rhs(t, y);
        for (auto& v : d) v *= t;
        return d;
    };

    Trajectory<N> tr;
    tr.log_time_ = lt;
    const double u_start = lt ? std::log(t0) : t0;
    const double u_end = lt ? std::log(t1) : t1;
    const double dir = u_end > u_start ? 1.0 : -1.0;
    const double span = std::abs(u_end - u_start);
    const double max_step = lt ? std::numeric_limits<double>::infinity() : cfg.max_step;

    tr.t_.push_back(t0);
    tr.u_.push_back(u_start);
    tr.y_.push_back(y0);

    auto err_scale = [&](double a, double b) { return cfg.atol + cfg.rtol * std::max(std::abs(a), std::abs(b)); };

    double u = u_start;
    Vec<N> y = y0;
    Vec<N> k1 = f(u, y);
    if (!detail::all_finite(k1)) {
        throw IntegrationError("non-finite right-hand side at the initial point", t0, detail::to_vector(y0));
    }

    // Initial step guess.
    double h;
    {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = err_scale(y[i], y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, span, max_step});
        Vec<N> y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1[i];
        const Vec<N> f1 = f(u + dir * h0, y1);
        double d2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = err_scale(y[i], y[i]);
            d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
        }
        d2 = std::isfinite(d2) ? std::sqrt(d2 / N) / h0 : 0.0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 8.0);
        h = std::min({100 * h0, h1, span, max_step});
    }

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t0, y0);

    Vec<N> k2, k3, k4, k5, k6, k7, k8, k9, k10, yw, ynew, knew;
    bool last_rejected = false;
    std::size_t attempts = 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    while (dir * (u_end - u) > 0.0) {
        if (attempts++ >= cfg.max_steps) {
            tr.termination_ = Termination::StepLimit;
            return tr;
        }
        if (h < 16.0 * eps * std::max(1.0, std::abs(u))) {
            throw IntegrationError("step size underflow", tr.t_.back(), detail::to_vector(y));
        }
        bool final_step = false;
        if (h >= dir * (u_end - u)) {
            h = dir * (u_end - u);
            final_step = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (a21 * k1[i]);
        k2 = f(u + c2 * hs, yw);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(u + c3 * hs, yw);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (a41 * k1[i] + a43 * k3[i]);
        k4 = f(u + c4 * hs, yw);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(u + c5 * hs, yw);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + hs * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(u + c6 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = f(u + c7 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
        k8 = f(u + c8 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] + a98 * k8[i]);
        k9 = f(u + c9 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                                 a108 * k8[i] + a109 * k9[i]);
        k10 = f(u + c10 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                                 a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
        const Vec<N> k11 = f(u + c11 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                                 a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i]);
        const Vec<N> k12 = f(u + hs, yw);

        Vec<N> bsum;
        for (std::size_t i = 0; i < N; ++i) {
            bsum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] +
                      b11 * k11[i] + b12 * k12[i];
            ynew[i] = y[i] + hs * bsum[i];
        }

        bool finite = detail::all_finite(ynew) && detail::all_finite(k12);
        double err = 0.0;
        if (finite) {
            double err3 = 0.0, err5 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = err_scale(y[i], ynew[i]);
                const double e3 = bsum[i] - e31 * k1[i] - e32 * k9[i] - e33 * k12[i];
                const double e5 = e51 * k1[i] + e56 * k6[i] + e57 * k7[i] + e58 * k8[i] + e59 * k9[i] +
                                  e510 * k10[i] + e511 * k11[i] + e512 * k12[i];
                err3 += (e3 / sc) * (e3 / sc);
                err5 += (e5 / sc) * (e5 / sc);
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) deno = 1.0;
            err = h * err5 / std::sqrt(N * deno);
            finite = std::isfinite(err);
        }
        if (!finite) {
            h *= 0.25;
            last_rejected = true;
            ++tr.rejected_;
            continue;
        }

        if (err > 1.0) {
            h *= std::max(0.9 * std::pow(err, -0.125), 0.333);
            last_rejected = true;
            ++tr.rejected_;
            continue;
        }

        // Accepted.
        const double u_new = final_step ? u_end : u + hs;
        knew = f(u_new, ynew);
        if (!detail::all_finite(knew)) {
            h *= 0.25;
            last_rejected = true;
            ++tr.rejected_;
            continue;
        }

        typename Trajectory<N>::Step st;
        st.u0 = u;
        st.h = hs;
        auto& r = st.r;
        Vec<N> d5, d6, d7, d8;
        for (std::size_t i = 0; i < N; ++i) {
            r[0][i] = y[i];
            r[1][i] = ynew[i] - y[i];
            r[2][i] = hs * k1[i] - r[1][i];
            r[3][i] = r[1][i] - hs * knew[i] - r[2][i];
            d5[i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] + d410 * k10[i] +
                    d411 * k11[i] + d412 * k12[i];
            d6[i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] + d510 * k10[i] +
                    d511 * k11[i] + d512 * k12[i];
            d7[i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] + d610 * k10[i] +
                    d611 * k11[i] + d612 * k12[i];
            d8[i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] + d710 * k10[i] +
                    d711 * k11[i] + d712 * k12[i];
        }
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a141 * k1[i] + a147 * k7[i] + a148 * k8[i] + a149 * k9[i] + a1410 * k10[i] +
                                 a1411 * k11[i] + a1412 * k12[i] + a1413 * knew[i]);
        const Vec<N> k14 = f(u + c14 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a151 * k1[i] + a156 * k6[i] + a157 * k7[i] + a158 * k8[i] + a1511 * k11[i] +
                                 a1512 * k12[i] + a1513 * knew[i] + a1514 * k14[i]);
        const Vec<N> k15 = f(u + c15 * hs, yw);
        for (std::size_t i = 0; i < N; ++i)
            yw[i] = y[i] + hs * (a161 * k1[i] + a166 * k6[i] + a167 * k7[i] + a168 * k8[i] + a169 * k9[i] +
                                 a1613 * knew[i] + a1614 * k14[i] + a1615 * k15[i]);
        const Vec<N> k16 = f(u + c16 * hs, yw);
        for (std::size_t i = 0; i < N; ++i) {
            r[4][i] = hs * (d5[i] + d413 * knew[i] + d414 * k14[i] + d415 * k15[i] + d416 * k16[i]);
            r[5][i] = hs * (d6[i] + d513 * knew[i] + d514 * k14[i] + d515 * k15[i] + d516 * k16[i]);
            r[6][i] = hs * (d7[i] + d613 * knew[i] + d614 * k14[i] + d615 * k15[i] + d616 * k16[i]);
            r[7][i] = hs * (d8[i] + d713 * knew[i] + d714 * k14[i] + d715 * k15[i] + d716 * k16[i]);
        }
        tr.steps_.push_back(st);
        tr.u_.push_back(u_new);
        tr.t_.push_back(final_step ? t1 : (lt ? std::exp(u_new) : u_new));
        tr.y_.push_back(ynew);

        // Terminal events: earliest sign change in this step wins.
        std::optional<double> hit_u;
        std::size_t hit_e = 0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g_new = events[e].g(tr.t_.back(), ynew);
            const bool crossed = (g_prev[e] < 0.0 && g_new >= 0.0) || (g_prev[e] > 0.0 && g_new <= 0.0);
            if (crossed) {
                double lo = u, hi = u_new;
                const double g_lo = g_prev[e];
                while (std::abs(hi - lo) > 1e-12 * std::max(1.0, std::abs(lo))) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    const double gm = events[e].g(tr.to_physical(mid), tr.eval_internal(mid));
                    if ((gm < 0.0) == (g_lo < 0.0) && gm != 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if (!hit_u || dir * (hi - *hit_u) < 0.0) {
                    hit_u = hi;
                    hit_e = e;
                }
            }
            g_prev[e] = g_new;
        }
        if (hit_u) {
            const Vec<N> ye = tr.eval_internal(*hit_u);
            tr.u_.back() = *hit_u;
            tr.t_.back() = tr.to_physical(*hit_u);
            tr.y_.back() = ye;
            tr.termination_ = Termination::Event;
            tr.event_name_ = events[hit_e].name;
            return tr;
        }

        if (detail::max_abs(ynew) > cfg.blowup_norm) {
            tr.termination_ = Termination::BlowUp;
            return tr;
        }

        const double scale = err == 0.0 ? 6.0 : std::clamp(0.9 * std::pow(err, -0.125), 0.333, 6.0);
        const double h_next = last_rejected ? h * std::min(scale, 1.0) : h * scale;
        last_rejected = false;
        u = u_new;
        y = ynew;
        k1 = knew;
        h = std::min(h_next, max_step);
    }
    tr.termination_ = Termination::ReachedEnd;
    return tr;
}

}  // namespace hyperwave
