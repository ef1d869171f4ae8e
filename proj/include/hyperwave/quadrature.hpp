#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hyperwave/odeint.hpp"

namespace hyperwave {

namespace detail {

// ∫ g(t, y(t)) dt over the part of step i inside [u_lo, u_hi] (internal variable).
template <std::size_t N, class G>
double step_integral(const Trajectory<N>& tr, G&& g, double u_lo, double u_hi) {
    if (u_lo == u_hi) return 0.0;
    auto integrand = [&](double u) {
        const double t = tr.to_physical(u);
        const double w = tr.log_time() ? t : 1.0;
        return g(t, tr.eval_internal(u)) * w;
    };
    return boost::math::quadrature::gauss<double, 15>::integrate(integrand, u_lo, u_hi);
}

}  // namespace detail

// ∫_{t1}^{t2} g(t, y(t)) dt along the dense output, one Gauss-Legendre rule per step.
template <std::size_t N, class G>
double integrate_along(const Trajectory<N>& tr, G&& g, double t1, double t2) {
    if (t1 == t2 || tr.step_count() == 0) return 0.0;
    const double sign = t2 > t1 ? 1.0 : -1.0;
    const double lo_t = std::min(t1, t2), hi_t = std::max(t1, t2);
    const double u_a = tr.to_internal(lo_t), u_b = tr.to_internal(hi_t);
    double total = 0.0;
    for (std::size_t i = 0; i < tr.step_count(); ++i) {
        auto [p, q] = tr.step_span(i);
        if (p > q) std::swap(p, q);
        const double lo = std::max(p, u_a), hi = std::min(q, u_b);
        if (lo < hi) total += detail::step_integral(tr, g, lo, hi);
    }
    return sign * total;
}

// Running integral from the first knot: out[i] = ∫_{t_0}^{t_i} g dt.
template <std::size_t N, class G>
std::vector<double> cumulative_integral(const Trajectory<N>& tr, G&& g) {
    std::vector<double> out(tr.size(), 0.0);
    for (std::size_t i = 0; i < tr.step_count(); ++i) {
        const auto [p, q] = tr.step_span(i);
        double piece = detail::step_integral(tr, g, std::min(p, q), std::max(p, q));
        if (q < p) piece = -piece;
        // In log time the integral above is in t already; orientation follows u.
        out[i + 1] = out[i] + piece;
    }
    return out;
}

}  // namespace hyperwave
