#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hyperwave/errors.hpp"
#include "hyperwave/params.hpp"

namespace hyperwave {

enum class SurfaceKind { Sphere, PseudoSphere, Custom };

// Below this |s| the removable singularities are evaluated by Taylor series.
inline constexpr double kSeriesThreshold = 1e-4;

// Width of the band around ±s0 where functions are evaluated in the reflected
// variable s0 - |s|.
inline constexpr double kPoleBand = 0.1;

namespace detail {

// Tabulated antiderivative of a custom Γ. Values between nodes are completed
// by a local Gauss-Legendre rule, which keeps F accurate to rounding.
class AreaTable {
public:
    AreaTable(std::function<double(double)> gamma, double s_max, std::size_t n)
        : gamma_(std::move(gamma)), h_(s_max / static_cast<double>(n)), values_(n + 1, 0.0) {
        for (std::size_t i = 1; i <= n; ++i) {
            values_[i] = values_[i - 1] + piece(h_ * static_cast<double>(i - 1), h_ * static_cast<double>(i));
        }
    }

    double s_max() const { return h_ * static_cast<double>(values_.size() - 1); }

    // F(s) for s >= 0.
    double operator()(double s) const {
        const auto last = values_.size() - 1;
        std::size_t i = std::min(static_cast<std::size_t>(s / h_), last);
        double acc = values_[i];
        double lo = h_ * static_cast<double>(i);
        while (s - lo > h_) {  // beyond the table
            acc += piece(lo, lo + h_);
            lo += h_;
        }
        return acc + piece(lo, s);
    }

    double piece(double lo, double hi) const {
        if (hi == lo) return 0.0;
        return boost::math::quadrature::gauss<double, 15>::integrate(gamma_, lo, hi);
    }

private:
    std::function<double(double)> gamma_;
    double h_;
    std::vector<double> values_;
};

}  // namespace detail

struct SurfaceProfile {
    SurfaceKind kind = SurfaceKind::Sphere;
    double s0 = std::numbers::pi;
    double gamma3_at_0 = -1.0;

    std::function<double(double)> gamma_fn;
    std::function<double(double)> gamma_s_fn;
    std::shared_ptr<const detail::AreaTable> area;

    bool compact() const { return std::isfinite(s0); }

    static SurfaceProfile sphere() { return {SurfaceKind::Sphere, std::numbers::pi, -1.0, {}, {}, {}}; }

    static SurfaceProfile pseudo_sphere() {
        return {SurfaceKind::PseudoSphere, std::numeric_limits<double>::infinity(), 1.0, {}, {}, {}};
    }

    // Γ must be odd with Γ_s(0) = 1; compact profiles are 2 s0 periodic.
    static SurfaceProfile custom(std::function<double(double)> gamma, std::function<double(double)> gamma_s,
                                 double gamma3_at_0, double s0) {
        if (!(s0 > 0.0)) throw std::invalid_argument("custom surface: s0 must be positive");
        SurfaceProfile p{SurfaceKind::Custom, s0, gamma3_at_0, std::move(gamma), std::move(gamma_s), {}};
        const double s_max = std::isfinite(s0) ? s0 : 50.0;
        p.area = std::make_shared<detail::AreaTable>(p.gamma_fn, s_max, 4096);
        return p;
    }
};

struct SurfacePoint {
    double gamma;
    double gamma_s;
    double capF;
};

namespace detail {

inline double custom_area(const SurfaceProfile& sf, double s) {
    double x = std::abs(s);
    if (sf.compact()) {
        x = std::fmod(x, 2.0 * sf.s0);
        if (x > sf.s0) x = 2.0 * sf.s0 - x;
    }
    return (*sf.area)(x);
}

}  // namespace detail

// (Γ(s), Γ_s(s), F(s)).
inline SurfacePoint surface_eval(const SurfaceProfile& sf, double s) {
    switch (sf.kind) {
        case SurfaceKind::Sphere: {
            const double h = std::sin(0.5 * s);
            return {std::sin(s), std::cos(s), 2.0 * h * h};
        }
        case SurfaceKind::PseudoSphere: {
            const double h = std::sinh(0.5 * s);
            return {std::sinh(s), std::cosh(s), 2.0 * h * h};
        }
        case SurfaceKind::Custom:
            return {sf.gamma_fn(s), sf.gamma_s_fn(s), detail::custom_area(sf, s)};
    }
    return {0, 0, 0};
}

inline double area_at_pole(const SurfaceProfile& sf) {
    if (!sf.compact()) throw DomainError("surface has no opposite pole");
    if (sf.kind == SurfaceKind::Sphere) return 2.0;
    return detail::custom_area(sf, sf.s0);
}

// Reflected evaluation near the opposite pole: for st = s0 - s returns
// (Γ(s), Γ_s(s), F(s0) - F(s)) without cancellation in the last entry.
inline SurfacePoint pole_eval(const SurfaceProfile& sf, double st) {
    if (!sf.compact()) throw DomainError("surface has no opposite pole");
    if (sf.kind == SurfaceKind::Sphere) {
        const double h = std::sin(0.5 * st);
        return {std::sin(st), -std::cos(st), 2.0 * h * h};
    }
    const double s = sf.s0 - st;
    const double f1 = st >= 0.0 ? sf.area->piece(s, sf.s0) : -sf.area->piece(sf.s0, s);
    return {sf.gamma_fn(s), sf.gamma_s_fn(s), f1};
}

namespace detail {

// Series of the regular quotients at s = 0. Built-in surfaces carry five
// terms; custom surfaces only know Γ'''(0) and use two.
inline double series_tildeG(const SurfaceProfile& sf, double s) {
    const double e = sf.gamma3_at_0;
    const double s2 = s * s;
    if (sf.kind == SurfaceKind::Custom) return s * (-0.25 + e * s2 / 12.0);
    return s * (-1.0 / 4 + s2 * (e / 12.0 + s2 * (-17.0 / 960 + s2 * (e * 31.0 / 10080 + s2 * (-691.0 / 1451520)))));
}

inline double series_F_over_gamma(const SurfaceProfile& sf, double s) {
    const double e = sf.gamma3_at_0;
    const double s2 = s * s;
    if (sf.kind == SurfaceKind::Custom) return s * (0.5 - e * s2 / 24.0);
    return s * (1.0 / 2 + s2 * (-e / 24.0 + s2 * (1.0 / 240 + s2 * (-e * 17.0 / 40320 + s2 * (31.0 / 725760)))));
}

inline double series_F_over_gamma2(const SurfaceProfile& sf, double s) {
    const double e = sf.gamma3_at_0;
    const double s2 = s * s;
    if (sf.kind == SurfaceKind::Custom) return 0.5 - e * s2 / 8.0;
    return 1.0 / 2 + s2 * (-e / 8.0 + s2 * (1.0 / 48 + s2 * (-e * 17.0 / 5760 + s2 * (31.0 / 80640))));
}

inline double series_capG(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    const double k2 = p.k * p.k;
    const double bk = p.b * p.k;
    const double s2 = s * s;
    const double e = sf.gamma3_at_0;
    if (sf.kind == SurfaceKind::Custom) {
        return s2 * (0.5 * (k2 + bk) + s2 * (k2 * e / 6.0 + bk * e / 24.0 - k2 / 4.0));
    }
    double c4, c6, c8, c10;
    if (sf.kind == SurfaceKind::Sphere) {
        c4 = -5.0 * k2 / 12 - bk / 24;
        c6 = 23.0 * k2 / 360 + bk / 720;
        c8 = -19.0 * k2 / 4032 - bk / 40320;
        c10 = 383.0 * k2 / 1814400 + bk / 3628800;
    } else {
        c4 = -k2 / 12 + bk / 24;
        c6 = -7.0 * k2 / 360 + bk / 720;
        c8 = -31.0 * k2 / 20160 + bk / 40320;
        c10 = -127.0 * k2 / 1814400 + bk / 3628800;
    }
    return s2 * (0.5 * (k2 + bk) + s2 * (c4 + s2 * (c6 + s2 * (c8 + s2 * c10))));
}

}  // namespace detail

// G(s) = (k²/2)Γ² + bkF - k²F².
inline double capG(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    if (std::abs(s) < kSeriesThreshold) return detail::series_capG(sf, p, s);
    const auto [g, gs, f] = surface_eval(sf, s);
    const double k2 = p.k * p.k;
    return 0.5 * k2 * g * g + p.b * p.k * f - k2 * f * f;
}

inline double capG_direct(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    const auto [g, gs, f] = surface_eval(sf, s);
    const double k2 = p.k * p.k;
    return 0.5 * k2 * g * g + p.b * p.k * f - k2 * f * f;
}

// G_s / Γ = k²Γ_s + bk - 2k²F, regular everywhere.
inline double capG_s_over_gamma(const SurfacePoint& pt, const WaveParameters& p) {
    const double k2 = p.k * p.k;
    return k2 * pt.gamma_s + p.b * p.k - 2.0 * k2 * pt.capF;
}

inline double capG_s(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    const auto pt = surface_eval(sf, s);
    return pt.gamma * capG_s_over_gamma(pt, p);
}

inline double tildeG_direct(const SurfacePoint& pt) {
    const double fg = pt.capF / pt.gamma;
    return pt.gamma_s * fg * fg / pt.gamma - fg;
}

inline void require_off_pole(const SurfaceProfile& sf, double s, const SurfacePoint& pt) {
    if (pt.gamma == 0.0 && s != 0.0) throw DomainError("Γ vanishes away from s = 0");
    if (sf.compact() && std::abs(s) >= sf.s0 && sf.kind != SurfaceKind::Custom) {
        throw DomainError("s outside (-s0, s0)");
    }
}

// G̃(s) = Γ_sF²/Γ³ - F/Γ = -(F²/(2Γ²))_s.
inline double tildeG(const SurfaceProfile& sf, double s) {
    if (std::abs(s) < kSeriesThreshold) return detail::series_tildeG(sf, s);
    const auto pt = surface_eval(sf, s);
    require_off_pole(sf, s, pt);
    return tildeG_direct(pt);
}

inline double tildeG_direct(const SurfaceProfile& sf, double s) { return tildeG_direct(surface_eval(sf, s)); }

// F/Γ, regular at s = 0.
inline double F_over_gamma(const SurfaceProfile& sf, double s) {
    if (std::abs(s) < kSeriesThreshold) return detail::series_F_over_gamma(sf, s);
    const auto pt = surface_eval(sf, s);
    require_off_pole(sf, s, pt);
    return pt.capF / pt.gamma;
}

// F/Γ², the integrand of the rotation angle, regular at s = 0.
inline double F_over_gamma2(const SurfaceProfile& sf, double s) {
    if (std::abs(s) < kSeriesThreshold) return detail::series_F_over_gamma2(sf, s);
    const auto pt = surface_eval(sf, s);
    require_off_pole(sf, s, pt);
    return pt.capF / (pt.gamma * pt.gamma);
}

// (G + c²F²/(2Γ²))_s = G_s - c² G̃: the force term of the reduced profile equation.
inline double potential_slope(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    const double c2 = p.c * p.c;
    if (std::abs(s) < kSeriesThreshold) {
        return capG_s(sf, p, s) - c2 * detail::series_tildeG(sf, s);
    }
    if (sf.compact() && sf.s0 - std::abs(s) < kPoleBand) {
        // Reflected form around ±s0; the function is odd in s.
        const double sign = s < 0.0 ? -1.0 : 1.0;
        const double st = sf.s0 - std::abs(s);
        if (st <= 0.0) throw DomainError("s reached the opposite pole");
        const auto q = pole_eval(sf, st);
        const double f = area_at_pole(sf) - q.capF;
        const SurfacePoint pt{q.gamma, q.gamma_s, f};
        const double gs = pt.gamma * capG_s_over_gamma(pt, p);
        return sign * (gs - c2 * tildeG_direct(pt));
    }
    const auto pt = surface_eval(sf, s);
    require_off_pole(sf, s, pt);
    return pt.gamma * capG_s_over_gamma(pt, p) - c2 * tildeG_direct(pt);
}

// H(s) = -2G + 4μcF + 4μ²Γ².
inline double capH(const SurfaceProfile& sf, const WaveParameters& p, double s) {
    const auto pt = surface_eval(sf, s);
    return -2.0 * capG(sf, p, s) + 4.0 * p.mu * p.c * pt.capF + 4.0 * p.mu * p.mu * pt.gamma * pt.gamma;
}

// H''(0)/2.
inline double capH_curvature(const WaveParameters& p) {
    return -(p.k * p.k + p.b * p.k) + 2.0 * p.mu * p.c + 4.0 * p.mu * p.mu;
}

struct SOneResult {
    double value;      // +inf when no sign change was found
    bool sign_change;  // false: H stays non-negative on the scanned range
};

// First positive zero crossing of H.
inline SOneResult s_one(const SurfaceProfile& sf, const WaveParameters& p) {
    if (!(capH_curvature(p) > 0.0)) throw RegimeError("s_one: H''(0) <= 0");
    const double top = std::min(sf.s0, 50.0);

    std::vector<double> grid;
    grid.reserve(4096);
    const std::size_t n_log = 2048, n_lin = 2048;
    const double lo = top * 1e-6;
    for (std::size_t i = 0; i < n_log; ++i) {
        grid.push_back(lo * std::pow(top / lo, static_cast<double>(i) / static_cast<double>(n_log - 1)));
    }
    for (std::size_t i = 1; i <= n_lin; ++i) {
        grid.push_back(top * static_cast<double>(i) / static_cast<double>(n_lin));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.back() = top;

    double prev_s = grid.front();
    double prev_h = capH(sf, p, prev_s);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double s = grid[i];
        const double h = capH(sf, p, s);
        if (prev_h >= 0.0 && h < 0.0) {
            double a = prev_s, b = s;
            while (b - a > 1e-12 * b) {
                const double m = 0.5 * (a + b);
                if (m == a || m == b) break;
                if (capH(sf, p, m) >= 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            return {0.5 * (a + b), true};
        }
        prev_s = s;
        prev_h = h;
    }
    return {std::numeric_limits<double>::infinity(), false};
}

}  // namespace hyperwave
