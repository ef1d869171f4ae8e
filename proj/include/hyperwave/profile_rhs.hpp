#pragma once

#include <cmath>

#include "hyperwave/errors.hpp"
#include "hyperwave/odeint.hpp"
#include "hyperwave/params.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave {

struct ProfileState {
    double a = 1.0;
    double s = 0.0;
    double s_a = 0.0;
    double sigma = 0.0;
};

// Reduced: (s, s_a) with σ slaved to the first integral aΓσ + cF = 0.
// Full: (s, s_a, σ) evolved independently, used for cross-checks.
enum class Formulation { Reduced, Full };

struct ProfileDerivative {
    double ds = 0.0;
    double ds_a = 0.0;
    double dsigma = 0.0;
};

// σ = -cF/(aΓ).
inline double sigma_from_identity(const SurfaceProfile& sf, const WaveParameters& p, double a, double s) {
    return -p.c * F_over_gamma(sf, s) / a;
}

namespace detail {

// σ Γ_s / Γ with the 0/0 of the trivial solution resolved.
inline double sigma_log_slope(const SurfacePoint& pt, double sigma) {
    if (pt.gamma == 0.0) {
        if (sigma == 0.0) return 0.0;
        throw DomainError("Γ vanishes with nonzero σ");
    }
    return pt.gamma_s * (sigma / pt.gamma);
}

inline double reduced_s_aa(const SurfaceProfile& sf, const WaveParameters& p, double a, double s, double s_a) {
    const double g = surface_eval(sf, s).gamma;
    return -s_a / a + p.mu * g - potential_slope(sf, p, s) / (a * a);
}

inline ProfileDerivative full_derivative(const SurfaceProfile& sf, const WaveParameters& p, double a, double s,
                                         double s_a, double sigma) {
    const auto pt = surface_eval(sf, s);
    const double ls = sigma_log_slope(pt, sigma);
    const double gs = pt.gamma * capG_s_over_gamma(pt, p);
    ProfileDerivative d;
    d.ds = s_a;
    d.ds_a = ls * sigma - s_a / a - gs / (a * a) + p.mu * pt.gamma + p.c * sigma / a;
    d.dsigma = -ls * s_a - sigma / a - p.c * s_a / a;
    return d;
}

}  // namespace detail

inline ProfileDerivative profile_rhs(const SurfaceProfile& sf, const WaveParameters& p, const ProfileState& st,
                                     Formulation form = Formulation::Reduced) {
    if (!(st.a > 0.0)) throw DomainError("profile_rhs: a must be positive");
    if (form == Formulation::Full) return detail::full_derivative(sf, p, st.a, st.s, st.s_a, st.sigma);
    ProfileDerivative d;
    d.ds = st.s_a;
    d.ds_a = detail::reduced_s_aa(sf, p, st.a, st.s, st.s_a);
    const double sigma = sigma_from_identity(sf, p, st.a, st.s);
    d.dsigma = detail::full_derivative(sf, p, st.a, st.s, st.s_a, sigma).dsigma;
    return d;
}

inline Rhs<2> reduced_field(const SurfaceProfile& sf, const WaveParameters& p) {
    return [sf, p](double a, const Vec<2>& y) { return Vec<2>{y[1], detail::reduced_s_aa(sf, p, a, y[0], y[1])}; };
}

inline Rhs<3> full_field(const SurfaceProfile& sf, const WaveParameters& p) {
    return [sf, p](double a, const Vec<3>& y) {
        const auto d = detail::full_derivative(sf, p, a, y[0], y[1], y[2]);
        return Vec<3>{d.ds, d.ds_a, d.dsigma};
    };
}

// E(a) = (a²/2)(s_a² + σ²) + G - μa²F.
inline double energy(const SurfaceProfile& sf, const WaveParameters& p, const ProfileState& st) {
    const double a2 = st.a * st.a;
    const double f = surface_eval(sf, st.s).capF;
    return 0.5 * a2 * (st.s_a * st.s_a + st.sigma * st.sigma) + capG(sf, p, st.s) - p.mu * a2 * f;
}

}  // namespace hyperwave
