#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hyperwave/errors.hpp"
#include "hyperwave/params.hpp"

namespace hyperwave {

enum class RegimeCase { CaseI, CaseII, CaseIII, Degenerate_b_eq_minus_k, Positive_k2_bk };

inline const char* to_string(RegimeCase c) {
    switch (c) {
        case RegimeCase::CaseI: return "CaseI";
        case RegimeCase::CaseII: return "CaseII";
        case RegimeCase::CaseIII: return "CaseIII";
        case RegimeCase::Degenerate_b_eq_minus_k: return "Degenerate_b_eq_minus_k";
        case RegimeCase::Positive_k2_bk: return "Positive_k2_bk";
    }
    return "?";
}

struct RegimeReport {
    RegimeCase regime = RegimeCase::Degenerate_b_eq_minus_k;
    double kappa = 0.0;
    std::optional<double> r0;
    std::optional<double> cos_gamma_plus;
    std::optional<std::array<double, 4>> jacobian_eigenvalues;
    std::optional<double> monodromy_lambda;
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

// Jacobian of the log-time system in (s, r, γ, a) at the fixed point
// (0, r0, γ+, 0). Partials are written out from the vector field with
// Γ(0) = 0, Γ_s(0) = 1, Γ_ss(0) = 0, F(0) = 0.
inline Matrix4 fixed_point_jacobian(const WaveParameters& p) {
    const double m = -(p.k * p.k + p.b * p.k);
    const double r0 = std::sqrt(m);
    const double sin_g = -p.c / (2.0 * r0);
    const double cos_g = std::sqrt(1.0 - sin_g * sin_g);
    const double gs_over_g0 = -m;  // k²Γ_s + bk - 2k²F at s = 0

    Matrix4 j{};
    // s' = rΓ cos γ
    j[0][0] = r0 * cos_g;
    // r' = (-Γ_s r² - G_s/Γ + μa²) cos γ
    j[1][1] = -2.0 * r0 * cos_g;
    j[1][2] = -(-r0 * r0 - gs_over_g0) * sin_g;
    // γ' = (-Γ_s r + (G_s/Γ)/r - μa²/r) sin γ - c
    j[2][1] = (-1.0 - gs_over_g0 / (r0 * r0)) * sin_g;
    j[2][2] = (-r0 + gs_over_g0 / r0) * cos_g;
    // a' = a
    j[3][3] = 1.0;
    return j;
}

// Closed form of exp(-∫₀^{2π} dγ / (2 r0 sin γ + c)).
inline double monodromy_closed_form(const WaveParameters& p) {
    const double disc = p.c * p.c + 4.0 * (p.k * p.k + p.b * p.k);
    return std::exp(-2.0 * std::numbers::pi * (p.c > 0 ? 1.0 : -1.0) / std::sqrt(disc));
}

inline RegimeReport classify(const WaveParameters& p);

// Multiplier of the period map of the invariant circle r = r0 (Case III).
inline double monodromy_lambda(const WaveParameters& p) {
    const double m = -(p.k * p.k + p.b * p.k);
    if (!(m > 0.0)) throw RegimeError("monodromy: k^2 + bk must be negative");
    const double r0 = std::sqrt(m);
    if (std::abs(p.c) <= 2.0 * r0) throw RegimeError("monodromy: |c| <= 2 r0, integrand has a pole");
    auto f = [&](double g) { return 1.0 / (2.0 * r0 * std::sin(g) + p.c); };
    double err = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0 * std::numbers::pi, 20, 1e-15, &err);
    return std::exp(-integral);
}

inline RegimeReport classify(const WaveParameters& p) {
    RegimeReport rep;
    const double q = p.k * p.k + p.b * p.k;
    if (q == 0.0) {
        rep.regime = RegimeCase::Degenerate_b_eq_minus_k;
        return rep;
    }
    if (q > 0.0) {
        rep.regime = RegimeCase::Positive_k2_bk;
        return rep;
    }
    const double c2 = p.c * p.c;
    const double disc = -4.0 * q - c2;
    // Equality up to rounding of c² (c = √8 gives c² = 8 + 2 ulp).
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(c2, -4.0 * q);
    rep.r0 = std::sqrt(-q);
    if (std::abs(disc) <= tol) {
        rep.regime = RegimeCase::CaseII;
        rep.cos_gamma_plus = 0.0;
        return rep;
    }
    if (disc < 0.0) {
        rep.regime = RegimeCase::CaseIII;
        rep.monodromy_lambda = monodromy_lambda(p);
        return rep;
    }
    rep.regime = RegimeCase::CaseI;
    rep.kappa = std::sqrt(-q - 0.25 * c2);
    rep.cos_gamma_plus = std::sqrt(1.0 + c2 / (4.0 * q));
    const Matrix4 j = fixed_point_jacobian(p);
    // The Jacobian is upper triangular at the fixed point, so its spectrum is its diagonal.
    rep.jacobian_eigenvalues = std::array<double, 4>{j[0][0], j[1][1], j[2][2], j[3][3]};
    return rep;
}

// Parameters of the same profile read in the vertical cones.
inline WaveParameters vertical_params(const WaveParameters& p) { return {-p.mu, p.k, p.c, p.b}; }

inline RegimeReport require_case_one(const WaveParameters& p) {
    RegimeReport rep = classify(p);
    if (rep.regime != RegimeCase::CaseI) {
        throw RegimeError(std::string("parameters are in regime ") + to_string(rep.regime) + ", CaseI required");
    }
    if (p.k == 0.0 || p.c == 0.0) throw RegimeError("equivariant solver needs k != 0 and c != 0");
    return rep;
}

}  // namespace hyperwave
