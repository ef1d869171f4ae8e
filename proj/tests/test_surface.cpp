#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "hyperwave/surface.hpp"

using namespace hyperwave;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

const mp kPi = boost::math::constants::pi<mp>();

// 50-digit Sphere quantities, written out from the definitions.
mp mp_capF(const mp& s) { return 2 * sin(s / 2) * sin(s / 2); }
mp mp_capG(const WaveParameters& p, const mp& s) {
    const mp g = sin(s), f = mp_capF(s);
    return mp(p.k * p.k) / 2 * g * g + mp(p.b * p.k) * f - mp(p.k * p.k) * f * f;
}
mp mp_capH(const WaveParameters& p, const mp& s) {
    const mp g = sin(s);
    return -2 * mp_capG(p, s) + 4 * mp(p.mu) * mp(p.c) * mp_capF(s) + 4 * mp(p.mu) * mp(p.mu) * g * g;
}
mp mp_tildeG(const mp& s) {
    const mp g = sin(s), gs = cos(s), f = mp_capF(s);
    return gs * f * f / (g * g * g) - f / g;
}

const WaveParameters kSelfSim{3.0, 1.0, -1.0, -3.0};

}  // namespace

TEST(SurfaceEval, SphereEquator) {
    const auto pt = surface_eval(SurfaceProfile::sphere(), std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(pt.gamma, 1.0);
    EXPECT_NEAR(pt.gamma_s, 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(pt.capF, 1.0);
}

TEST(SurfaceEval, SphereOppositePole) {
    const auto pt = surface_eval(SurfaceProfile::sphere(), std::numbers::pi);
    EXPECT_NEAR(pt.gamma, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(pt.gamma_s, -1.0);
    EXPECT_DOUBLE_EQ(pt.capF, 2.0);
    EXPECT_DOUBLE_EQ(area_at_pole(SurfaceProfile::sphere()), 2.0);
}

TEST(SurfaceEval, PseudoSphereOrigin) {
    const auto pt = surface_eval(SurfaceProfile::pseudo_sphere(), 0.0);
    EXPECT_EQ(pt.gamma, 0.0);
    EXPECT_EQ(pt.gamma_s, 1.0);
    EXPECT_EQ(pt.capF, 0.0);
    EXPECT_FALSE(SurfaceProfile::pseudo_sphere().compact());
    EXPECT_THROW(area_at_pole(SurfaceProfile::pseudo_sphere()), DomainError);
}

TEST(SurfaceEval, CurvatureAtOrigin) {
    EXPECT_EQ(SurfaceProfile::sphere().gamma3_at_0, -1.0);
    EXPECT_EQ(SurfaceProfile::pseudo_sphere().gamma3_at_0, 1.0);
}

TEST(CapG, EquatorValue) {
    const WaveParameters p{0.0, 1.0, 1.0, -3.0};
    const double oracle = static_cast<double>(mp_capG(p, kPi / 2));
    EXPECT_NEAR(oracle, -3.5, 1e-15);
    EXPECT_NEAR(capG(SurfaceProfile::sphere(), p, std::numbers::pi / 2), oracle, 1e-14);
}

TEST(CapG, PoleValue) {
    const WaveParameters p{0.0, 1.0, 1.0, -3.0};
    const double oracle = static_cast<double>(mp_capG(p, kPi));
    EXPECT_NEAR(oracle, -10.0, 1e-15);
    EXPECT_NEAR(capG(SurfaceProfile::sphere(), p, std::numbers::pi), oracle, 1e-13);
}

TEST(CapG, VanishesAtOrigin) {
    for (const auto& sf : {SurfaceProfile::sphere(), SurfaceProfile::pseudo_sphere()}) {
        EXPECT_EQ(capG(sf, {2.0, 1.5, -0.3, -4.0}, 0.0), 0.0);
        EXPECT_EQ(capG(sf, {-1.0, 1.0, 1.0, -3.0}, 0.0), 0.0);
    }
}

TEST(CapG, SmallArgumentTaylor) {
    const WaveParameters p{0.0, 1.0, 1.0, -3.0};
    const double s = 3e-5;
    const double expected = static_cast<double>(mp_capG(p, mp(s)));
    EXPECT_NEAR(capG(SurfaceProfile::sphere(), p, s) / expected, 1.0, 1e-13);
    EXPECT_NEAR(expected / (0.5 * (1.0 - 3.0) * s * s), 1.0, 1e-4);
}

TEST(TildeG, RemovableSingularity) {
    EXPECT_EQ(tildeG(SurfaceProfile::sphere(), 0.0), 0.0);
    EXPECT_NEAR(tildeG(SurfaceProfile::sphere(), 1e-6), -2.5e-7, 1e-13);
}

TEST(TildeG, EquatorValue) {
    const double oracle = static_cast<double>(mp_tildeG(kPi / 2));
    EXPECT_NEAR(oracle, -1.0, 1e-15);
    EXPECT_NEAR(tildeG(SurfaceProfile::sphere(), std::numbers::pi / 2), oracle, 1e-14);
}

TEST(TildeG, PoleIsDomainError) {
    EXPECT_THROW(tildeG(SurfaceProfile::sphere(), std::numbers::pi), DomainError);
}

TEST(TildeG, MatchesOracleOnGrid) {
    const auto sf = SurfaceProfile::sphere();
    for (double s : {1e-3, 0.01, 0.3, 1.0, 2.0, 2.9}) {
        const double oracle = static_cast<double>(mp_tildeG(mp(s)));
        EXPECT_NEAR(tildeG(sf, s), oracle, 1e-13 * (1.0 + std::abs(oracle))) << s;
    }
}

TEST(CapH, VanishesAtOrigin) {
    EXPECT_EQ(capH(SurfaceProfile::sphere(), kSelfSim, 0.0), 0.0);
    EXPECT_EQ(capH(SurfaceProfile::pseudo_sphere(), {-2.0, 1.0, 0.5, -4.0}, 0.0), 0.0);
}

TEST(CapH, OppositePoleValue) {
    const double oracle = static_cast<double>(mp_capH(kSelfSim, kPi));
    EXPECT_NEAR(oracle, -4.0, 1e-15);
    EXPECT_NEAR(capH(SurfaceProfile::sphere(), kSelfSim, std::numbers::pi), oracle, 1e-13);
}

TEST(CapH, QuadraticCoefficientAtOrigin) {
    // H(s)/s² at s = 1e-20 in 50-digit arithmetic is H''(0)/2 to ~1e-40.
    const mp s("1e-20");
    const double oracle = static_cast<double>(mp_capH(kSelfSim, s) / (s * s));
    EXPECT_NEAR(oracle, 32.0, 1e-12);
    EXPECT_DOUBLE_EQ(capH_curvature(kSelfSim), oracle);
    const double s_small = 1e-5;
    EXPECT_NEAR(capH(SurfaceProfile::sphere(), kSelfSim, s_small) / (s_small * s_small), 32.0, 1e-6);
}

TEST(CapH, SingleCodePathIdentity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& sf : {SurfaceProfile::sphere(), SurfaceProfile::pseudo_sphere()}) {
        for (int i = 0; i < 200; ++i) {
            const WaveParameters p{u(rng), u(rng), u(rng), u(rng)};
            const double s = 0.5 * u(rng);
            const auto pt = surface_eval(sf, s);
            const double direct = -2.0 * capG(sf, p, s) + 4.0 * p.mu * p.c * pt.capF + 4.0 * p.mu * p.mu * pt.gamma * pt.gamma;
            EXPECT_EQ(capH(sf, p, s), direct);
        }
    }
}

TEST(SOne, SphereRootBeforePole) {
    const auto r = s_one(SurfaceProfile::sphere(), kSelfSim);
    ASSERT_TRUE(r.sign_change);
    EXPECT_GT(r.value, 0.0);
    EXPECT_LT(r.value, std::numbers::pi);
    EXPECT_LT(std::abs(capH(SurfaceProfile::sphere(), kSelfSim, r.value)), 1e-10);

    // Independent 50-digit bisection on the same bracket.
    mp lo = 1, hi = kPi;
    for (int i = 0; i < 200; ++i) {
        const mp m = (lo + hi) / 2;
        (mp_capH(kSelfSim, m) > 0 ? lo : hi) = m;
    }
    const double oracle = static_cast<double>(lo);
    EXPECT_NEAR(oracle, 2.7916545622584155, 1e-15);
    EXPECT_NEAR(r.value, oracle, 1e-11);
}

TEST(SOne, PseudoSphereWithoutRoot) {
    const WaveParameters p{3.0, 1.0, 1.0, -3.0};
    const auto sf = SurfaceProfile::pseudo_sphere();
    for (int i = 1; i <= 500; ++i) EXPECT_GT(capH(sf, p, 0.1 * i), 0.0);
    const auto r = s_one(sf, p);
    EXPECT_FALSE(r.sign_change);
    EXPECT_TRUE(std::isinf(r.value));
}

TEST(SOne, SphereWithoutSignChange) {
    const WaveParameters p{3.0, 1.0, 1.0, -3.0};
    const auto sf = SurfaceProfile::sphere();
    for (int i = 1; i <= 1000; ++i) EXPECT_GT(capH(sf, p, std::numbers::pi * i / 1000.0), 0.0);
    EXPECT_NEAR(capH(sf, p, std::numbers::pi), 44.0, 1e-12);
    const auto r = s_one(sf, p);
    EXPECT_FALSE(r.sign_change);
    EXPECT_TRUE(std::isinf(r.value));
}

TEST(SOne, NonPositiveCurvatureIsRegimeError) {
    const WaveParameters p{1.0, 1.0, -10.0, -3.0};
    EXPECT_LE(capH_curvature(p), 0.0);
    EXPECT_THROW(s_one(SurfaceProfile::sphere(), p), RegimeError);
}

TEST(SurfaceProperty, GammaIsOdd) {
    std::mt19937_64 rng(1);
    for (const auto& [sf, range] : {std::pair{SurfaceProfile::sphere(), std::numbers::pi}, std::pair{SurfaceProfile::pseudo_sphere(), 20.0}}) {
        std::uniform_real_distribution<double> u(-range, range);
        for (int i = 0; i < 1000; ++i) {
            const double s = u(rng);
            const double g = surface_eval(sf, s).gamma;
            EXPECT_LE(std::abs(surface_eval(sf, -s).gamma + g), 1e-14 * (1.0 + std::abs(g)));
        }
    }
}

TEST(SurfaceProperty, SpherePeriodicity) {
    const auto sf = SurfaceProfile::sphere();
    for (double s : {0.1, 1.0, 2.5}) {
        EXPECT_NEAR(surface_eval(sf, s + 2.0 * std::numbers::pi).gamma, surface_eval(sf, s).gamma, 1e-14);
    }
}

TEST(SurfaceProperty, AreaDerivativeIsGamma) {
    for (const auto& sf : {SurfaceProfile::sphere(), SurfaceProfile::pseudo_sphere()}) {
        for (double s = 1e-3; s < 3.0; s *= 1.5) {
            const double h = 1e-5 * s;
            const double fd = (surface_eval(sf, s + h).capF - surface_eval(sf, s - h).capF) / (2.0 * h);
            const double g = surface_eval(sf, s).gamma;
            EXPECT_NEAR(fd / g, 1.0, 1e-8) << s;
        }
    }
}

TEST(SurfaceProperty, AreaIncreasingOnHalfPeriod) {
    const auto sf = SurfaceProfile::sphere();
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double s = std::numbers::pi * i / 1000.0;
        const auto pt = surface_eval(sf, s);
        if (i < 1000) EXPECT_GT(pt.gamma, 0.0);
        EXPECT_GT(pt.capF, prev);
        prev = pt.capF;
    }
}

TEST(SurfaceProperty, SeriesMatchesDirectAtThreshold) {
    const WaveParameters p{-1.0, 1.0, 1.0, -3.0};
    for (const auto& sf : {SurfaceProfile::sphere(), SurfaceProfile::pseudo_sphere()}) {
        for (double s : {kSeriesThreshold, -kSeriesThreshold}) {
            const double ts = detail::series_tildeG(sf, s), td = tildeG_direct(sf, s);
            EXPECT_NEAR(ts, td, 1e-12 * std::abs(td));
            const double gs = detail::series_capG(sf, p, s), gd = capG_direct(sf, p, s);
            EXPECT_NEAR(gs, gd, 1e-12 * std::abs(gd));
        }
    }
}

TEST(SurfaceProperty, RegularizedRatiosNearOrigin) {
    const auto sf = SurfaceProfile::sphere();
    for (double s : {1e-8, 5e-5, 2e-4, 0.5}) {
        const mp m(s);
        EXPECT_NEAR(F_over_gamma(sf, s), static_cast<double>(mp_capF(m) / sin(m)), 1e-15 * (1.0 + s));
        EXPECT_NEAR(F_over_gamma2(sf, s), static_cast<double>(mp_capF(m) / (sin(m) * sin(m))), 1e-14);
    }
}

TEST(CustomSurface, ReproducesSphere) {
    const auto custom = SurfaceProfile::custom([](double s) { return std::sin(s); }, [](double s) { return std::cos(s); },
                                               -1.0, std::numbers::pi);
    const auto sphere = SurfaceProfile::sphere();
    for (double s : {0.0, 0.2, 1.0, 2.0, 3.0, std::numbers::pi, -1.3, 4.0}) {
        EXPECT_NEAR(surface_eval(custom, s).capF, surface_eval(sphere, s).capF, 1e-12) << s;
    }
    const WaveParameters p{-1.0, 1.0, 1.0, -3.0};
    for (double s : {1e-6, 1e-3, 0.7, 2.4}) {
        EXPECT_NEAR(tildeG(custom, s), tildeG(sphere, s), 1e-11 * (1.0 + std::abs(tildeG(sphere, s))));
        EXPECT_NEAR(potential_slope(custom, p, s), potential_slope(sphere, p, s), 1e-10 * (1.0 + std::abs(potential_slope(sphere, p, s))));
    }
    EXPECT_NEAR(area_at_pole(custom), 2.0, 1e-12);
}

TEST(CustomSurface, RejectsNonPositiveDiameter) {
    EXPECT_THROW(SurfaceProfile::custom([](double s) { return s; }, [](double) { return 1.0; }, 0.0, 0.0),
                 std::invalid_argument);
}
