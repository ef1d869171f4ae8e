#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "hyperwave/regimes.hpp"

using namespace hyperwave;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

const WaveParameters kRef{-1.0, 1.0, 1.0, -3.0};

std::array<double, 4> sorted(std::array<double, 4> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Spectrum of the reported Jacobian computed by a general eigen solver.
std::array<double, 4> numeric_spectrum(const WaveParameters& p) {
    const Matrix4 j = fixed_point_jacobian(p);
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = j[r][c];
    const Eigen::Vector4cd ev = m.eigenvalues();
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(ev[i].imag(), 0.0, 1e-12);
        out[i] = ev[i].real();
    }
    return sorted(out);
}

}  // namespace

TEST(Classify, ReferenceCaseOneClosedForms) {
    const auto rep = classify(kRef);
    ASSERT_EQ(rep.regime, RegimeCase::CaseI);
    const double kappa = static_cast<double>(sqrt(mp("1.75")));
    const double r0 = static_cast<double>(sqrt(mp(2)));
    const double cg = static_cast<double>(sqrt(mp(7) / 8));
    EXPECT_NEAR(kappa, 1.3228756555322954, 1e-16);
    EXPECT_NEAR(rep.kappa, kappa, 1e-14);
    EXPECT_NEAR(*rep.r0, r0, 1e-14);
    EXPECT_NEAR(*rep.cos_gamma_plus, cg, 1e-14);
    const auto ev = sorted(*rep.jacobian_eigenvalues);
    const std::array<double, 4> want = sorted({kappa, -2.0 * kappa, -2.0 * kappa, 1.0});
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], want[i], 1e-14);
    EXPECT_FALSE(rep.monodromy_lambda.has_value());
}

TEST(Classify, CaseTwoOnBoundary) {
    const auto rep = classify({1.0, 1.0, std::sqrt(8.0), -3.0});
    EXPECT_EQ(rep.regime, RegimeCase::CaseII);
    EXPECT_EQ(rep.kappa, 0.0);
}

TEST(Classify, CaseThreeMonodromy) {
    const auto rep = classify({1.0, 1.0, -3.0, -3.0});
    ASSERT_EQ(rep.regime, RegimeCase::CaseIII);
    ASSERT_TRUE(rep.monodromy_lambda.has_value());
    const double oracle = static_cast<double>(exp(2 * boost::math::constants::pi<mp>()));
    EXPECT_NEAR(oracle, 535.4916555247646, 1e-12);
    EXPECT_NEAR(*rep.monodromy_lambda / oracle, 1.0, 1e-10);
}

TEST(Monodromy, PositiveCouplingContracts) {
    const double lambda = monodromy_lambda({1.0, 1.0, 3.0, -3.0});
    const double oracle = static_cast<double>(exp(-2 * boost::math::constants::pi<mp>()));
    EXPECT_NEAR(oracle, 0.0018674427317079893, 1e-18);
    EXPECT_NEAR(lambda / oracle, 1.0, 1e-10);
    EXPECT_LT(lambda, 1.0);
}

TEST(Monodromy, NearBoundaryCaseThree) {
    // c² - 4r0² = 0.41
    const double lambda = monodromy_lambda({1.0, 1.0, -2.9, -3.0});
    EXPECT_NEAR(lambda / std::exp(2.0 * std::numbers::pi / std::sqrt(0.41)), 1.0, 1e-10);
}

TEST(Monodromy, OutsideCaseThreeIsRegimeError) {
    EXPECT_EQ(classify({1.0, 1.0, -2.8, -3.0}).regime, RegimeCase::CaseI);
    EXPECT_THROW(monodromy_lambda({1.0, 1.0, -2.8, -3.0}), RegimeError);
    EXPECT_THROW(monodromy_lambda({1.0, 1.0, -2.8, 1.0}), RegimeError);
}

TEST(Classify, DegenerateAndPositive) {
    EXPECT_EQ(classify({1.0, 2.0, 1.0, -2.0}).regime, RegimeCase::Degenerate_b_eq_minus_k);
    EXPECT_EQ(classify({1.0, 0.0, 1.0, -3.0}).regime, RegimeCase::Degenerate_b_eq_minus_k);
    EXPECT_EQ(classify({1.0, 1.0, 1.0, 1.0}).regime, RegimeCase::Positive_k2_bk);
}

TEST(RequireCaseOne, RejectsOtherRegimesAndZeroCoupling) {
    EXPECT_NO_THROW(require_case_one(kRef));
    EXPECT_THROW(require_case_one({1.0, 1.0, -3.0, -3.0}), RegimeError);
    EXPECT_THROW(require_case_one({1.0, 1.0, 1.0, 1.0}), RegimeError);
    EXPECT_THROW(require_case_one({1.0, 1.0, 0.0, -3.0}), RegimeError);
}

TEST(VerticalParams, FlipsOnlyMu) {
    const auto v = vertical_params(kRef);
    EXPECT_EQ(v.mu, 1.0);
    EXPECT_EQ(v.k, 1.0);
    EXPECT_EQ(v.c, 1.0);
    EXPECT_EQ(v.b, -3.0);
}

TEST(RegimeProperty, EigenvaluePatternOnRandomCaseOne) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uk(0.2, 3.0), ub(1.2, 6.0), uf(0.0, 0.95), um(-4.0, 4.0), sign(-1.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const double k = uk(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
        const double b = -k * ub(rng);  // k² + bk = k²(1 - ub) < 0
        const double q = -(k * k + b * k);
        const double c = (sign(rng) < 0 ? -1.0 : 1.0) * uf(rng) * 2.0 * std::sqrt(q);
        const WaveParameters p{um(rng), k, c, b};
        const auto rep = classify(p);
        ASSERT_EQ(rep.regime, RegimeCase::CaseI);
        const mp kappa = sqrt(mp(q) - mp(c) * mp(c) / 4);
        const double kd = static_cast<double>(kappa);
        EXPECT_NEAR(rep.kappa, kd, 1e-14 * (1.0 + kd));
        const std::array<double, 4> want = sorted({kd, -2.0 * kd, -2.0 * kd, 1.0});
        const auto got = sorted(*rep.jacobian_eigenvalues);
        const auto num = numeric_spectrum(p);
        for (int i = 0; i < 4; ++i) {
            EXPECT_NEAR(got[i], want[i], 1e-14 * (1.0 + std::abs(want[i])));
            EXPECT_NEAR(num[i], want[i], 1e-12 * (1.0 + std::abs(want[i])));
        }
        ++checked;
    }
}

TEST(RegimeProperty, MonodromyQuadratureMatchesClosedForm) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uk(0.3, 2.0), ub(1.5, 4.0), uc(1.05, 3.0), sign(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double k = uk(rng);
        const double b = -k * ub(rng);
        const double r0 = std::sqrt(-(k * k + b * k));
        const double c = (sign(rng) < 0 ? -1.0 : 1.0) * uc(rng) * 2.0 * r0;
        const WaveParameters p{1.0, k, c, b};
        ASSERT_EQ(classify(p).regime, RegimeCase::CaseIII);
        const mp disc = mp(c) * mp(c) - 4 * mp(r0) * mp(r0);
        const double oracle = static_cast<double>(exp(2 * boost::math::constants::pi<mp>() * (c < 0 ? 1 : -1) / sqrt(disc)));
        EXPECT_NEAR(monodromy_lambda(p) / oracle, 1.0, 1e-10) << k << ' ' << b << ' ' << c;
        EXPECT_EQ(monodromy_lambda(p) > 1.0, c < 0.0);
    }
}

TEST(RegimeProperty, VerticalParamsInvolutionAndKappaInvariance) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const WaveParameters p{u(rng), u(rng), u(rng), u(rng)};
        const auto w = vertical_params(vertical_params(p));
        EXPECT_EQ(w.mu, p.mu);
        EXPECT_EQ(w.k, p.k);
        EXPECT_EQ(w.c, p.c);
        EXPECT_EQ(w.b, p.b);
        const auto a = classify(p), b = classify(vertical_params(p));
        EXPECT_EQ(a.regime, b.regime);
        EXPECT_EQ(a.kappa, b.kappa);
    }
}
