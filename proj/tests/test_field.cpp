#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hyperwave/field.hpp"

using namespace hyperwave;

namespace {

const SurfaceProfile kSphere = SurfaceProfile::sphere();
const WaveParameters kRef{-1.0, 1.0, 1.0, -3.0};

const FieldSampler& reference_sampler() {
    static const FieldSampler fs = make_field_sampler(kSphere, kRef, {}, 40.0);
    return fs;
}

// (u1, u2) rotated by angle; u0 is fixed.
std::array<double, 3> rotate(const std::array<double, 3>& u, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {u[0], c * u[1] - s * u[2], s * u[1] + c * u[2]};
}

double dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST(HyperbolicCoords, Examples) {
    auto hc = hyperbolic_coords(5.0, 3.0);
    EXPECT_DOUBLE_EQ(hc.a, 4.0);
    EXPECT_DOUBLE_EQ(hc.alpha, std::log(2.0));
    EXPECT_EQ(hc.cone, Cone::HPlus);
    hc = hyperbolic_coords(-5.0, 3.0);
    EXPECT_DOUBLE_EQ(hc.a, 4.0);
    EXPECT_DOUBLE_EQ(hc.alpha, -std::log(2.0));
    EXPECT_EQ(hc.cone, Cone::HMinus);
    hc = hyperbolic_coords(3.0, 5.0);
    EXPECT_DOUBLE_EQ(hc.a, 4.0);
    EXPECT_DOUBLE_EQ(hc.alpha, std::log(2.0));
    EXPECT_EQ(hc.cone, Cone::VPlus);
    EXPECT_EQ(hyperbolic_coords(3.0, -5.0).cone, Cone::VMinus);
    EXPECT_EQ(hyperbolic_coords(2.0, 2.0).cone, Cone::Cross);
    EXPECT_EQ(hyperbolic_coords(-1.5, 1.5).cone, Cone::Cross);
}

TEST(HyperbolicCoords, RoundTripInHorizontalCone) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ua(0.01, 20.0), ual(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double a = ua(rng), al = ual(rng);
        const auto hc = hyperbolic_coords(a * std::cosh(al), a * std::sinh(al));
        EXPECT_EQ(hc.cone, Cone::HPlus);
        EXPECT_NEAR(hc.a / a, 1.0, 1e-12);
        EXPECT_NEAR(hc.alpha, al, 1e-12);
    }
}

TEST(Field, CrossNodesAreSingular) {
    const auto& fs = reference_sampler();
    for (double x : {-3.0, -0.5, 0.0, 0.25, 7.0}) {
        for (double y : {x, -x}) {
            const auto n = fs.node(0.3, x, y);
            EXPECT_EQ(n.cone, Cone::Cross);
            EXPECT_EQ(n.u, (std::array<double, 3>{1.0, 0.0, 0.0}));
            EXPECT_TRUE(std::isnan(n.phi));
            EXPECT_TRUE(n.log_singular);
        }
    }
}

TEST(Field, UnitNorm) {
    const auto& fs = reference_sampler();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const auto n = fs.node(0.7, u(rng), u(rng));
        EXPECT_NEAR(detail::norm3(n.u), 1.0, 1e-14);
    }
}

TEST(Field, HyperbolaMapsToCircle) {
    // Fixed a: u0 is constant and (u1, u2) turns by kΔα.
    const auto& fs = reference_sampler();
    const double a = 2.5;
    const auto ref = fs.node(0.0, a, 0.0);
    for (double al : {-1.0, -0.3, 0.4, 1.2}) {
        const auto n = fs.node(0.0, a * std::cosh(al), a * std::sinh(al));
        EXPECT_NEAR(n.u[0], ref.u[0], 1e-13);
        EXPECT_LT(dist(n.u, rotate(ref.u, kRef.k * al)), 1e-12);
    }
}

TEST(Field, PhaseFunctionSmallRadiusLaw) {
    const auto tr = solve_profile(kSphere, kRef, {}, 10.0);
    const auto psi = psi_profile(tr);
    const double kappa = tr.kappa();
    const double want = -kRef.k * 0.1 * 0.1 / (2.0 * kappa);
    EXPECT_NEAR(want, -0.0037796447300922722, 1e-15);
    for (double a : {1e-8, 1e-6, 1e-4}) {
        EXPECT_NEAR(psi.phi3(a) / std::pow(a, 2.0 * kappa), want, 1e-4 * std::abs(want)) << a;
        EXPECT_NEAR(psi(a) - kRef.b * std::log(a), psi.phi3(a), 1e-15);
    }
    // φ3' = -(2k/a)F(s).
    for (double a : {0.5, 2.0, 6.0}) {
        const double h = 1e-5;
        const double d = (psi.phi3(a + h) - psi.phi3(a - h)) / (2.0 * h);
        const double want_d = -psi_integrand(kSphere, kRef, a, tr.state(a).s);
        EXPECT_NEAR(d / want_d, 1.0, 1e-7) << a;
    }
}

TEST(FieldProperty, BoostEquivariance) {
    const auto& fs = reference_sampler();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(-6.0, 6.0), ud(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = uc(rng), eta = uc(rng), d = ud(rng);
        const auto n = fs.node_characteristic(0.4, xi, eta);
        const auto m = fs.node_characteristic(0.4, std::exp(d) * xi, std::exp(-d) * eta);
        EXPECT_EQ(m.cone, n.cone);
        EXPECT_LT(dist(m.u, rotate(n.u, kRef.k * d)), 1e-12);
        EXPECT_NEAR(m.phi - n.phi, kRef.c * d, 1e-11);
    }
}

TEST(FieldProperty, TimeEquivariance) {
    const auto& fs = reference_sampler();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uc(-15.0, 15.0), ut(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double x = uc(rng), y = uc(rng), t1 = ut(rng), t2 = ut(rng);
        const auto a = fs.node(t1, x, y), b = fs.node(t2, x, y);
        EXPECT_LT(dist(b.u, rotate(a.u, kRef.mu * (t2 - t1))), 1e-13);
        EXPECT_EQ(a.phi, b.phi);
    }
}

TEST(FieldProperty, SelfSimilarScaling) {
    const WaveParameters p{3.0, 1.0, -1.0, -3.0};
    const auto fs = make_field_sampler(kSphere, p, {}, 60.0, true);
    EXPECT_TRUE(fs.selfsimilar());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uc(-4.0, 4.0), ul(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double x = uc(rng), y = uc(rng), lam = ul(rng);
        const auto a = fs.node(0.5, x, y), b = fs.node(0.5 * lam * lam, lam * x, lam * y);
        EXPECT_LT(dist(b.u, rotate(a.u, 2.0 * p.mu * std::log(lam))), 1e-10);
    }
    EXPECT_THROW(fs.node(0.0, 1.0, 0.5), DomainError);
}

TEST(FieldProperty, HolderContinuityAtCross) {
    // |u - e0| ~ |ξη|^(κ/2) along a fixed ξ.
    const WaveParameters p{-1.0, 1.0, 1.0, -2.0};
    const double kappa = classify(p).kappa;
    EXPECT_NEAR(kappa, std::sqrt(0.75), 1e-14);
    const auto fs = make_field_sampler(kSphere, p, {}, 10.0);
    std::vector<double> lx, ly;
    for (int j = 10; j <= 30; ++j) {
        const double eta = std::ldexp(1.0, -j);
        const auto n = fs.node_characteristic(0.0, 1.0, eta);
        lx.push_back(std::log(eta));
        ly.push_back(std::log(dist(n.u, {1.0, 0.0, 0.0})));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / lx.size();
        my += ly[i] / ly.size();
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    EXPECT_NEAR(sxy / sxx, 0.5 * kappa, 0.01 * kappa);
}

TEST(Compatibility, ReferenceField) {
    const auto rep = compatibility_report(reference_sampler(), 0.3);
    EXPECT_EQ(rep.overall, Verdict::Pass);
    EXPECT_EQ(rep.verdict_continuity, Verdict::Pass);
    EXPECT_EQ(rep.verdict_zero_sum, Verdict::Pass);
    EXPECT_EQ(rep.verdict_vanishing, Verdict::Pass);
    EXPECT_EQ(rep.verdict_regularity, Verdict::Pass);
    // φ = cα + b log a + φ3 with α, log a in terms of log|ξ|, log|η|.
    EXPECT_NEAR(rep.phi1_plus, 0.5 * (kRef.b - kRef.c), 1e-6);
    EXPECT_NEAR(rep.phi1_minus, 0.5 * (kRef.b - kRef.c), 1e-6);
    EXPECT_NEAR(rep.phi2_plus, 0.5 * (kRef.b + kRef.c), 1e-6);
    EXPECT_NEAR(rep.phi2_minus, 0.5 * (kRef.b + kRef.c), 1e-6);
    EXPECT_GE(rep.u_xi_decay_exponent, 0.5 * reference_sampler().kappa() - 0.05);
}

TEST(Compatibility, TrivialField) {
    const auto fs = make_field_sampler(kSphere, kRef, {0.0, 1e-6, 1e-8}, 10.0);
    const auto n = fs.node(0.2, 3.0, 1.0);
    EXPECT_EQ(n.u, (std::array<double, 3>{1.0, 0.0, 0.0}));
    const auto hc = hyperbolic_coords(3.0, 1.0);
    EXPECT_NEAR(n.phi, kRef.c * hc.alpha + kRef.b * std::log(hc.a), 1e-14);
    const auto rep = compatibility_report(fs, 0.2);
    EXPECT_EQ(rep.overall, Verdict::Pass);
    EXPECT_EQ(rep.zero_sum, 0.0);
}

TEST(Field, VerticalConeUsesDualParameters) {
    const auto& fs = reference_sampler();
    const auto dual = solve_profile(kSphere, vertical_params(kRef), {}, 40.0);
    const auto& v = fs.profile(Cone::VPlus);
    for (double a : {1e-3, 0.5, 3.0, 20.0}) EXPECT_EQ(v.s(a), dual.state(a).s);
    // Points mirrored across the diagonal see the same radial profile, shifted cone.
    const auto h = fs.node(0.0, 5.0, 3.0), w = fs.node(0.0, 3.0, 5.0);
    EXPECT_EQ(h.cone, Cone::HPlus);
    EXPECT_EQ(w.cone, Cone::VPlus);
    EXPECT_DOUBLE_EQ(w.u[0], surface_eval(kSphere, dual.state(4.0).s).gamma_s);
}

TEST(Field, NonCompactTargetUsesTrivialUnstableCone) {
    const auto fs = make_field_sampler(SurfaceProfile::pseudo_sphere(), kRef, {}, 20.0);
    EXPECT_FALSE(fs.profile(Cone::HPlus).is_trivial());
    EXPECT_TRUE(fs.profile(Cone::VPlus).is_trivial());
}

TEST(Field, BeyondSolvedRangeIsDomainError) {
    EXPECT_THROW(reference_sampler().node(0.0, 100.0, 1.0), DomainError);
}

TEST(FieldGrid, ParallelMatchesSequential) {
    GridSpec g;
    g.nx = 41;
    g.ny = 37;
    g.xmin = g.ymin = -8.0;
    g.xmax = g.ymax = 8.0;
    g.refine_levels = 3;
    const auto a = sample_field(reference_sampler(), 0.3, g, 1);
    const auto b = sample_field(reference_sampler(), 0.3, g, 4);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    EXPECT_EQ(a.nodes.size(), 41u * 37u + 3u * 41u * 4u);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        EXPECT_EQ(std::memcmp(a.nodes[i].u.data(), b.nodes[i].u.data(), sizeof(a.nodes[i].u)), 0);
        EXPECT_EQ(a.nodes[i].cone, b.nodes[i].cone);
    }
}

TEST(FieldGrid, MirrorNodesAndCrossCount) {
    GridSpec g;
    g.nx = g.ny = 64;
    g.xmin = g.ymin = -2.0;
    g.xmax = g.ymax = 2.0;
    const auto grid = sample_field(reference_sampler(), 0.3, g);
    std::size_t cross = 0;
    for (const auto& n : grid.nodes) cross += n.cone == Cone::Cross;
    EXPECT_EQ(cross, 128u);
    EXPECT_THROW(sample_field(reference_sampler(), 0.3, GridSpec{0, 1, 0, 1, 1, 5, 0}), std::invalid_argument);
}
