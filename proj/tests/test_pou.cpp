#include <ddball/generators.hpp>
#include <ddball/pou.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ddball;

namespace {

Vec3 fd_gradient(const BallUnion& u, int i, const Vec3& x, double eps) {
    Vec3 g;
    for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = eps;
        g[d] = (eval_theta(u, x + e).theta_of(i) - eval_theta(u, x - e).theta_of(i)) / (2 * eps);
    }
    return g;
}

}  // namespace

TEST(Delta, SingleBallIsDistanceToSphere) {
    BallUnion u({{Vec3(0, 0, 0), 2.0}});
    DeltaValue d = eval_delta(u, Vec3(0.5, 0, 0));
    ASSERT_EQ(d.active, IndexList{0});
    EXPECT_DOUBLE_EQ(d.delta, 1.5);
    EXPECT_TRUE(eval_delta(u, Vec3(3, 0, 0)).active.empty());
}

TEST(Delta, ActiveListSortedAndSummed) {
    BallUnion u = chain(3);
    DeltaValue d = eval_delta(u, Vec3(0.5, 0, 0));
    ASSERT_EQ(d.active, (IndexList{1, 2}));
    EXPECT_NEAR(d.delta_i[0], 0.4, 1e-15);
    EXPECT_NEAR(d.delta_i[1], 0.4, 1e-15);
    EXPECT_NEAR(d.delta, 0.8, 1e-15);
}

TEST(Delta, GradientIsInwardUnitVector) {
    Ball b{Vec3(1, 0, 0), 1.0};
    Vec3 g = grad_delta(b, Vec3(1.5, 0, 0));
    EXPECT_NEAR((g - Vec3(-1, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_EQ(grad_delta(b, b.center), Vec3::Zero());
    EXPECT_EQ(grad_delta(b, Vec3(3, 0, 0)), Vec3::Zero());
}

TEST(Theta, HandComputedValues) {
    // Centres (±1,0,0), radius 2: at x = (0.5,0,0), δ_1 = 0.5, δ_2 = 1.5.
    BallUnion u = chain(2, 2.0, 2.0);
    PouValue p = eval_theta(u, Vec3(0.5, 0, 0));
    EXPECT_NEAR(p.theta_of(0), 0.25, 1e-15);
    EXPECT_NEAR(p.theta_of(1), 0.75, 1e-15);
    // ∇θ_1 = (δ_2∇δ_1 − δ_1∇δ_2)/δ² with ∇δ_1 = (−1,0,0), ∇δ_2 = (1,0,0).
    EXPECT_NEAR(p.grad_of(0).x(), (1.5 * -1 - 0.5 * 1) / 4.0, 1e-15);
    EXPECT_NEAR(p.grad_of(0).y(), 0.0, 1e-15);
}

TEST(Theta, SumsToOneAndGradientsCancel) {
    BallUnion u = lattice(2, 2, 2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.2, 2.8);
    int n = 0;
    while (n < 500) {
        Vec3 x(U(rng), U(rng), U(rng));
        if (!u.contains(x)) continue;
        ++n;
        PouValue p = eval_theta(u, x);
        double s = 0;
        Vec3 g = Vec3::Zero();
        for (std::size_t k = 0; k < p.active.size(); ++k) {
            EXPECT_GE(p.theta[k], 0.0);
            EXPECT_LE(p.theta[k], 1.0);
            s += p.theta[k];
            g += p.grad_theta[k];
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
        EXPECT_LT(g.norm(), 1e-12);
    }
}

TEST(Theta, AnalyticGradientMatchesFiniteDifferences) {
    BallUnion u = lattice(2, 2, 1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.3, 2.7);
    int n = 0;
    while (n < 200) {
        Vec3 x(U(rng), U(rng), 1.0 + (U(rng) - 1.5) / 3);
        if (!u.contains(x)) continue;
        // Stay off kinks: centres and sphere boundaries.
        bool near_kink = false;
        for (int i = 0; i < u.size(); ++i) {
            double r = (x - u.center(i)).norm();
            near_kink = near_kink || r < 1e-3 || std::abs(r - u.radius(i)) < 1e-3;
        }
        if (near_kink) continue;
        ++n;
        PouValue p = eval_theta(u, x);
        for (int i : p.active) {
            Vec3 fd = fd_gradient(u, i, x, 1e-6);
            EXPECT_LE((fd - p.grad_of(i)).norm(), 1e-4 * std::max(1.0, p.grad_of(i).norm()));
        }
    }
}

TEST(Theta, ThrowsOutsideUnion) {
    BallUnion u = chain(2);
    EXPECT_THROW(eval_theta(u, Vec3(0, 5, 0)), DomainError);
    EXPECT_THROW(eval_theta(u, Vec3(0.5, 0.9, 0)), DomainError);  // on the closed boundary
}

TEST(ThetaEnergy, SingleBallHasZeroEnergy) {
    BallUnion u = chain(1);
    EXPECT_DOUBLE_EQ(theta_energy_on_grid(u, 0, 0.1), 0.0);
}

TEST(ThetaEnergy, GrowsUnderRefinementOnTwoBallFixture) {
    BallUnion u = chain(2, 2.0, 2.0);
    double prev = theta_energy_on_grid(u, 0, 0.4);
    for (double h : {0.2, 0.1}) {
        double e = theta_energy_on_grid(u, 0, h);
        EXPECT_GT(e, prev) << h;
        prev = e;
    }
}

TEST(ThetaEnergy, DeterministicAcrossCalls) {
    BallUnion u = chain(3);
    EXPECT_EQ(theta_energy_on_grid(u, 1, 0.1), theta_energy_on_grid(u, 1, 0.1));
}
