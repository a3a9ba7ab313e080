#include <ddball/diagnostics.hpp>
#include <ddball/generators.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ddball;

namespace {

BallUnion remark_fixture() { return chain(2, 2.0, 2.0); }

}  // namespace

TEST(OverlapConstantsTest, TwoBallFixture) {
    OverlapConstants c = overlap_constants(remark_fixture(), 0.3);
    EXPECT_EQ(c.n_0, 2);
    EXPECT_TRUE(std::isinf(c.gamma_int));
    EXPECT_NEAR(c.beta_inf, std::acos(-1.0) / 3, 1e-9);
    EXPECT_NEAR(c.gamma_b, 0.25, 1e-9);
}

TEST(VerifyPou, SingleBallAllPass) {
    BallUnion u = chain(1);
    VerifyReport r = verify_pou(u, overlap_constants(u), 2000, 1);
    EXPECT_TRUE(r.all_passed());
    EXPECT_TRUE(r.find("pou_interior_bound").vacuous);
}

TEST(VerifyPou, ChainPasses) {
    BallUnion u = chain(5);
    VerifyReport r = verify_pou(u, overlap_constants(u), 5000, 2);
    for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " worst " << c.worst;
}

TEST(VerifyPou, TwoBallFixtureBoundaryBoundHoldsInteriorVacuous) {
    BallUnion u = remark_fixture();
    VerifyReport r = verify_pou(u, overlap_constants(u, 0.3), 5000, 3);
    EXPECT_TRUE(r.find("pou_boundary_bound").passed);
    EXPECT_FALSE(r.find("pou_boundary_bound").vacuous);
    EXPECT_TRUE(r.find("pou_interior_bound").vacuous);
    EXPECT_TRUE(r.all_passed());
}

TEST(VerifyPou, LatticeExercisesInteriorBound) {
    BallUnion u = lattice(3, 3, 3);
    VerifyReport r = verify_pou(u, overlap_constants(u), 5000, 4);
    EXPECT_FALSE(r.find("pou_interior_bound").vacuous);
    EXPECT_TRUE(r.all_passed());
}

TEST(VerifyOverlap, SingleBallBoundaryRatioIsExact) {
    BallUnion u = chain(1);
    OverlapConstants c = overlap_constants(u);
    VerifyReport r = verify_overlap_inequalities(u, c, 2000, 1);
    EXPECT_TRUE(r.all_passed());
    // δ equals the boundary distance, so the ratio is exactly γ_b.
    EXPECT_NEAR(r.find("overlap_boundary").worst, c.gamma_b, 1e-12);
}

TEST(VerifyOverlap, PassesAndNegativeControlFails) {
    for (auto u : {remark_fixture(), chain(2), chain(5), lattice(3, 3, 3)}) {
        OverlapConstants c = overlap_constants(u);
        EXPECT_TRUE(verify_overlap_inequalities(u, c, 4000, 5).all_passed());
        EXPECT_FALSE(verify_overlap_inequalities(u, c, 4000, 5, 10.0).all_passed());
    }
}

TEST(VerifyOverlap, ConeCheckRunsOnlyForTwoBalls) {
    auto two = verify_overlap_inequalities(remark_fixture(), overlap_constants(remark_fixture(), 0.3), 3000, 6);
    EXPECT_FALSE(two.find("cone_calpha").vacuous);
    EXPECT_TRUE(two.find("cone_calpha").passed);
    BallUnion u = chain(3);
    auto three = verify_overlap_inequalities(u, overlap_constants(u), 1000, 6);
    EXPECT_TRUE(three.find("cone_calpha").vacuous);
}

TEST(VerifyEigen, SingleBallHugeSlack) {
    BallUnion u({{Vec3::Zero(), 1.0}});
    GridDomain g = build_grid(u, 0.1);
    EigenBoundReport r = verify_eigen_bound(g, 8.0);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.bound, 4.76e-6, 0.01e-6);
    EXPECT_NEAR(r.lambda_min, std::acos(-1.0) * std::acos(-1.0), 1.5);
    EXPECT_GT(r.slack, 1e6);
}

TEST(VerifySweep, ChainAndLattice) {
    for (auto u : {chain(4), lattice(2, 2, 2)}) {
        GridDomain g = build_grid(u, 0.15);
        Schwarz s(g, u, false);
        SweepCheckReport r = verify_sweep(s, 1);
        EXPECT_TRUE(r.energy_ok);
        EXPECT_TRUE(r.fixed_point_ok);
        EXPECT_LT(r.contraction.rho, 1.0);
    }
}

TEST(VerifyAdditive, BoundHoldsOnChain) {
    BallUnion u = chain(4);
    GridDomain g = build_grid(u, 0.15);
    AdditiveBoundReport r = verify_additive_bound(g, u, 2);
    EXPECT_TRUE(r.passed);
    EXPECT_GT(r.lambda_max, 1.0);
}

TEST(ThetaEnergy, SequenceLength) {
    auto s = theta_energy_sequence(remark_fixture(), 0, 0.4, 2);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_LT(s[0], s[1]);
    EXPECT_LT(s[1], s[2]);
}

TEST(Fits, SlopeAndR2) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 0.5));
    EXPECT_NEAR(loglog_slope(x, y), 0.5, 1e-12);
    EXPECT_NEAR(linear_r2({1, 2, 3}, {2, 4, 6}), 1.0, 1e-12);
    EXPECT_LT(linear_r2({1, 2, 3, 4}, {1, -1, 1, -1}), 0.5);
}

TEST(Sweeps, CaseDims) {
    EXPECT_EQ(case_dims(1, 7, 4, 3), (std::array<int, 3>{4, 3, 7}));
    EXPECT_EQ(case_dims(2, 7, 4), (std::array<int, 3>{4, 7, 7}));
    EXPECT_EQ(case_dims(3, 7), (std::array<int, 3>{7, 7, 7}));
    EXPECT_THROW(case_dims(4, 2), Error);
}

TEST(Sweeps, TableColumnsAndDeterminism) {
    SweepConfig cfg;
    cfg.with_indicators = false;
    auto rows = scaling_sweep(1, {2, 3}, Method::gmres_ms, cfg);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].geometry, "lattice:1,1,2,0.9");
    EXPECT_TRUE(rows[1].converged);
    CsvTable t = sweep_table(rows);
    EXPECT_EQ(t.header(), (std::vector<std::string>{"geometry", "M", "method", "h", "tol", "iterations", "rho", "d_F",
                                                    "n_0", "n_max", "s0_bound", "converged"}));
    std::ostringstream a, b;
    t.write(a);
    sweep_table(scaling_sweep(1, {2, 3}, Method::gmres_ms, cfg)).write(b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweeps, IndicatorTableHasOneRowPerGeometry) {
    IndicatorConfig cfg;
    cfg.mc_samples = 2000;
    auto r1 = compute_indicators(chain(2), cfg, "chain:2");
    auto r2 = compute_indicators(chain(3), cfg, "chain:3");
    CsvTable t = indicator_table({r1, r2});
    EXPECT_EQ(t.rows().size(), 2u);
    EXPECT_EQ(t.header().front(), "geometry");
    EXPECT_EQ(t.rows()[1][0], "chain:3");
}
