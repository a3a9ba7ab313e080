#include <ddball/generators.hpp>
#include <ddball/geometry.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace ddball;

namespace {

BallUnion two_balls(double spacing, double r) { return chain(2, spacing, r); }

}  // namespace

TEST(Parse, ReadsBallsAndSkipsComments) {
    auto balls = parse_xyzr("# header\n0 0 0 1.5\n\n  1.0 2 -3 0.5  # trailing\n");
    ASSERT_EQ(balls.size(), 2u);
    EXPECT_DOUBLE_EQ(balls[1].center.y(), 2.0);
    EXPECT_DOUBLE_EQ(balls[1].center.z(), -3.0);
    EXPECT_DOUBLE_EQ(balls[1].radius, 0.5);
}

TEST(Parse, ReportsLineOfBadToken) {
    try {
        parse_xyzr("0 0 0 1\n0 0 x 1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
    }
}

TEST(Parse, RejectsWrongFieldCount) { EXPECT_THROW(parse_xyzr("0 0 0\n"), ParseError); }

TEST(Parse, RejectsNonPositiveRadius) {
    EXPECT_THROW(parse_xyzr("0 0 0 0\n"), ParseError);
    EXPECT_THROW(parse_xyzr("0 0 0 -1\n"), ParseError);
}

TEST(Parse, RejectsEmptyInput) { EXPECT_THROW(parse_xyzr("# nothing\n"), ParseError); }

TEST(Neighbors, OpenOverlapRule) {
    std::vector<Ball> b{{Vec3(0, 0, 0), 1.0}, {Vec3(1.9, 0, 0), 1.0}, {Vec3(4.0, 0, 0), 1.0}};
    auto nb = compute_neighbors(b);
    EXPECT_EQ(nb[0], (IndexList{0, 1}));
    EXPECT_EQ(nb[1], (IndexList{0, 1}));  // 2.1 apart against a radius sum of 2
    EXPECT_EQ(nb[2], (IndexList{2}));
}

TEST(Neighbors, TangentBallsAreNotNeighbors) {
    std::vector<Ball> b{{Vec3(0, 0, 0), 1.0}, {Vec3(2.0, 0, 0), 1.0}};
    auto nb = compute_neighbors(b);
    EXPECT_EQ(nb[0], (IndexList{0}));
    EXPECT_EQ(nb[1], (IndexList{1}));
}

TEST(Neighbors, SymmetricOnLattice) {
    BallUnion u = lattice(3, 3, 3);
    for (int i = 0; i < u.size(); ++i)
        for (int j : u.neighbors(i)) {
            const auto& nj = u.neighbors(j);
            EXPECT_TRUE(std::binary_search(nj.begin(), nj.end(), i));
        }
}

TEST(Neighbors, MatchBruteForcePairwiseDistances) {
    BallUnion u = lattice(3, 3, 2, 0.8);
    for (int i = 0; i < u.size(); ++i) {
        IndexList expect;
        for (int j = 0; j < u.size(); ++j)
            if ((u.center(i) - u.center(j)).norm() < u.radius(i) + u.radius(j)) expect.push_back(j);
        EXPECT_EQ(u.neighbors(i), expect);
    }
}

TEST(Neighbors, ChainInteriorBallTouchesOnlyAdjacent) {
    BallUnion u = chain(5);
    EXPECT_EQ(u.neighbors(2), (IndexList{1, 2, 3}));
}

TEST(Classify, SingleBallIsBoundary) {
    BallUnion u = chain(1);
    EXPECT_TRUE(u.interior_indices().empty());
    EXPECT_EQ(u.boundary_indices(), IndexList{0});
}

TEST(Classify, ChainHasNoInteriorBall) {
    for (int m : {2, 5, 8}) EXPECT_TRUE(chain(m).interior_indices().empty()) << m;
}

TEST(Classify, CubeLatticeCenterIsInterior) {
    BallUnion u = lattice(3, 3, 3);
    EXPECT_EQ(u.interior_indices(), IndexList{13});
    // Its neighbours are boundary balls, so it is not deep interior.
    EXPECT_TRUE(u.deep_interior().empty());
    EXPECT_EQ(u.star_neighbors(13), IndexList{13});
    EXPECT_EQ(u.star_neighbors(0), IndexList{13});
}

TEST(Classify, FiveLatticeDeepInteriorIsCenter) {
    BallUnion u = lattice(5, 5, 5);
    EXPECT_EQ(u.interior_indices().size(), 27u);
    EXPECT_EQ(u.deep_interior(), IndexList{62});
}

TEST(Classify, FibonacciPointsAreUnitAndSpread) {
    auto p = fibonacci_sphere(500);
    ASSERT_EQ(p.size(), 500u);
    Vec3 mean = Vec3::Zero();
    for (const auto& q : p) {
        EXPECT_NEAR(q.norm(), 1.0, 1e-12);
        mean += q / 500.0;
    }
    EXPECT_LT(mean.norm(), 1e-2);
}

TEST(Membership, ContainsAndMultiplicity) {
    BallUnion u = chain(3);
    EXPECT_TRUE(u.contains(Vec3(0.5, 0, 0)));
    EXPECT_EQ(u.multiplicity(Vec3(0.5, 0, 0)), 2);
    EXPECT_EQ(u.containing(Vec3(0.5, 0, 0)), (IndexList{1, 2}));
    EXPECT_FALSE(u.contains(Vec3(0, 0.95, 0)));
    EXPECT_FALSE(u.contains(Vec3(0, 0.9, 0)));
    EXPECT_TRUE(u.contains_closed(Vec3(0, 0.9, 0)));
}

TEST(Assumptions, ChainSatisfiesAll) {
    AssumptionReport a = check_assumptions(chain(6));
    EXPECT_TRUE(a.connected);
    EXPECT_TRUE(a.containment_violations.empty());
    EXPECT_TRUE(a.a4_holds());
}

TEST(Assumptions, DetectsDisconnectedUnion) {
    BallUnion u({{Vec3(0, 0, 0), 1.0}, {Vec3(5, 0, 0), 1.0}});
    EXPECT_FALSE(check_assumptions(u).connected);
}

TEST(Assumptions, DetectsContainment) {
    BallUnion u({{Vec3(0, 0, 0), 2.0}, {Vec3(0.5, 0, 0), 1.0}});
    auto a = check_assumptions(u);
    ASSERT_EQ(a.containment_violations.size(), 1u);
    EXPECT_EQ(a.containment_violations[0], std::make_pair(1, 0));
}

TEST(Assumptions, SingleBallHasFlatCone) {
    auto a = check_assumptions(chain(1));
    EXPECT_NEAR(a.beta_min, std::numbers::pi / 2, 1e-12);
}

TEST(Assumptions, TwoBallConeAngleMatchesHandComputation) {
    // Centres (±1,0,0), radius 2: at the seam y = (0,√3,0) the inward unit
    // vectors make a 60° angle, so the best cone axis bisects them with
    // cosine cos 30° and β = π/2 − π/6.
    auto a = check_assumptions(two_balls(2.0, 2.0));
    EXPECT_NEAR(a.gamma_alpha, std::cos(std::numbers::pi / 6), 1e-9);
    EXPECT_NEAR(a.beta_min, std::numbers::pi / 3, 1e-9);
}

TEST(Assumptions, UnitChainConeAngle) {
    // Spacing 1, radius 0.9: seam circle radius √(0.81 − 0.25); the inward
    // vectors have x-components ∓0.5/0.9, so the best cosine is √(1 − (0.5/0.9)²).
    auto a = check_assumptions(chain(4));
    const double g = std::sqrt(1 - std::pow(0.5 / 0.9, 2));
    EXPECT_NEAR(a.gamma_alpha, g, 1e-9);
    EXPECT_NEAR(a.beta_min, std::numbers::pi / 2 - std::acos(g), 1e-9);
}

TEST(ConeMaxMin, SingleVectorIsItsOwnAxis) {
    auto [g, n] = cone_maxmin({Vec3(0, 0, 1)});
    EXPECT_NEAR(g, 1.0, 1e-12);
    EXPECT_NEAR((n - Vec3(0, 0, -1)).norm(), 0.0, 1e-12);
}

TEST(ConeMaxMin, OrthonormalTriple) {
    // Axis (1,1,1)/√3 is equidistant from the three unit vectors.
    auto [g, n] = cone_maxmin({Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    EXPECT_NEAR(g, 1.0 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(std::abs(n.dot(Vec3(1, 1, 1).normalized())), 1.0, 1e-12);
}

TEST(ConeMaxMin, BeatsRandomDirections) {
    std::vector<Vec3> v{Vec3(1, 0.2, 0).normalized(), Vec3(0.1, 1, 0.3).normalized(),
                        Vec3(0.3, 0.1, 1).normalized(), Vec3(0.7, 0.7, 0.1).normalized()};
    double g = cone_maxmin(v).first;
    for (const auto& n : fibonacci_sphere(20000)) {
        double m = 1.0;
        for (const auto& t : v) m = std::min(m, -n.dot(t));
        EXPECT_LE(m, g + 1e-12);
    }
}
