#include <ddball/generators.hpp>
#include <ddball/geometry.hpp>
#include <ddball/surface.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ddball;

namespace {

// Dense sampling of the exposed boundary: brute-force reference distance.
struct BoundaryCloud {
    explicit BoundaryCloud(const BallUnion& u, int per_sphere = 20000) {
        for (int i = 0; i < u.size(); ++i)
            for (const auto& d : fibonacci_sphere(per_sphere)) {
                Vec3 p = u.center(i) + u.radius(i) * d;
                bool covered = false;
                for (int j = 0; j < u.size() && !covered; ++j)
                    covered = j != i && (p - u.center(j)).norm() < u.radius(j) - 1e-12;
                if (!covered) pts.push_back(p);
            }
    }
    double distance(const Vec3& x) const {
        double best = kInf;
        for (const auto& p : pts) best = std::min(best, (p - x).norm());
        return best;
    }
    std::vector<Vec3> pts;
};

}  // namespace

TEST(Surface, SingleBallDistanceIsRadial) {
    UnionSurface s({{Vec3(1, 2, 3), 1.5}});
    EXPECT_NEAR(s.boundary_distance(Vec3(1, 2, 3)), 1.5, 1e-12);
    EXPECT_NEAR(s.boundary_distance(Vec3(1.5, 2, 3)), 1.0, 1e-12);
    EXPECT_NEAR(s.boundary_distance(Vec3(4, 2, 3)), 1.5, 1e-12);
}

TEST(Surface, TwoBallSeamCircle) {
    // Centres (±1,0,0), radius 2: seam circle of radius √3 in x = 0.
    BallUnion u = chain(2, 2.0, 2.0);
    UnionSurface s(u.balls());
    ASSERT_EQ(s.circles().size(), 1u);
    EXPECT_NEAR(s.circles()[0].radius, std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(s.boundary_distance(Vec3(0, 0, 0)), std::sqrt(3.0), 1e-12);
    // A point below the seam: nearest boundary point is on the circle.
    Vec3 x(0, 1.0, 0);
    EXPECT_NEAR(s.boundary_distance(x), std::sqrt(3.0) - 1.0, 1e-12);
}

TEST(Surface, MatchesBruteForceOnLattice) {
    BallUnion u = lattice(2, 2, 2);
    UnionSurface s(u.balls());
    BoundaryCloud cloud(u);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    int checked = 0;
    while (checked < 200) {
        Vec3 x(U(rng), U(rng), U(rng));
        if (!u.contains(x)) continue;
        ++checked;
        const double exact = s.boundary_distance(x);
        const double ref = cloud.distance(x);
        // The cloud only overestimates; its spacing is about 0.02.
        EXPECT_LE(exact, ref + 1e-12);
        EXPECT_NEAR(exact, ref, 0.03);
    }
}

TEST(Surface, ClosestPointLiesOnBoundary) {
    BallUnion u = lattice(2, 2, 1);
    UnionSurface s(u.balls());
    for (const Vec3& x : {Vec3(1.5, 1.5, 1.0), Vec3(1.1, 1.2, 1.3), Vec3(2.2, 1.0, 0.6)}) {
        SurfacePoint p = s.closest_boundary_point(x);
        ASSERT_TRUE(p.found());
        double gap = kInf;
        for (const auto& b : u.balls()) gap = std::min(gap, (p.point - b.center).norm() - b.radius);
        EXPECT_NEAR(gap, 0.0, 1e-12);
        EXPECT_FALSE(u.contains(p.point + 1e-7 * (p.point - x).normalized()));
        EXPECT_NEAR((p.point - x).norm(), p.distance, 1e-12);
    }
}

TEST(Surface, CoveredExcludesSkippedBall) {
    BallUnion u = chain(2);
    UnionSurface s(u.balls());
    Vec3 p = u.center(0) + Vec3(0.9, 0, 0);  // on sphere 0, deep inside ball 1
    EXPECT_TRUE(s.covered(p, 0));
    Vec3 q = u.center(0) - Vec3(0.9, 0, 0);
    EXPECT_FALSE(s.covered(q, 0));
}

TEST(Surface, PatchProjectionStaysOnPatch) {
    BallUnion u = chain(3);
    UnionSurface s(u.balls());
    // From the centre of the middle ball the radial projection upward is exposed.
    SurfacePoint p = s.closest_on_patch(1, u.center(1) + Vec3(0, 0.1, 0));
    ASSERT_TRUE(p.found());
    EXPECT_NEAR((p.point - u.center(1)).norm(), 0.9, 1e-12);
    EXPECT_FALSE(s.covered(p.point, 1));
    // From deep in the lens, the patch point of ball 1 is on its seam circle.
    SurfacePoint q = s.closest_on_patch(1, Vec3(0.5, 0, 0));
    EXPECT_NEAR(q.point.x(), 0.5, 1e-12);
    EXPECT_NEAR(std::hypot(q.point.y(), q.point.z()), std::sqrt(0.81 - 0.25), 1e-12);
}

TEST(Surface, TripleVerticesAreExposedAndIncident) {
    BallUnion u = lattice(2, 2, 1);
    UnionSurface s(u.balls());
    ASSERT_FALSE(s.vertices().empty());
    for (const auto& v : s.vertices()) {
        EXPECT_GE(v.incident.size(), 3u);
        for (int i : v.incident) EXPECT_NEAR((v.point - u.center(i)).norm(), u.radius(i), 1e-9);
        EXPECT_FALSE(u.contains(v.point));
    }
}
