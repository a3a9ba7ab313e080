#pragma once

#include <ddball/geometry.hpp>

#include <vector>

namespace ddball {

struct SurfacePoint {
    Vec3 point = Vec3::Zero();
    double distance = kInf;
    bool found() const { return distance < kInf; }
};

// Exact boundary of a union of balls whose radii are inflated by r_p.
// Boundary = exposed sphere patches, bounded by arcs of pairwise
// intersection circles meeting at vertices.
class UnionSurface {
public:
    struct Circle {
        int i, j;
        Vec3 center;
        Vec3 axis;  // unit, from ball i towards ball j
        double radius;
        bool exposed;
    };
    struct Vertex {
        Vec3 point;
        IndexList incident;  // spheres passing through the point
    };

    UnionSurface(const std::vector<Ball>& balls, double r_p = 0.0, int circle_samples = 64);

    int size() const { return static_cast<int>(balls_.size()); }
    const std::vector<Ball>& balls() const { return balls_; }
    double tolerance() const { return tol_; }

    // Strictly inside some ball other than `skip`, by more than the tolerance.
    bool covered(const Vec3& p, int skip = -1) const;
    // Inside the open union.
    bool inside(const Vec3& p) const;
    bool inside_closed(const Vec3& p) const;

    // Nearest point of the whole boundary.
    SurfacePoint closest_boundary_point(const Vec3& x) const;
    double boundary_distance(const Vec3& x) const { return closest_boundary_point(x).distance; }
    // Nearest point of the exposed patch on sphere i; not found if the sphere is buried.
    SurfacePoint closest_on_patch(int i, const Vec3& x) const;

    // Spheres passing through y within the tolerance.
    IndexList incident(const Vec3& y) const;

    const std::vector<Circle>& circles() const { return circles_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }  // exposed only
    bool sphere_exposed(int i) const { return sphere_exposed_[i]; }
    const IndexList& circles_of(int i) const { return circles_of_[i]; }
    const IndexList& vertices_of(int i) const { return vertices_of_[i]; }

    // Equally spaced points on a circle.
    std::vector<Vec3> circle_points(const Circle& c, int n) const;

private:
    void consider_sphere(int j, const Vec3& x, SurfacePoint& best) const;

    std::vector<Ball> balls_;
    std::vector<IndexList> neighbors_;
    std::vector<Circle> circles_;
    std::vector<Vertex> vertices_;
    std::vector<IndexList> circles_of_;
    std::vector<IndexList> vertices_of_;
    std::vector<char> sphere_exposed_;
    double tol_ = 1e-9;
    BallHash hash_;
};

}  // namespace ddball
