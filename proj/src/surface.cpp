#include <ddball/surface.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddball {

namespace {

Vec3 any_perpendicular(const Vec3& a) {
    Vec3 t = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return (t - t.dot(a) * a).normalized();
}

}  // namespace

UnionSurface::UnionSurface(const std::vector<Ball>& balls, double r_p, int circle_samples) {
    if (!(r_p >= 0.0)) throw DomainError("probe radius must be nonnegative");
    balls_ = balls;
    double rmax = 0.0;
    for (auto& b : balls_) {
        b.radius += r_p;
        rmax = std::max(rmax, b.radius);
    }
    tol_ = 1e-9 * std::max(1.0, rmax);
    neighbors_ = compute_neighbors(balls_);
    hash_ = BallHash(balls_);
    const int m = size();
    circles_of_.assign(m, {});
    vertices_of_.assign(m, {});
    sphere_exposed_.assign(m, 0);

    for (int i = 0; i < m; ++i) {
        for (int j : neighbors_[i]) {
            if (j <= i) continue;
            Vec3 dv = balls_[j].center - balls_[i].center;
            double d = dv.norm();
            double a = (d * d + balls_[i].radius * balls_[i].radius - balls_[j].radius * balls_[j].radius) / (2 * d);
            double rho2 = balls_[i].radius * balls_[i].radius - a * a;
            if (rho2 <= 0.0) continue;  // nested spheres do not meet
            Circle c{i, j, balls_[i].center + a * dv / d, dv / d, std::sqrt(rho2), false};
            circles_of_[i].push_back(static_cast<int>(circles_.size()));
            circles_of_[j].push_back(static_cast<int>(circles_.size()));
            circles_.push_back(c);
        }
    }

    // Triple points by trilateration, deduplicated.
    const double merge = 1e3 * tol_;
    for (int i = 0; i < m; ++i) {
        for (int j : neighbors_[i]) {
            if (j <= i) continue;
            for (int k : neighbors_[j]) {
                if (k <= j || !std::binary_search(neighbors_[i].begin(), neighbors_[i].end(), k)) continue;
                const Vec3& a = balls_[i].center;
                Vec3 w = (balls_[j].center - a).cross(balls_[k].center - a);
                if (w.norm() < 1e-12 * std::max(1.0, rmax * rmax)) continue;
                Eigen::Matrix<double, 2, 3> A;
                A.row(0) = 2 * (balls_[j].center - a).transpose();
                A.row(1) = 2 * (balls_[k].center - a).transpose();
                auto rhs = [&](int t) {
                    return balls_[i].radius * balls_[i].radius - balls_[t].radius * balls_[t].radius +
                           (balls_[t].center - a).squaredNorm();
                };
                Eigen::Vector2d b(rhs(j), rhs(k));
                Vec3 p0 = A.transpose() * (A * A.transpose()).ldlt().solve(b);  // relative to a
                Vec3 wn = w.normalized();
                double s = p0.dot(wn);
                double disc = s * s - (p0.squaredNorm() - balls_[i].radius * balls_[i].radius);
                if (disc < 0.0) continue;
                double sq = std::sqrt(disc);
                for (double t : {-s - sq, -s + sq}) {
                    Vec3 p = a + p0 + t * wn;
                    if (covered(p)) continue;
                    bool dup = false;
                    for (const auto& v : vertices_)
                        if ((v.point - p).norm() < merge) {
                            dup = true;
                            break;
                        }
                    if (dup) continue;
                    int id = static_cast<int>(vertices_.size());
                    vertices_.push_back({p, incident(p)});
                    for (int q : vertices_.back().incident) vertices_of_[q].push_back(id);
                }
            }
        }
    }

    for (auto& c : circles_) {
        for (const auto& p : circle_points(c, circle_samples))
            if (!covered(p)) {
                c.exposed = true;
                break;
            }
        if (!c.exposed) {
            for (int v : vertices_of_[c.i]) {
                const auto& inc = vertices_[v].incident;
                if (std::find(inc.begin(), inc.end(), c.j) != inc.end()) {
                    c.exposed = true;
                    break;
                }
            }
        }
        if (c.exposed) sphere_exposed_[c.i] = sphere_exposed_[c.j] = 1;
    }
    const auto dirs = fibonacci_sphere(400);
    for (int i = 0; i < m; ++i) {
        if (sphere_exposed_[i]) continue;
        if (!vertices_of_[i].empty()) {
            sphere_exposed_[i] = 1;
            continue;
        }
        for (const auto& u : dirs)
            if (!covered(balls_[i].center + balls_[i].radius * u, i)) {
                sphere_exposed_[i] = 1;
                break;
            }
    }
}

std::vector<Vec3> UnionSurface::circle_points(const Circle& c, int n) const {
    Vec3 e1 = any_perpendicular(c.axis);
    Vec3 e2 = c.axis.cross(e1);
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        double phi = 2 * std::numbers::pi * k / n;
        pts.push_back(c.center + c.radius * (std::cos(phi) * e1 + std::sin(phi) * e2));
    }
    return pts;
}

bool UnionSurface::covered(const Vec3& p, int skip) const {
    for (int j : hash_.candidates(p)) {
        if (j == skip) continue;
        if ((p - balls_[j].center).norm() < balls_[j].radius - tol_) return true;
    }
    return false;
}

bool UnionSurface::inside(const Vec3& p) const {
    for (int j : hash_.candidates(p))
        if ((p - balls_[j].center).squaredNorm() < balls_[j].radius * balls_[j].radius) return true;
    return false;
}

bool UnionSurface::inside_closed(const Vec3& p) const {
    for (int j : hash_.candidates(p))
        if ((p - balls_[j].center).norm() <= balls_[j].radius) return true;
    return false;
}

IndexList UnionSurface::incident(const Vec3& y) const {
    IndexList out;
    for (int j : hash_.candidates(y))
        if (std::abs((y - balls_[j].center).norm() - balls_[j].radius) <= tol_) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

void UnionSurface::consider_sphere(int j, const Vec3& x, SurfacePoint& best) const {
    const Ball& b = balls_[j];
    Vec3 d = x - b.center;
    double r = d.norm();
    double lb = std::abs(r - b.radius);
    if (lb >= best.distance || !sphere_exposed_[j]) return;
    const double tiny = 1e-12 * std::max(1.0, b.radius);

    if (r > tiny) {
        Vec3 p = b.center + b.radius * d / r;
        if (!covered(p, j)) {
            best = {p, lb};
            return;
        }
    }
    for (int ci : circles_of_[j]) {
        const Circle& c = circles_[ci];
        if (!c.exposed) continue;
        Vec3 e = x - c.center;
        double along = e.dot(c.axis);
        Vec3 perp = e - along * c.axis;
        double pn = perp.norm();
        double dist = std::hypot(along, pn - c.radius);
        if (dist >= best.distance) continue;
        if (pn > tiny) {
            Vec3 q = c.center + c.radius * perp / pn;
            if (!covered(q)) best = {q, dist};
        } else {
            // x on the axis: every circle point is equidistant.
            for (const auto& q : circle_points(c, 64))
                if (!covered(q)) {
                    best = {q, dist};
                    break;
                }
        }
    }
    for (int vi : vertices_of_[j]) {
        double dist = (vertices_[vi].point - x).norm();
        if (dist < best.distance) best = {vertices_[vi].point, dist};
    }
    if (r <= tiny && best.distance > b.radius) {
        // x at the center: any exposed point of the sphere is nearest.
        for (const auto& u : fibonacci_sphere(400)) {
            Vec3 p = b.center + b.radius * u;
            if (!covered(p, j)) {
                best = {p, b.radius};
                break;
            }
        }
    }
}

SurfacePoint UnionSurface::closest_boundary_point(const Vec3& x) const {
    const int m = size();
    std::vector<std::pair<double, int>> order(m);
    for (int j = 0; j < m; ++j)
        order[j] = {std::abs((x - balls_[j].center).norm() - balls_[j].radius), j};
    std::sort(order.begin(), order.end());
    SurfacePoint best;
    for (const auto& [lb, j] : order) {
        if (lb >= best.distance) break;
        consider_sphere(j, x, best);
    }
    return best;
}

SurfacePoint UnionSurface::closest_on_patch(int i, const Vec3& x) const {
    SurfacePoint best;
    consider_sphere(i, x, best);
    return best;
}

}  // namespace ddball
