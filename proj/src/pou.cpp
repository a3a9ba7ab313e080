#include <ddball/pou.hpp>

#include <algorithm>
#include <cmath>

namespace ddball {

double PouValue::theta_of(int i) const {
    for (std::size_t k = 0; k < active.size(); ++k)
        if (active[k] == i) return theta[k];
    return 0.0;
}

Vec3 PouValue::grad_of(int i) const {
    for (std::size_t k = 0; k < active.size(); ++k)
        if (active[k] == i) return grad_theta[k];
    return Vec3::Zero();
}

DeltaValue eval_delta(const BallUnion& u, const Vec3& x) {
    DeltaValue out;
    for (int j : u.candidates(x)) {
        double dj = u.radius(j) - (x - u.center(j)).norm();
        if (dj > 0.0) {
            out.active.push_back(j);
            out.delta_i.push_back(dj);
        }
    }
    // Sum in index order for reproducibility.
    std::vector<std::size_t> perm(out.active.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return out.active[a] < out.active[b]; });
    DeltaValue sorted;
    for (auto k : perm) {
        sorted.active.push_back(out.active[k]);
        sorted.delta_i.push_back(out.delta_i[k]);
        sorted.delta += out.delta_i[k];
    }
    return sorted;
}

Vec3 grad_delta(const Ball& b, const Vec3& x) {
    Vec3 d = x - b.center;
    double r = d.norm();
    if (r >= b.radius || r == 0.0) return Vec3::Zero();
    return -d / r;
}

PouValue eval_theta(const BallUnion& u, const Vec3& x) {
    DeltaValue dv = eval_delta(u, x);
    if (!(dv.delta > 0.0)) throw DomainError("partition of unity is undefined outside the open union");
    PouValue out;
    out.point = x;
    out.active = dv.active;
    out.delta_i = dv.delta_i;
    out.delta = dv.delta;
    Vec3 gsum = Vec3::Zero();
    std::vector<Vec3> g(dv.active.size());
    for (std::size_t k = 0; k < dv.active.size(); ++k) {
        g[k] = grad_delta(u.ball(dv.active[k]), x);
        gsum += g[k];
    }
    for (std::size_t k = 0; k < dv.active.size(); ++k) {
        double th = dv.delta_i[k] / dv.delta;
        out.theta.push_back(th);
        out.grad_theta.push_back(g[k] / dv.delta - th * gsum / dv.delta);
    }
    return out;
}

double theta_energy_on_grid(const BallUnion& u, int i, double h) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    const Ball& b = u.ball(i);
    // Cells of the global lattice hZ³, so refinements share cell faces.
    Eigen::Vector3i lo, n;
    for (int a = 0; a < 3; ++a) {
        lo[a] = static_cast<int>(std::floor((b.center[a] - b.radius) / h));
        n[a] = static_cast<int>(std::ceil((b.center[a] + b.radius) / h)) - lo[a];
    }
    std::vector<double> slab(n[0], 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < n[0]; ++a) {
        double part = 0.0;
        for (int c = 0; c < n[1]; ++c)
            for (int e = 0; e < n[2]; ++e) {
                Vec3 x = h * Vec3(lo[0] + a + 0.5, lo[1] + c + 0.5, lo[2] + e + 0.5);
                if ((x - b.center).norm() >= b.radius) continue;
                part += eval_theta(u, x).grad_of(i).squaredNorm();
            }
        slab[a] = part;
    }
    double sum = 0.0;
    for (double v : slab) sum += v;
    return sum * h * h * h;
}

}  // namespace ddball
