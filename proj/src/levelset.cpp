#include <ddball/levelset.hpp>

#include <algorithm>
#include <cmath>

namespace ddball {

namespace {

constexpr double kFar = 1e20;

// Lower envelope of the parabolas rooted at finite samples; infinite
// samples contribute nothing and an all-infinite line stays infinite.
void edt1d(const double* f, double* d, int n, int* v, double* z) {
    int k = -1;
    auto meet = [&](int q, int p) {
        return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
    };
    for (int q = 0; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = meet(q, v[k]);
        while (s <= z[k]) s = meet(q, v[--k]);
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d, d + n, kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

void squared_edt(std::vector<double>& f, const std::array<int, 3>& dims) {
    const int nmax = std::max({dims[0], dims[1], dims[2]});
    const std::size_t strides[3] = {static_cast<std::size_t>(dims[1]) * dims[2],
                                    static_cast<std::size_t>(dims[2]), 1};
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        const int n = dims[axis];
#pragma omp parallel
        {
            std::vector<double> in(nmax), out(nmax), z(nmax + 2);
            std::vector<int> v(nmax);
#pragma omp for schedule(static)
            for (int i = 0; i < dims[a1]; ++i)
                for (int j = 0; j < dims[a2]; ++j) {
                    std::size_t base = i * strides[a1] + j * strides[a2];
                    for (int q = 0; q < n; ++q) in[q] = f[base + q * strides[axis]];
                    edt1d(in.data(), out.data(), n, v.data(), z.data());
                    for (int q = 0; q < n; ++q) f[base + q * strides[axis]] = out[q];
                }
        }
    }
}

double LevelSetField::sample(const Vec3& x) const {
    Vec3 q = (x - origin) / h;
    int idx[3];
    double t[3];
    for (int a = 0; a < 3; ++a) {
        double c = std::clamp(q[a], 0.0, double(dims[a] - 1));
        idx[a] = std::min(static_cast<int>(std::floor(c)), dims[a] - 2);
        if (dims[a] == 1) idx[a] = 0;
        t[a] = dims[a] == 1 ? 0.0 : c - idx[a];
    }
    double acc = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                double w = (a ? t[0] : 1 - t[0]) * (b ? t[1] : 1 - t[1]) * (c ? t[2] : 1 - t[2]);
                if (w == 0.0) continue;
                acc += w * values[node(idx[0] + a, idx[1] + b, idx[2] + c)];
            }
    return acc;
}

std::vector<Vec3> LevelSetField::extract_level(double level) const {
    std::vector<Vec3> pts;
    for (int i = 0; i < dims[0]; ++i)
        for (int j = 0; j < dims[1]; ++j)
            for (int k = 0; k < dims[2]; ++k) {
                double a = values[node(i, j, k)] - level;
                if (a == 0.0) {
                    pts.push_back(coord(i, j, k));
                    continue;
                }
                const int nb[3][3] = {{i + 1, j, k}, {i, j + 1, k}, {i, j, k + 1}};
                for (const auto& n : nb) {
                    if (n[0] >= dims[0] || n[1] >= dims[1] || n[2] >= dims[2]) continue;
                    double b = values[node(n[0], n[1], n[2])] - level;
                    if (a * b < 0.0) {
                        double t = a / (a - b);
                        pts.push_back(coord(i, j, k) + t * (coord(n[0], n[1], n[2]) - coord(i, j, k)));
                    }
                }
            }
    return pts;
}

LevelSetField sas_field(const std::vector<Ball>& balls, double r_p, double h, std::size_t node_cap) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    if (!(r_p >= 0.0)) throw DomainError("probe radius must be nonnegative");
    std::vector<Ball> inflated = balls;
    Vec3 lo = Vec3::Constant(kInf), hi = Vec3::Constant(-kInf);
    for (auto& b : inflated) {
        b.radius += r_p;
        lo = lo.cwiseMin(b.center - Vec3::Constant(b.radius));
        hi = hi.cwiseMax(b.center + Vec3::Constant(b.radius));
    }
    lo -= Vec3::Constant(4 * h);
    hi += Vec3::Constant(4 * h);
    LevelSetField f;
    f.h = h;
    for (int a = 0; a < 3; ++a) {
        f.origin[a] = std::floor(lo[a] / h) * h;
        f.dims[a] = static_cast<int>(std::ceil((hi[a] - f.origin[a]) / h)) + 1;
    }
    const std::size_t total = static_cast<std::size_t>(f.dims[0]) * f.dims[1] * f.dims[2];
    if (total > node_cap)
        throw ResourceError("distance grid needs " + std::to_string(total) + " nodes (cap " +
                            std::to_string(node_cap) + "); use a larger h");
    BallHash hash(inflated);
    std::vector<char> in(total, 0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < f.dims[0]; ++i)
        for (int j = 0; j < f.dims[1]; ++j)
            for (int k = 0; k < f.dims[2]; ++k) {
                Vec3 x = f.coord(i, j, k);
                for (int t : hash.candidates(x))
                    if ((x - inflated[t].center).squaredNorm() < inflated[t].radius * inflated[t].radius) {
                        in[f.node(i, j, k)] = 1;
                        break;
                    }
            }
    std::vector<double> to_out(total), to_in(total);
    for (std::size_t n = 0; n < total; ++n) {
        to_out[n] = in[n] ? kFar : 0.0;
        to_in[n] = in[n] ? 0.0 : kFar;
    }
    squared_edt(to_out, f.dims);
    squared_edt(to_in, f.dims);
    f.values.resize(total);
    for (std::size_t n = 0; n < total; ++n)
        f.values[n] = in[n] ? h * (std::sqrt(to_out[n]) - 0.5) : -h * (std::sqrt(to_in[n]) - 0.5);
    return f;
}

PointCloudIndex::PointCloudIndex(std::vector<Vec3> points, double cell)
    : points_(std::move(points)), cell_(cell) {
    if (points_.empty()) return;
    Vec3 lo = Vec3::Constant(kInf), hi = Vec3::Constant(-kInf);
    for (const auto& p : points_) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    origin_ = lo;
    for (int a = 0; a < 3; ++a) dims_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / cell_)) + 1;
    const std::size_t nb = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    std::vector<std::size_t> bucket(points_.size());
    start_.assign(nb + 1, 0);
    for (std::size_t p = 0; p < points_.size(); ++p) {
        Vec3 q = (points_[p] - origin_) / cell_;
        int i = std::min(dims_[0] - 1, static_cast<int>(q.x()));
        int j = std::min(dims_[1] - 1, static_cast<int>(q.y()));
        int k = std::min(dims_[2] - 1, static_cast<int>(q.z()));
        bucket[p] = (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
        ++start_[bucket[p] + 1];
    }
    for (std::size_t b = 0; b < nb; ++b) start_[b + 1] += start_[b];
    items_.resize(points_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t p = 0; p < points_.size(); ++p) items_[fill[bucket[p]]++] = static_cast<int>(p);
}

double PointCloudIndex::nearest_distance(const Vec3& x) const {
    if (points_.empty()) return kInf;
    Vec3 q = (x - origin_) / cell_;
    const int c[3] = {static_cast<int>(std::floor(q.x())), static_cast<int>(std::floor(q.y())),
                      static_cast<int>(std::floor(q.z()))};
    int rmax = 0;
    for (int a = 0; a < 3; ++a) rmax = std::max({rmax, std::abs(c[a]), std::abs(dims_[a] - 1 - c[a])});
    double best2 = kInf;
    for (int r = 0; r <= rmax; ++r) {
        for (int i = c[0] - r; i <= c[0] + r; ++i) {
            if (i < 0 || i >= dims_[0]) continue;
            for (int j = c[1] - r; j <= c[1] + r; ++j) {
                if (j < 0 || j >= dims_[1]) continue;
                const bool edge = std::abs(i - c[0]) == r || std::abs(j - c[1]) == r;
                for (int k = c[2] - r; k <= c[2] + r; k += (edge ? 1 : std::max(1, 2 * r))) {
                    if (k < 0 || k >= dims_[2]) continue;
                    std::size_t b = (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
                    for (std::size_t t = start_[b]; t < start_[b + 1]; ++t)
                        best2 = std::min(best2, (points_[items_[t]] - x).squaredNorm());
                }
            }
        }
        double reach = r * cell_;
        if (best2 <= reach * reach) break;
    }
    return std::sqrt(best2);
}

double d_ses_grid(const BallUnion& u, double r_p, double h, std::size_t node_cap) {
    LevelSetField f = sas_field(u.balls(), r_p, h, node_cap);
    PointCloudIndex cloud(f.extract_level(r_p), 2 * h);
    if (cloud.empty()) throw DomainError("SES level set is empty at this probe radius");
    std::vector<double> best(f.dims[0], 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < f.dims[0]; ++i)
        for (int j = 0; j < f.dims[1]; ++j)
            for (int k = 0; k < f.dims[2]; ++k) {
                Vec3 x = f.coord(i, j, k);
                if (!u.contains(x)) continue;
                best[i] = std::max(best[i], cloud.nearest_distance(x));
            }
    return *std::max_element(best.begin(), best.end());
}

}  // namespace ddball
