#include <ddball/geometry.hpp>
#include <ddball/surface.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <queue>
#include <sstream>

namespace ddball {

BallHash::BallHash(const std::vector<Ball>& balls, double pad) {
    if (balls.empty()) return;
    Vec3 lo = Vec3::Constant(kInf), hi = Vec3::Constant(-kInf);
    double rmax = 0.0;
    for (const auto& b : balls) {
        double r = b.radius + pad;
        lo = lo.cwiseMin(b.center - Vec3::Constant(r));
        hi = hi.cwiseMax(b.center + Vec3::Constant(r));
        rmax = std::max(rmax, r);
    }
    cell_ = std::max(rmax, 1e-12);
    origin_ = lo;
    Vec3 ext = (hi - lo) / cell_;
    nx_ = static_cast<int>(std::floor(ext.x())) + 1;
    ny_ = static_cast<int>(std::floor(ext.y())) + 1;
    nz_ = static_cast<int>(std::floor(ext.z())) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_ * nz_, {});
    for (int k = 0; k < static_cast<int>(balls.size()); ++k) {
        double r = balls[k].radius + pad;
        Vec3 a = (balls[k].center - Vec3::Constant(r) - origin_) / cell_;
        Vec3 b = (balls[k].center + Vec3::Constant(r) - origin_) / cell_;
        int i0 = std::max(0, static_cast<int>(std::floor(a.x())));
        int j0 = std::max(0, static_cast<int>(std::floor(a.y())));
        int l0 = std::max(0, static_cast<int>(std::floor(a.z())));
        int i1 = std::min(nx_ - 1, static_cast<int>(std::floor(b.x())));
        int j1 = std::min(ny_ - 1, static_cast<int>(std::floor(b.y())));
        int l1 = std::min(nz_ - 1, static_cast<int>(std::floor(b.z())));
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                for (int l = l0; l <= l1; ++l)
                    buckets_[(static_cast<std::size_t>(i) * ny_ + j) * nz_ + l].push_back(k);
    }
}

const IndexList& BallHash::candidates(const Vec3& p) const {
    if (buckets_.empty()) return empty_;
    Vec3 q = (p - origin_) / cell_;
    if (!(q.x() >= 0 && q.y() >= 0 && q.z() >= 0)) return empty_;
    auto i = static_cast<long>(q.x()), j = static_cast<long>(q.y()), l = static_cast<long>(q.z());
    if (i >= nx_ || j >= ny_ || l >= nz_) return empty_;
    return buckets_[(static_cast<std::size_t>(i) * ny_ + j) * nz_ + l];
}

std::vector<IndexList> compute_neighbors(const std::vector<Ball>& balls) {
    const int m = static_cast<int>(balls.size());
    double rmax = 0.0;
    for (const auto& b : balls) rmax = std::max(rmax, b.radius);
    const double tang = 1e-12 * rmax;
    std::vector<IndexList> nb(m);
    for (int i = 0; i < m; ++i) {
        nb[i].push_back(i);
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            double d = (balls[i].center - balls[j].center).norm();
            if (balls[i].radius + balls[j].radius - d >= tang && d < balls[i].radius + balls[j].radius)
                nb[i].push_back(j);
        }
        std::sort(nb[i].begin(), nb[i].end());
    }
    return nb;
}

std::vector<Vec3> fibonacci_sphere(int n) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        double z = 1.0 - (2.0 * k + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * k;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

IndexPartition classify_indices(const std::vector<Ball>& balls,
                                const std::vector<IndexList>& neighbors, int sphere_samples) {
    const int m = static_cast<int>(balls.size());
    const auto dirs = fibonacci_sphere(sphere_samples);
    std::vector<char> interior(m, 0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
        bool all = true;
        for (const auto& u : dirs) {
            Vec3 p = balls[i].center + balls[i].radius * u;
            bool cov = false;
            for (int j : neighbors[i]) {
                if (j == i) continue;
                if ((p - balls[j].center).norm() < balls[j].radius) {
                    cov = true;
                    break;
                }
            }
            if (!cov) {
                all = false;
                break;
            }
        }
        interior[i] = all ? 1 : 0;
    }
    IndexPartition part;
    part.star_neighbors.resize(m);
    for (int i = 0; i < m; ++i) {
        (interior[i] ? part.interior : part.boundary).push_back(i);
        for (int j : neighbors[i])
            if (interior[j]) part.star_neighbors[i].push_back(j);
    }
    for (int i = 0; i < m; ++i) {
        bool deep = interior[i] != 0;
        for (int j : neighbors[i]) deep = deep && interior[j];
        (deep ? part.deep_interior : part.deep_boundary).push_back(i);
    }
    return part;
}

BallUnion::BallUnion(std::vector<Ball> balls, int sphere_samples)
    : balls_(std::move(balls)), sphere_samples_(sphere_samples) {
    if (balls_.empty()) throw Error("ball union needs at least one ball");
    if (sphere_samples < 100) throw Error("sphere_samples must be at least 100");
    r_min_ = kInf;
    lo_ = Vec3::Constant(kInf);
    hi_ = Vec3::Constant(-kInf);
    for (const auto& b : balls_) {
        if (!(b.radius > 0.0) || !std::isfinite(b.radius) || !b.center.allFinite())
            throw Error("ball radius must be positive and finite");
        r_min_ = std::min(r_min_, b.radius);
        r_max_ = std::max(r_max_, b.radius);
        lo_ = lo_.cwiseMin(b.center - Vec3::Constant(b.radius));
        hi_ = hi_.cwiseMax(b.center + Vec3::Constant(b.radius));
    }
    neighbors_ = compute_neighbors(balls_);
    part_ = classify_indices(balls_, neighbors_, sphere_samples);
    interior_flag_.assign(balls_.size(), 0);
    for (int i : part_.interior) interior_flag_[i] = 1;
    hash_ = BallHash(balls_);
}

IndexList BallUnion::proper_neighbors(int i) const {
    IndexList out;
    for (int j : neighbors_[i])
        if (j != i) out.push_back(j);
    return out;
}

bool BallUnion::contains(const Vec3& p) const {
    for (int j : candidates(p))
        if ((p - balls_[j].center).squaredNorm() < balls_[j].radius * balls_[j].radius) return true;
    return false;
}

bool BallUnion::contains_closed(const Vec3& p) const {
    for (int j : candidates(p))
        if ((p - balls_[j].center).norm() <= balls_[j].radius) return true;
    return false;
}

int BallUnion::multiplicity(const Vec3& p) const {
    int c = 0;
    for (int j : candidates(p))
        if ((p - balls_[j].center).squaredNorm() < balls_[j].radius * balls_[j].radius) ++c;
    return c;
}

IndexList BallUnion::containing(const Vec3& p) const {
    IndexList out;
    for (int j : candidates(p))
        if ((p - balls_[j].center).squaredNorm() < balls_[j].radius * balls_[j].radius) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Ball> parse_xyzr(const std::string& text) {
    std::vector<Ball> balls;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        double v[4];
        int count = 0;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            std::size_t end = pos;
            while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
            const int column = static_cast<int>(pos) + 1;
            if (count == 4) throw ParseError("expected 4 fields \"x y z r\"", lineno, column);
            const char* first = line.data() + pos;
            const char* last = line.data() + end;
            if (*first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, v[count]);
            if (ec != std::errc() || ptr != last || !std::isfinite(v[count]))
                throw ParseError("invalid number '" + line.substr(pos, end - pos) + "'", lineno, column);
            if (count == 3 && !(v[3] > 0.0))
                throw ParseError("nonpositive radius " + line.substr(pos, end - pos), lineno, column);
            ++count;
            pos = end;
        }
        if (count == 0) continue;
        if (count != 4)
            throw ParseError("expected 4 fields \"x y z r\", found " + std::to_string(count), lineno,
                             static_cast<int>(line.size()) + 1);
        balls.push_back({Vec3(v[0], v[1], v[2]), v[3]});
    }
    if (balls.empty()) throw ParseError("no balls found", lineno, 0);
    return balls;
}

BallUnion load_xyzr(const std::string& path, int sphere_samples) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open geometry file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return BallUnion(parse_xyzr(ss.str()), sphere_samples);
}

void write_xyzr(const std::string& path, const std::vector<Ball>& balls) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path + "'");
    f.precision(17);
    for (const auto& b : balls)
        f << b.center.x() << ' ' << b.center.y() << ' ' << b.center.z() << ' ' << b.radius << '\n';
}

std::pair<double, Vec3> cone_maxmin(const std::vector<Vec3>& v) {
    auto value = [&](const Vec3& n) {
        double m = kInf;
        for (const auto& w : v) m = std::min(m, -n.dot(w));
        return m;
    };
    double best = -kInf;
    Vec3 arg = Vec3::UnitZ();
    auto consider = [&](Vec3 n) {
        double len = n.norm();
        if (len < 1e-14) return;
        n /= len;
        double f = value(n);
        if (f > best) {
            best = f;
            arg = n;
        }
    };
    const std::size_t k = v.size();
    for (std::size_t a = 0; a < k; ++a) {
        consider(-v[a]);
        for (std::size_t b = a + 1; b < k; ++b) {
            consider(-(v[a] + v[b]));
            consider(v[a] + v[b]);
            for (std::size_t c = b + 1; c < k; ++c) {
                Vec3 w = (v[a] - v[b]).cross(v[a] - v[c]);
                consider(w);
                consider(-w);
            }
        }
    }
    return {best, arg};
}

AssumptionReport check_assumptions(const BallUnion& u, int circle_samples) {
    AssumptionReport rep;
    const int m = u.size();

    std::vector<char> seen(m, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (int j : u.neighbors(i))
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                q.push(j);
            }
    }
    rep.connected = reached == m;

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && (u.center(i) - u.center(j)).norm() + u.radius(i) <= u.radius(j))
                rep.containment_violations.emplace_back(i, j);

    UnionSurface surf(u.balls(), 0.0, circle_samples);
    struct Sample {
        Vec3 y;
        double g;
    };
    std::vector<Sample> samples;
    auto evaluate = [&](const Vec3& y) {
        IndexList inc = surf.incident(y);
        std::vector<Vec3> v;
        for (int t : inc) v.push_back((u.center(t) - y).normalized());
        samples.push_back({y, cone_maxmin(v).first});
    };
    for (const auto& c : surf.circles()) {
        if (!c.exposed) continue;
        for (const auto& y : surf.circle_points(c, circle_samples))
            if (!surf.covered(y)) evaluate(y);
    }
    for (const auto& vx : surf.vertices()) evaluate(vx.point);

    rep.sampled_points = static_cast<int>(samples.size());
    if (samples.empty()) {
        // Smooth boundary: every point sees a half-space.
        rep.gamma_alpha = 1.0;
        rep.beta_min = std::numbers::pi / 2;
        return rep;
    }
    double gmin = kInf;
    for (const auto& s : samples) gmin = std::min(gmin, s.g);
    rep.gamma_alpha = gmin;
    rep.beta_min = std::numbers::pi / 2 - std::acos(std::clamp(gmin, -1.0, 1.0));
    for (const auto& s : samples)
        if (s.g <= gmin + 1e-9 && rep.witness_points.size() < 16) rep.witness_points.push_back(s.y);
    return rep;
}

}  // namespace ddball
