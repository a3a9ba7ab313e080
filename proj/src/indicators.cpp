#include <ddball/indicators.hpp>
#include <ddball/pou.hpp>
#include <ddball/surface.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>

namespace ddball {

namespace {

double unit_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Vec3 uniform_in_ball(std::mt19937_64& rng, const Vec3& c, double r) {
    while (true) {
        Vec3 q(2 * unit_uniform(rng) - 1, 2 * unit_uniform(rng) - 1, 2 * unit_uniform(rng) - 1);
        if (q.squaredNorm() <= 1.0) return c + r * q;
    }
}

std::mt19937_64 stream(std::uint64_t seed, int index, int tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(tag)};
    return std::mt19937_64(seq);
}

// Fraction of B(p, r) outside the open union.
double exterior_fraction(const BallUnion& u, const Vec3& p, double r, int mc, std::mt19937_64& rng) {
    int out = 0;
    for (int s = 0; s < mc; ++s)
        if (!u.contains(uniform_in_ball(rng, p, r))) ++out;
    return static_cast<double>(out) / mc;
}

// Point of the closed union within rho of c, if any.
std::optional<Vec3> near_union(const BallUnion& u, const Vec3& c, double rho) {
    int best = -1;
    double gap = kInf;
    for (int j = 0; j < u.size(); ++j) {
        double g = (c - u.center(j)).norm() - u.radius(j);
        if (g < gap) {
            gap = g;
            best = j;
        }
    }
    if (gap <= 0.0) return c;
    if (gap > rho) return std::nullopt;
    Vec3 d = c - u.center(best);
    return Vec3(u.center(best) + u.radius(best) * d / d.norm());
}

std::vector<Vec3> grid_nodes(const Vec3& lo, const Vec3& hi, double h) {
    std::vector<Vec3> pts;
    Vec3 o = (lo / h).array().floor().matrix() * h;
    int n[3];
    for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(std::ceil((hi[a] - o[a]) / h)) + 1;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k) pts.push_back(o + h * Vec3(i, j, k));
    return pts;
}

// Multiplicity and containing set of the special points where several
// spheres meet: points of the open union arbitrarily close to them lie in all
// incident balls that admit a common inward direction.
struct SpecialPoint {
    Vec3 point;
    IndexList members;
};

std::vector<SpecialPoint> special_points(const BallUnion& u, int circle_samples) {
    std::vector<SpecialPoint> out;
    UnionSurface s(u.balls(), 0.0, circle_samples);
    auto add = [&](const Vec3& y) {
        IndexList inc = s.incident(y);
        std::vector<Vec3> v;
        for (int t : inc) v.push_back((y - u.center(t)).normalized());  // -v_t
        if (inc.size() > 2 && !(cone_maxmin(v).first > 1e-12)) return;
        IndexList mem = u.containing(y);
        for (int t : inc)
            if (std::find(mem.begin(), mem.end(), t) == mem.end()) mem.push_back(t);
        std::sort(mem.begin(), mem.end());
        out.push_back({y, mem});
    };
    for (const auto& c : s.circles())
        for (const auto& y : s.circle_points(c, circle_samples)) add(y);
    for (int i = 0; i < u.size(); ++i) out.push_back({u.center(i), u.containing(u.center(i))});
    for (const auto& v : s.vertices()) add(v.point);
    return out;
}

IndexList star_members(const BallUnion& u, const IndexList& s) {
    std::vector<char> in(u.size(), 0);
    for (int k : s) {
        in[k] = 1;
        if (u.is_interior(k))
            for (int j : u.neighbors(k)) in[j] = 1;
    }
    IndexList out;
    for (int j = 0; j < u.size(); ++j)
        if (in[j]) out.push_back(j);
    return out;
}

}  // namespace

BnbResult lipschitz_maximize(const std::function<double(const Vec3&)>& f, double lipschitz,
                             const std::function<std::optional<Vec3>(const Vec3&, double)>& feasible_near,
                             const Vec3& lo, const Vec3& hi, double cell, double eps, long max_evaluations) {
    struct Cell {
        double ub;
        Vec3 c;
        double half;  // half side length
        bool operator<(const Cell& o) const { return ub < o.ub; }
    };
    BnbResult res;
    std::priority_queue<Cell> queue;
    auto visit = [&](const Vec3& c, double half) {
        double rho = half * std::sqrt(3.0);
        auto q = feasible_near(c, rho);
        if (!q) return;
        double v = f(*q);
        ++res.evaluations;
        if (v > res.value) {
            res.value = v;
            res.arg = *q;
        }
        double slack = (*q - c).norm() + rho;
        queue.push({v + lipschitz * slack, c, half});
    };
    int n[3];
    for (int a = 0; a < 3; ++a) n[a] = std::max(1, static_cast<int>(std::ceil((hi[a] - lo[a]) / cell)));
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k) visit(lo + cell * Vec3(i + 0.5, j + 0.5, k + 0.5), cell / 2);
    while (!queue.empty() && res.evaluations < max_evaluations) {
        Cell top = queue.top();
        if (top.ub <= res.value + eps) break;
        queue.pop();
        double hh = top.half / 2;
        for (int s = 0; s < 8; ++s)
            visit(top.c + hh * Vec3(s & 1 ? 1 : -1, s & 2 ? 1 : -1, s & 4 ? 1 : -1), hh);
    }
    return res;
}

int n_max(const BallUnion& u) {
    std::size_t m = 0;
    for (int i = 0; i < u.size(); ++i) m = std::max(m, u.neighbors(i).size());
    return static_cast<int>(m);
}

int n_0(const BallUnion& u, double h, int refine_levels, int circle_samples) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    int best = 1;
    Vec3 arg = u.center(0);
    for (const auto& x : grid_nodes(u.lower(), u.upper(), h)) {
        int c = u.multiplicity(x);
        if (c > best) {
            best = c;
            arg = x;
        }
    }
    double step = h;
    for (int level = 0; level < refine_levels; ++level) {
        step /= 2;
        Vec3 centre = arg;
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j)
                for (int k = -2; k <= 2; ++k) {
                    Vec3 x = centre + step * Vec3(i, j, k);
                    int c = u.multiplicity(x);
                    if (c > best) {
                        best = c;
                        arg = x;
                    }
                }
    }
    for (const auto& sp : special_points(u, circle_samples))
        best = std::max(best, static_cast<int>(sp.members.size()));
    return best;
}

int n_0_star(const BallUnion& u, double h, int circle_samples) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    int best = 1;
    for (const auto& x : grid_nodes(u.lower(), u.upper(), h)) {
        IndexList s = u.containing(x);
        if (s.empty()) continue;
        best = std::max(best, static_cast<int>(star_members(u, s).size()));
    }
    for (const auto& sp : special_points(u, circle_samples))
        best = std::max(best, static_cast<int>(star_members(u, sp.members).size()));
    return best;
}

double gamma_int(const BallUnion& u, int samples) {
    if (u.interior_indices().empty()) return kInf;
    const auto dirs = fibonacci_sphere(samples);
    double best = kInf;
    for (int i : u.interior_indices()) {
        const Ball& b = u.ball(i);
        auto project = [&](const Vec3& x) {
            Vec3 d = x - b.center;
            double r = d.norm();
            return r <= b.radius ? x : Vec3(b.center + b.radius * d / r);
        };
        auto delta = [&](const Vec3& x) { return eval_delta(u, x).delta; };
        std::vector<std::pair<double, Vec3>> cand;
        for (const auto& d : dirs) {
            Vec3 x = b.center + b.radius * d;
            cand.emplace_back(delta(x), x);
        }
        const double h = b.radius / 8;
        for (int a = -8; a <= 8; ++a)
            for (int c = -8; c <= 8; ++c)
                for (int e = -8; e <= 8; ++e) {
                    Vec3 x = b.center + h * Vec3(a, c, e);
                    if ((x - b.center).norm() < b.radius) cand.emplace_back(delta(x), x);
                }
        std::sort(cand.begin(), cand.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
        const std::size_t polish = std::min<std::size_t>(5, cand.size());
        for (std::size_t k = 0; k < polish; ++k) {
            auto [v, x] = cand[k];
            double step = b.radius * 2.0 / std::sqrt(static_cast<double>(samples));
            while (step > 1e-9 * b.radius) {
                bool moved = false;
                for (int a = 0; a < 3; ++a)
                    for (int sgn : {-1, 1}) {
                        Vec3 y = project(x + sgn * step * Vec3::Unit(a));
                        double w = delta(y);
                        if (w < v) {
                            v = w;
                            x = y;
                            moved = true;
                        }
                    }
                if (!moved) step /= 2;
            }
            best = std::min(best, v);
        }
    }
    return best;
}

double gamma_b(double beta_inf, double r_min, double r_max) {
    if (!(beta_inf > 0.0)) throw AssumptionError("cone condition fails: beta must be positive");
    if (!(r_min > 0.0) || !(r_max >= r_min)) throw DomainError("radii must satisfy 0 < r_min <= r_max");
    const double alpha = std::numbers::pi / 2 - std::min(beta_inf, std::numbers::pi / 2);
    return std::min({1.0, r_min * (1 - std::sin(alpha)) / (2 * r_max), std::cos(alpha) / 2});
}

namespace {

// min over probe centres x of the exterior fraction of B(p(x), |p(x)-x|),
// where p(x) is the nearest point of the boundary pieces on `patches`.
double fatness_for(const BallUnion& u, const UnionSurface& s, const IndexList& region,
                   const IndexList& patches, int centre_ball, int mc, int points, std::uint64_t seed,
                   int index) {
    auto rng = stream(seed, index, 17);
    Vec3 lo = Vec3::Constant(kInf), hi = Vec3::Constant(-kInf);
    for (int k : region) {
        lo = lo.cwiseMin(u.center(k) - Vec3::Constant(u.radius(k)));
        hi = hi.cwiseMax(u.center(k) + Vec3::Constant(u.radius(k)));
    }
    auto in_region = [&](const Vec3& x) {
        for (int k : region)
            if ((x - u.center(k)).norm() < u.radius(k)) return true;
        return false;
    };
    std::vector<Vec3> xs{u.center(centre_ball)};
    while (static_cast<int>(xs.size()) < points) {
        Vec3 x(lo.x() + (hi.x() - lo.x()) * unit_uniform(rng), lo.y() + (hi.y() - lo.y()) * unit_uniform(rng),
               lo.z() + (hi.z() - lo.z()) * unit_uniform(rng));
        if (in_region(x)) xs.push_back(x);
    }
    double best = kInf;
    for (const auto& x : xs) {
        SurfacePoint p;
        for (int j : patches) {
            SurfacePoint q = s.closest_on_patch(j, x);
            if (q.distance < p.distance) p = q;
        }
        if (!p.found() || p.distance < 1e-12) continue;
        best = std::min(best, exterior_fraction(u, p.point, p.distance, mc, rng));
    }
    return best;
}

}  // namespace

double gamma_f(const BallUnion& u, int mc_samples, int points, std::uint64_t seed) {
    if (mc_samples < 1 || points < 1) throw DomainError("sample counts must be positive");
    UnionSurface s(u.balls());
    const auto& ib = u.boundary_indices();
    std::vector<double> per(ib.size(), kInf);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < static_cast<int>(ib.size()); ++t) {
        int i = ib[t];
        per[t] = fatness_for(u, s, {i}, {i}, i, mc_samples, points, seed, i);
    }
    double best = kInf;
    for (double v : per) best = std::min(best, v);
    return best;
}

double gamma_f_star(const BallUnion& u, int mc_samples, int points, std::uint64_t seed) {
    if (mc_samples < 1 || points < 1) throw DomainError("sample counts must be positive");
    const auto& ib = u.deep_boundary();
    if (ib.empty()) return kInf;
    UnionSurface s(u.balls());
    std::vector<double> per(ib.size(), kInf);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < static_cast<int>(ib.size()); ++t) {
        int i = ib[t];
        IndexList region = u.star_neighbors(i);
        if (std::find(region.begin(), region.end(), i) == region.end()) region.push_back(i);
        std::sort(region.begin(), region.end());
        per[t] = fatness_for(u, s, region, u.neighbors(i), i, mc_samples, points, seed, i);
    }
    double best = kInf;
    for (double v : per) best = std::min(best, v);
    return best;
}

double q_max(const BallUnion& u) {
    double q = 1.0;
    for (int i = 0; i < u.size(); ++i)
        for (int j : u.star_neighbors(i)) q = std::max(q, std::pow(u.radius(i) / u.radius(j), 3));
    return q;
}

namespace {

double max_boundary_distance(const BallUnion& u, double r_p, double h) {
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    UnionSurface s(u.balls(), r_p);
    auto f = [&](const Vec3& x) { return s.boundary_distance(x); };
    auto feas = [&](const Vec3& c, double rho) { return near_union(u, c, rho); };
    const double cell = std::max(h, u.r_min() / 2);
    BnbResult r = lipschitz_maximize(f, 1.0, feas, u.lower(), u.upper(), cell, 1e-3 * h);
    return r.value;
}

}  // namespace

double d_vdw(const BallUnion& u, double h) { return max_boundary_distance(u, 0.0, h); }

double d_ses(const BallUnion& u, double r_p, double h) {
    if (!(r_p >= 0.0)) throw DomainError("probe radius must be nonnegative");
    return max_boundary_distance(u, r_p, h) - r_p;
}

double gamma_lambda(double lambda, double dvdw, double dses) {
    double t = 2 * lambda * dvdw / dses;
    return std::min(t * t * t, 1.0) / 8;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> g(16);
    for (int k = 0; k < 16; ++k) g[k] = std::pow(10.0, -1.0 + 2.0 * k / 15.0);
    return g;
}

DfResult d_F(const BallUnion& u, double h, const std::vector<double>& lambda_grid) {
    auto grid = lambda_grid.empty() ? default_lambda_grid() : lambda_grid;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (!(grid[k] > 0.0) || (k > 0 && !(grid[k] > grid[k - 1])))
            throw DomainError("lambda grid must be positive and increasing");
    const double dv = d_vdw(u, h);
    DfResult res;
    res.d_vdw = dv;
    for (double lam : grid) {
        double ds = d_ses(u, lam * dv, h);
        if (!(ds > 0.0)) continue;  // collapsed SES
        double q = ds / gamma_lambda(lam, dv, ds);
        res.lambdas.push_back(lam);
        res.d_ses.push_back(ds);
        res.quotient.push_back(q);
        if (q < res.d_F) {
            res.d_F = q;
            res.lambda_min = lam;
            res.gamma_F = gamma_lambda(lam, dv, ds);
            res.d_ses_at_min = ds;
        }
    }
    if (res.lambdas.empty()) throw DomainError("no probe radius produced a nonempty SES");
    return res;
}

HardyConstants hardy_constants() {
    const double c1 = 2 / std::numbers::pi, c2 = 14.0, c3 = 4 / std::numbers::ln2;
    return {10 * std::sqrt(10.0), 2 * c1 * (1 + 8 * c2) * c3};
}

double contraction_from_s0(double s0) { return std::sqrt(s0 / (1 + s0)); }

void bound_constants(IndicatorReport& r) {
    const auto hc = hardy_constants();
    r.c_M = hc.c_M;
    r.c_H = hc.c_H;
    if (r.has_interior && !std::isfinite(r.gamma_int))
        throw InconsistencyError("interior balls exist but gamma_int is unset");
    const double n0 = r.n_0;
    const double cmh2 = r.c_M * r.c_M * r.c_H * r.c_H;
    r.C1 = 2 * n0 * (1 + n0 * n0 * cmh2 / (r.gamma_b * r.gamma_b * r.gamma_f * r.gamma_f));
    r.C2 = r.has_interior ? 2 * n0 * n0 / (r.gamma_int * r.gamma_int) : 0.0;
    r.C3 = r.n_max * r.C1;
    r.C4 = 64 * r.C2 * n0 * cmh2;
    r.s0_bound = r.has_interior ? r.C3 + r.C4 * r.d_F * r.d_F : r.C3;
    r.contraction_bound = contraction_from_s0(r.s0_bound);
    r.eig_lower_bound = eig_lower_bound(r.c_H, r.c_M, r.d_F);
}

double eig_lower_bound(double c_H, double c_M, double dF) {
    if (!(c_H > 0 && c_M > 0 && dF > 0)) throw DomainError("constants must be positive");
    return 1.0 / (c_H * c_M * dF);
}

IndicatorReport compute_indicators(const BallUnion& u, const IndicatorConfig& cfg, const std::string& label) {
    const double h = cfg.h > 0 ? cfg.h : u.r_min() / 6;
    IndicatorReport r;
    r.geometry = label;
    r.M = u.size();
    r.has_interior = !u.interior_indices().empty();
    r.n_max = n_max(u);
    r.n_0 = n_0(u, h, cfg.refine_levels, cfg.circle_samples);
    r.n_0_star = n_0_star(u, h, cfg.circle_samples);
    r.gamma_int = gamma_int(u, u.sphere_samples());
    AssumptionReport a = check_assumptions(u, cfg.circle_samples);
    r.beta_min = a.beta_min;
    r.gamma_b = gamma_b(a.beta_min, u.r_min(), u.r_max());
    r.gamma_f = gamma_f(u, cfg.mc_samples, cfg.fatness_points, cfg.seed);
    r.gamma_f_star = gamma_f_star(u, cfg.mc_samples, cfg.fatness_points, cfg.seed);
    r.q_max = q_max(u);
    DfResult df = d_F(u, h, cfg.lambda_grid);
    r.d_vdw = df.d_vdw;
    r.lambda_min_probe = df.lambda_min;
    r.gamma_F = df.gamma_F;
    r.d_ses_at_min = df.d_ses_at_min;
    r.d_F = df.d_F;
    r.mc_samples = cfg.mc_samples;
    r.seed = cfg.seed;
    bound_constants(r);
    return r;
}

}  // namespace ddball
