#include <ddball/diagnostics.hpp>
#include <ddball/generators.hpp>
#include <ddball/pou.hpp>
#include <ddball/surface.hpp>

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ddball {

namespace {

struct Sampler {
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform() { return (rng() >> 11) * 0x1.0p-53; }
    Vec3 in_box(const Vec3& lo, const Vec3& hi) {
        return Vec3(lo.x() + (hi.x() - lo.x()) * uniform(), lo.y() + (hi.y() - lo.y()) * uniform(),
                    lo.z() + (hi.z() - lo.z()) * uniform());
    }
    Vec3 on_sphere() {
        double z = 2 * uniform() - 1, phi = 2 * std::numbers::pi * uniform();
        double s = std::sqrt(std::max(0.0, 1 - z * z));
        return Vec3(s * std::cos(phi), s * std::sin(phi), z);
    }
    std::mt19937_64 rng;
};

// Uniform points of the union of the listed balls.
std::vector<Vec3> sample_region(const BallUnion& u, const IndexList& balls, int n, Sampler& s) {
    std::vector<Vec3> pts;
    if (balls.empty()) return pts;
    Vec3 lo = Vec3::Constant(kInf), hi = Vec3::Constant(-kInf);
    for (int i : balls) {
        lo = lo.cwiseMin(u.center(i) - Vec3::Constant(u.radius(i)));
        hi = hi.cwiseMax(u.center(i) + Vec3::Constant(u.radius(i)));
    }
    while (static_cast<int>(pts.size()) < n) {
        Vec3 x = s.in_box(lo, hi);
        for (int i : balls)
            if ((x - u.center(i)).norm() < u.radius(i)) {
                pts.push_back(x);
                break;
            }
    }
    return pts;
}

IndexList all_balls(const BallUnion& u) {
    IndexList v(u.size());
    for (int i = 0; i < u.size(); ++i) v[i] = i;
    return v;
}

void observe(CheckResult& c, double ratio, const Vec3& x) {
    ++c.samples;
    if (ratio > c.worst) {
        c.worst = ratio;
        c.witness = x;
    }
}

void finish(CheckResult& c) {
    if (c.samples == 0) c.vacuous = true;
    c.passed = c.vacuous || c.worst <= c.limit;
}

}  // namespace

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult& VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw Error("no check named '" + name + "'");
}

CsvTable VerifyReport::table(const std::string& geometry) const {
    CsvTable t({"geometry", "check", "passed", "vacuous", "worst", "limit", "samples", "witness_x", "witness_y",
                "witness_z"});
    for (const auto& c : checks)
        t.add_row({geometry, c.name, c.passed ? "1" : "0", c.vacuous ? "1" : "0", format_double(c.worst),
                   format_double(c.limit), std::to_string(c.samples), format_double(c.witness.x()),
                   format_double(c.witness.y()), format_double(c.witness.z())});
    return t;
}

OverlapConstants overlap_constants(const BallUnion& u, double h) {
    if (!(h > 0.0)) h = u.r_min() / 6;
    OverlapConstants c;
    c.n_0 = n_0(u, h);
    c.gamma_int = gamma_int(u, u.sphere_samples());
    AssumptionReport a = check_assumptions(u);
    c.beta_inf = a.beta_min;
    c.gamma_b = gamma_b(a.beta_min, u.r_min(), u.r_max());
    return c;
}

VerifyReport verify_pou(const BallUnion& u, const OverlapConstants& c, int samples, std::uint64_t seed) {
    Sampler s(seed);
    UnionSurface surf(u.balls());
    CheckResult sum{"pou_sum"}, range{"pou_range"}, support{"pou_support"}, grad{"pou_gradient_fd"},
        eq2{"pou_grad_bound"}, pu2{"pou_interior_bound"}, pu3{"pou_boundary_bound"};
    sum.limit = 1e-12;
    range.limit = 0.0;
    support.limit = 0.0;
    grad.limit = 1e-4;
    eq2.limit = 1.0 + 1e-9;
    pu2.limit = 1.0 + kSlack;
    pu3.limit = 1.0 + kSlack;
    const double fd = 1e-5 * u.r_min();
    const double kink = 1e-2 * u.r_min();
    for (const auto& x : sample_region(u, all_balls(u), samples, s)) {
        PouValue p = eval_theta(u, x);
        double total = 0.0;
        double out_of_range = 0.0, off_support = 0.0;
        for (std::size_t k = 0; k < p.active.size(); ++k) {
            total += p.theta[k];
            out_of_range = std::max({out_of_range, -p.theta[k], p.theta[k] - 1.0});
            double gap = (x - u.center(p.active[k])).norm() - u.radius(p.active[k]);
            if (gap >= 0.0) off_support = std::max(off_support, std::abs(p.theta[k]));
        }
        for (int j = 0; j < u.size(); ++j)
            if ((x - u.center(j)).norm() >= u.radius(j)) off_support = std::max(off_support, std::abs(p.theta_of(j)));
        observe(sum, std::abs(total - 1.0), x);
        observe(range, out_of_range, x);
        observe(support, off_support, x);

        bool smooth = true;
        for (int j = 0; j < u.size(); ++j) {
            double r = (x - u.center(j)).norm();
            if (std::abs(r - u.radius(j)) <= kink || r <= kink) smooth = false;
        }
        const double dist = surf.boundary_distance(x);
        for (std::size_t k = 0; k < p.active.size(); ++k) {
            const int i = p.active[k];
            const double g = p.grad_theta[k].norm();
            if (smooth) {
                Vec3 gfd;
                for (int a = 0; a < 3; ++a) {
                    Vec3 e = fd * Vec3::Unit(a);
                    gfd[a] = (eval_theta(u, x + e).theta_of(i) - eval_theta(u, x - e).theta_of(i)) / (2 * fd);
                }
                observe(grad, (gfd - p.grad_theta[k]).norm() / std::max(g, 1e-6), x);
            }
            observe(eq2, g * p.delta / c.n_0, x);
            if (u.is_interior(i))
                observe(pu2, g * c.gamma_int / c.n_0, x);
            else
                observe(pu3, g * c.gamma_b * dist / c.n_0, x);
        }
    }
    VerifyReport rep;
    for (auto* ch : {&sum, &range, &support, &grad, &eq2, &pu2, &pu3}) {
        finish(*ch);
        rep.checks.push_back(*ch);
    }
    return rep;
}

VerifyReport verify_overlap_inequalities(const BallUnion& u, const OverlapConstants& c, int samples,
                                         std::uint64_t seed, double scale) {
    Sampler s(seed);
    UnionSurface surf(u.balls());
    CheckResult o1{"overlap_interior"}, o3{"overlap_boundary"}, ca{"cone_calpha"};
    o1.limit = 1.0 + kSlack;
    o3.limit = 1.0 + kSlack;
    ca.limit = 1.0 + 1e-9;
    for (const auto& x : sample_region(u, u.interior_indices(), samples, s))
        observe(o1, scale * c.gamma_int / eval_delta(u, x).delta, x);
    for (const auto& x : sample_region(u, u.boundary_indices(), samples, s))
        observe(o3, scale * c.gamma_b * surf.boundary_distance(x) / eval_delta(u, x).delta, x);

    if (u.size() == 2) {
        const double alpha = std::numbers::pi / 2 - std::min(c.beta_inf, std::numbers::pi / 2);
        const double calpha = std::cos(alpha) / 2;
        int taken = 0, guard = 0;
        while (taken < samples && guard < 200 * samples) {
            ++guard;
            const int i = static_cast<int>(s.uniform() * 2) % 2;
            const Ball& b = u.ball(i);
            Vec3 y = b.center + b.radius * s.on_sphere();
            if (surf.covered(y)) continue;
            Vec3 v = (b.center - y) / b.radius;
            Vec3 e1 = (std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY());
            e1 = (e1 - e1.dot(v) * v).normalized();
            Vec3 e2 = v.cross(e1);
            double cphi = 1 - (1 - std::cos(alpha)) * s.uniform();
            double sphi = std::sqrt(std::max(0.0, 1 - cphi * cphi));
            double az = 2 * std::numbers::pi * s.uniform();
            Vec3 d = cphi * v + sphi * (std::cos(az) * e1 + std::sin(az) * e2);
            // Near half of the cone only: past |x - y| = R cos α the ray
            // heads for its exit point where δ_i vanishes.
            Vec3 x = y + b.radius * std::cos(alpha) * s.uniform() * d;
            double r = (x - b.center).norm();
            if (!(r < b.radius && r >= b.radius * std::sin(alpha))) continue;
            double di = b.radius - r;
            observe(ca, scale * calpha * (x - y).norm() / di, x);
            ++taken;
        }
    }
    VerifyReport rep;
    for (auto* ch : {&o1, &o3, &ca}) {
        finish(*ch);
        rep.checks.push_back(*ch);
    }
    return rep;
}

EigenBoundReport verify_eigen_bound(const GridDomain& g, double dF) {
    EigenBoundReport r;
    const auto hc = hardy_constants();
    r.lambda_min = smallest_eigenvalue(g.laplacian);
    r.bound = eig_lower_bound(hc.c_H, hc.c_M, dF);
    r.slack = r.lambda_min / r.bound;
    r.passed = r.lambda_min >= r.bound;
    return r;
}

SweepCheckReport verify_sweep(const Schwarz& s, std::uint64_t seed) {
    SweepCheckReport rep;
    const SparseMatrix& A = s.grid().laplacian;
    const int n = s.grid().num_dofs();

    // Error propagation with b = 0: the energy e^T A e = -e^T r must not grow.
    Vec u = random_vector(n, seed);
    Vec r = -(A * u);
    double prev = -u.dot(r);
    const double start = prev;
    s.sweep(u, r, [&](int, const Vec& uu, const Vec& rr) {
        double e = -uu.dot(rr);
        rep.worst_energy_increase = std::max(rep.worst_energy_increase, (e - prev) / start);
        prev = e;
    });
    rep.energy_ok = rep.worst_energy_increase <= 1e-12 && prev < start;

    Vec b = random_vector(n, seed + 1);
    Eigen::SparseMatrix<double> Ac = A;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Ac);
    Vec x = ldlt.solve(b);
    Vec rx = b - A * x;
    s.sweep(x, rx);
    rep.fixed_point_residual = (b - A * x).norm() / b.norm();
    rep.fixed_point_ok = rep.fixed_point_residual <= 1e-10;

    rep.contraction = estimate_contraction(s, 20, seed + 2);
    return rep;
}

AdditiveBoundReport verify_additive_bound(const GridDomain& g, const BallUnion& u, int n0, int iters,
                                          std::uint64_t seed) {
    Schwarz s(g, u, false);
    LinearOperator A = s.operator_A(), M = s.additive_preconditioner();
    Extremes e = lanczos_extremes(A, &M, 3, iters, seed);
    AdditiveBoundReport r;
    r.lambda_max = e.lambda_max;
    r.lambda_min = e.lambda_min;
    r.n_0 = n0;
    r.passed = e.lambda_max <= n0 + 1e-6;
    return r;
}

std::vector<double> theta_energy_sequence(const BallUnion& u, int i, double h, int levels) {
    std::vector<double> out;
    for (int l = 0; l <= levels; ++l) out.push_back(theta_energy_on_grid(u, i, h / std::pow(2.0, l)));
    return out;
}

std::array<int, 3> case_dims(int which, int n, int a, int b) {
    switch (which) {
        case 1: return {a, b, n};
        case 2: return {a, n, n};
        case 3: return {n, n, n};
    }
    throw Error("case must be 1, 2 or 3");
}

SweepRow run_case(const std::string& label, const BallUnion& u, Method method, const SweepConfig& cfg) {
    const double h = cfg.h > 0 ? cfg.h : u.r_min() / 6;
    GridDomain g = build_grid(u, h);
    Schwarz s(g, u, uses_coarse(method));
    Vec b = assemble_rhs(g, 1.0);
    SolveReport sr = solve(s, b, method, cfg.tol, cfg.max_iters);
    SweepRow row;
    row.geometry = label;
    row.M = u.size();
    row.method = sr.method;
    row.h = h;
    row.tol = cfg.tol;
    row.iterations = sr.iterations;
    row.converged = sr.converged;
    row.rho = cfg.with_contraction ? estimate_contraction(s, cfg.contraction_sweeps, cfg.seed).rho : 0.0;
    if (cfg.with_indicators) {
        IndicatorConfig ic = cfg.indicators;
        ic.h = h;
        ic.seed = cfg.seed;
        IndicatorReport ir = compute_indicators(u, ic, label);
        row.d_F = ir.d_F;
        row.n_0 = ir.n_0;
        row.n_max = ir.n_max;
        row.s0_bound = ir.s0_bound;
    } else {
        row.n_max = n_max(u);
    }
    return row;
}

std::vector<SweepRow> scaling_sweep(int which, const std::vector<int>& n_list, Method method,
                                    const SweepConfig& cfg, int a, int b, double r) {
    std::vector<SweepRow> rows;
    for (int n : n_list) {
        auto d = case_dims(which, n, a, b);
        std::string label = "lattice:" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," +
                            std::to_string(d[2]) + "," + format_double(r);
        rows.push_back(run_case(label, lattice(d[0], d[1], d[2], r), method, cfg));
    }
    return rows;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
    CsvTable t({"geometry", "M", "method", "h", "tol", "iterations", "rho", "d_F", "n_0", "n_max", "s0_bound",
                "converged"});
    for (const auto& r : rows)
        t.add_row({r.geometry, std::to_string(r.M), r.method, format_double(r.h), format_double(r.tol),
                   std::to_string(r.iterations), format_double(r.rho), format_double(r.d_F), std::to_string(r.n_0),
                   std::to_string(r.n_max), format_double(r.s0_bound), r.converged ? "1" : "0"});
    return t;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < x.size(); ++k) {
        lx.push_back(std::log(x[k]));
        ly.push_back(std::log(y[k]));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        mx += lx[k] / n;
        my += ly[k] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    return sxy / sxx;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k] / n;
        my += y[k] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (syy == 0.0) return 1.0;
    return sxy * sxy / (sxx * syy);
}

CsvTable indicator_table(const std::vector<IndicatorReport>& reports) {
    CsvTable t({"geometry", "M", "n_max", "n_0", "n_0_star", "gamma_int", "gamma_b", "gamma_f", "gamma_f_star",
                "q_max", "d_vdw", "lambda_min_probe", "gamma_F", "d_ses_at_min", "d_F", "c_M", "c_H", "C1", "C2",
                "C3", "C4", "s0_bound", "contraction_bound", "eig_lower_bound", "beta_min", "mc_samples", "seed"});
    for (const auto& r : reports)
        t.add_row({r.geometry, std::to_string(r.M), std::to_string(r.n_max), std::to_string(r.n_0),
                   std::to_string(r.n_0_star), format_double(r.gamma_int), format_double(r.gamma_b),
                   format_double(r.gamma_f), format_double(r.gamma_f_star), format_double(r.q_max),
                   format_double(r.d_vdw), format_double(r.lambda_min_probe), format_double(r.gamma_F),
                   format_double(r.d_ses_at_min), format_double(r.d_F), format_double(r.c_M), format_double(r.c_H),
                   format_double(r.C1), format_double(r.C2), format_double(r.C3), format_double(r.C4),
                   format_double(r.s0_bound), format_double(r.contraction_bound), format_double(r.eig_lower_bound),
                   format_double(r.beta_min), std::to_string(r.mc_samples), std::to_string(r.seed)});
    return t;
}

}  // namespace ddball
