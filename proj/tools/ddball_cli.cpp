#include <ddball/diagnostics.hpp>
#include <ddball/generators.hpp>
#include <ddball/grid.hpp>
#include <ddball/indicators.hpp>
#include <ddball/schwarz.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace ddball;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::vector<std::string> geometry;
    double h = 0.0;
    std::string method = "gmres-ms";
    double tol = 1e-8;
    int max_iters = 500;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string csv;
    std::vector<double> lambda_grid;
    int mc_samples = 100000;
    int sphere_samples = 2000;
    int circle_samples = 64;
    bool strict_overlap = false;
    bool history = false;

    int which = 3;
    std::vector<int> n_list{2, 3, 4, 5};
    int a = 1, b = 1;
    double radius = 0.9;
    bool no_indicators = false;
    bool no_contraction = false;

    int samples = 10000;
};

double spacing_for(const BallUnion& u, double h) { return h > 0.0 ? h : u.r_min() / 6; }

IndicatorConfig indicator_config(const Options& o) {
    IndicatorConfig c;
    c.h = o.h;
    c.circle_samples = o.circle_samples;
    c.mc_samples = o.mc_samples;
    c.lambda_grid = o.lambda_grid;
    c.seed = o.seed;
    return c;
}

void require_geometry(const Options& o) {
    if (o.geometry.empty()) throw CLI::RequiredError("--geometry");
}

int run_indicators(const Options& o) {
    require_geometry(o);
    std::vector<IndicatorReport> reports;
    for (const auto& spec : o.geometry) {
        BallUnion u = union_from_spec(spec, o.sphere_samples);
        reports.push_back(compute_indicators(u, indicator_config(o), spec));
    }
    indicator_table(reports).save(o.csv);
    return kExitOk;
}

int run_solve(const Options& o) {
    require_geometry(o);
    const Method method = parse_method(o.method);
    CsvTable summary({"geometry", "M", "method", "h", "tol", "dofs", "coarse_dim", "iterations", "final_residual",
                      "energy", "converged", "status"});
    CsvTable history({"geometry", "method", "iteration", "relative_residual"});
    bool all_converged = true;
    for (const auto& spec : o.geometry) {
        BallUnion u = union_from_spec(spec, o.sphere_samples);
        const double h = spacing_for(u, o.h);
        GridDomain g = build_grid(u, h);
        Schwarz s(g, u, uses_coarse(method), o.strict_overlap);
        for (auto [i, j] : s.solvers().unresolved_pairs())
            std::cerr << "warning: overlap of balls " << i << " and " << j << " holds no grid node at h = " << h
                      << "\n";
        Vec rhs = assemble_rhs(g, 1.0);
        SolveReport r = solve(s, rhs, method, o.tol, o.max_iters);
        all_converged = all_converged && r.converged;
        const double final_res = r.residual_history.empty() ? 0.0 : r.residual_history.back();
        const double energy = r.energy_history.empty() ? 0.0 : r.energy_history.back();
        summary.add_row({spec, std::to_string(u.size()), r.method, format_double(h), format_double(o.tol),
                         std::to_string(r.dofs), std::to_string(r.coarse_dim), std::to_string(r.iterations),
                         format_double(final_res), format_double(energy), r.converged ? "1" : "0", r.status});
        for (std::size_t k = 0; k < r.residual_history.size(); ++k)
            history.add_row({spec, r.method, std::to_string(k), format_double(r.residual_history[k])});
    }
    (o.history ? history : summary).save(o.csv);
    return all_converged ? kExitOk : kExitFailed;
}

int run_sweep(const Options& o) {
    if (o.which < 1 || o.which > 3) throw CLI::ValidationError("--case", "must be 1, 2 or 3");
    if (o.n_list.empty()) throw CLI::ValidationError("--n", "needs at least one value");
    SweepConfig cfg;
    cfg.h = o.h;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.indicators = indicator_config(o);
    cfg.with_indicators = !o.no_indicators;
    cfg.with_contraction = !o.no_contraction;
    cfg.seed = o.seed;
    auto rows = scaling_sweep(o.which, o.n_list, parse_method(o.method), cfg, o.a, o.b, o.radius);
    sweep_table(rows).save(o.csv);
    if (o.which == 3 && rows.size() >= 2) {
        std::vector<double> m, it;
        for (const auto& r : rows) {
            m.push_back(r.M);
            it.push_back(r.iterations);
        }
        std::cerr << "log-log slope of iterations vs M: " << format_double(loglog_slope(m, it)) << "\n";
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.converged;
    return ok ? kExitOk : kExitFailed;
}

CheckResult scalar_check(const std::string& name, double worst, double limit, bool passed) {
    CheckResult c;
    c.name = name;
    c.worst = worst;
    c.limit = limit;
    c.passed = passed;
    c.samples = 1;
    return c;
}

int run_verify(const Options& o) {
    require_geometry(o);
    CsvTable out({"geometry", "check", "passed", "vacuous", "worst", "limit", "samples", "witness_x", "witness_y",
                  "witness_z"});
    bool ok = true;
    for (const auto& spec : o.geometry) {
        BallUnion u = union_from_spec(spec, o.sphere_samples);
        const double h = spacing_for(u, o.h);
        OverlapConstants c = overlap_constants(u, h);

        VerifyReport rep = verify_pou(u, c, o.samples, o.seed);
        VerifyReport ov = verify_overlap_inequalities(u, c, o.samples, o.seed);
        rep.checks.insert(rep.checks.end(), ov.checks.begin(), ov.checks.end());

        // Inflated constants must be caught by at least one non-vacuous check.
        VerifyReport neg = verify_overlap_inequalities(u, c, o.samples, o.seed, 10.0);
        bool any_sampled = false;
        for (const auto& k : neg.checks) any_sampled = any_sampled || !k.vacuous;
        CheckResult control = scalar_check("overlap_negative_control", neg.all_passed() ? 1.0 : 0.0, 0.0,
                                           !any_sampled || !neg.all_passed());
        control.vacuous = !any_sampled;
        rep.checks.push_back(control);

        GridDomain g = build_grid(u, h);
        DfResult df = d_F(u, h, o.lambda_grid);
        EigenBoundReport eb = verify_eigen_bound(g, df.d_F);
        rep.checks.push_back(scalar_check("eigen_lower_bound", eb.bound / eb.lambda_min, 1.0, eb.passed));

        AdditiveBoundReport ab = verify_additive_bound(g, u, c.n_0, 60, o.seed);
        rep.checks.push_back(scalar_check("additive_lambda_max", ab.lambda_max, c.n_0 + 1e-6, ab.passed));

        Schwarz s(g, u, false, o.strict_overlap);
        SweepCheckReport sw = verify_sweep(s, o.seed);
        rep.checks.push_back(scalar_check("sweep_energy", sw.worst_energy_increase, 1e-12, sw.energy_ok));
        rep.checks.push_back(scalar_check("sweep_fixed_point", sw.fixed_point_residual, 1e-10, sw.fixed_point_ok));
        rep.checks.push_back(scalar_check("sweep_contraction", sw.contraction.rho, 1.0, sw.contraction.rho < 1.0));

        ok = ok && rep.all_passed();
        const CsvTable t = rep.table(spec);
        for (const auto& row : t.rows()) out.add_row(row);
    }
    out.save(o.csv);
    return ok ? kExitOk : kExitFailed;
}

int run_eig(const Options& o) {
    require_geometry(o);
    CsvTable out({"geometry", "M", "h", "dofs", "lambda_min", "eig_lower_bound", "slack", "n_0", "additive_lambda_max",
                  "additive_lambda_min", "passed"});
    bool ok = true;
    for (const auto& spec : o.geometry) {
        BallUnion u = union_from_spec(spec, o.sphere_samples);
        const double h = spacing_for(u, o.h);
        GridDomain g = build_grid(u, h);
        DfResult df = d_F(u, h, o.lambda_grid);
        EigenBoundReport eb = verify_eigen_bound(g, df.d_F);
        const int n0 = n_0(u, h);
        AdditiveBoundReport ab = verify_additive_bound(g, u, n0, 60, o.seed);
        const bool passed = eb.passed && ab.passed;
        ok = ok && passed;
        out.add_row({spec, std::to_string(u.size()), format_double(h), std::to_string(g.num_dofs()),
                     format_double(eb.lambda_min), format_double(eb.bound), format_double(eb.slack),
                     std::to_string(n0), format_double(ab.lambda_max), format_double(ab.lambda_min),
                     passed ? "1" : "0"});
    }
    out.save(o.csv);
    return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Schwarz domain decomposition and geometry indicators for unions of balls"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");

    const std::string common = "Common";
    app.add_option("-g,--geometry", o.geometry,
                   "lattice:nx,ny,nz[,r], chain:M[,spacing[,r]] or an xyzr file (repeatable)")
        ->group(common);
    app.add_option("--h", o.h, "grid spacing (default r_min/6)")->check(CLI::NonNegativeNumber)->group(common);
    app.add_option("--method", o.method, "ms, ms+coarse, pcg-as, pcg-as+coarse, gmres-ms, gmres-ms+coarse")
        ->capture_default_str()
        ->group(common);
    app.add_option("--tol", o.tol, "relative residual tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(common);
    app.add_option("--max-iters", o.max_iters)->capture_default_str()->check(CLI::PositiveNumber)->group(common);
    app.add_option("--seed", o.seed)->capture_default_str()->group(common);
    app.add_option("--threads", o.threads, "worker threads (0 keeps the runtime default)")
        ->check(CLI::NonNegativeNumber)
        ->group(common);
    app.add_option("--csv", o.csv, "output path (default standard output)")->group(common);
    app.add_option("--lambda-grid", o.lambda_grid, "comma-separated probe radius factors")
        ->delimiter(',')
        ->group(common);
    app.add_option("--mc-samples", o.mc_samples)->capture_default_str()->check(CLI::PositiveNumber)->group(common);
    app.add_option("--sphere-samples", o.sphere_samples, "cover-test points per sphere")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(common);
    app.add_option("--circle-samples", o.circle_samples)
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->group(common);
    app.add_flag("--strict-overlap", o.strict_overlap, "fail when a ball overlap holds no grid node")->group(common);

    const std::string sweep_group = "Sweep";
    app.add_option("--case", o.which, "1: (a,b,n), 2: (a,n,n), 3: (n,n,n)")
        ->capture_default_str()
        ->group(sweep_group);
    app.add_option("--n", o.n_list, "comma-separated lattice sizes")->delimiter(',')->group(sweep_group);
    app.add_option("--a", o.a)->capture_default_str()->check(CLI::PositiveNumber)->group(sweep_group);
    app.add_option("--b", o.b)->capture_default_str()->check(CLI::PositiveNumber)->group(sweep_group);
    app.add_option("--radius", o.radius)->capture_default_str()->check(CLI::PositiveNumber)->group(sweep_group);
    app.add_flag("--no-indicators", o.no_indicators, "skip d_F, n_0 and s0_bound columns")->group(sweep_group);
    app.add_flag("--no-contraction", o.no_contraction, "skip the rho column")->group(sweep_group);

    app.add_flag("--history", o.history, "solve: print the residual history instead of the summary");
    app.add_option("--samples", o.samples, "verify: random points per check")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    auto* sub_ind = app.add_subcommand("indicators", "local and global geometry indicators, one CSV row per geometry");
    auto* sub_solve = app.add_subcommand("solve", "solve -Δu = 1 with a Schwarz method");
    auto* sub_sweep = app.add_subcommand("sweep", "iteration scaling over lattice sizes");
    auto* sub_verify = app.add_subcommand("verify", "sampled checks of partition-of-unity and solver bounds");
    auto* sub_eig = app.add_subcommand("eig", "smallest Laplacian eigenvalue and additive spectrum bounds");
    for (auto* s : {sub_ind, sub_solve, sub_sweep, sub_verify, sub_eig}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

#ifdef _OPENMP
    if (o.threads > 0) omp_set_num_threads(o.threads);
#endif

    try {
        if (sub_ind->parsed()) return run_indicators(o);
        if (sub_solve->parsed()) return run_solve(o);
        if (sub_sweep->parsed()) return run_sweep(o);
        if (sub_verify->parsed()) return run_verify(o);
        if (sub_eig->parsed()) return run_eig(o);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InconsistencyError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
