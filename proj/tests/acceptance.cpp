// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <ddball/diagnostics.hpp>
#include <ddball/generators.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ddball;

namespace {

constexpr double kH = 0.15;

struct Fixture {
    std::string name;
    BallUnion u;
};

std::vector<Fixture> fixtures() {
    return {
        {"ball:1", BallUnion({{Vec3::Zero(), 1.0}})},
        {"chain:2,2,2", chain(2, 2.0, 2.0)},
        {"chain:2,1,0.9", chain(2, 1.0, 0.9)},
        {"chain:5", chain(5)},
        {"chain:8", chain(8)},
        {"lattice:2,2,2,0.9", lattice(2, 2, 2)},
        {"lattice:3,3,3,0.9", lattice(3, 3, 3)},
    };
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<double>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "/" : "") << format_double(v[i]);
    return s.str();
}

double ratio(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

std::vector<double> iterations(const std::vector<SweepRow>& rows, bool& converged) {
    std::vector<double> it;
    for (const auto& r : rows) {
        it.push_back(r.iterations);
        converged = converged && r.converged;
    }
    return it;
}

SweepConfig sweep_config() {
    SweepConfig cfg;
    cfg.h = kH;
    cfg.tol = 1e-8;
    cfg.with_indicators = false;
    cfg.with_contraction = false;
    return cfg;
}

struct Outcome {
    bool passed;
    std::string detail;
};

Outcome chain_indicator() {
    std::vector<double> d;
    double worst_time = 0.0;
    for (int M : {4, 8, 16}) {
        auto t0 = std::chrono::steady_clock::now();
        d.push_back(d_F(chain(M, 1.0, 0.9), kH).d_F);
        worst_time = std::max(worst_time, seconds_since(t0));
    }
    bool ok = worst_time <= 120.0 && ratio(d) <= 1.1;
    for (double v : d) ok = ok && std::abs(v - 7.2) <= 0.72;
    return {ok, "d_F " + join(d) + ", max/min " + format_double(ratio(d)) + ", slowest " +
                    format_double(worst_time) + " s"};
}

Outcome lattice_indicator() {
    std::vector<double> n{3, 4, 5}, d;
    for (double k : n) d.push_back(d_F(lattice(int(k), int(k), int(k), 0.9), kH).d_F);
    const double r2 = linear_r2(n, d);
    return {r2 >= 0.95, "d_F " + join(d) + ", R^2 " + format_double(r2)};
}

Outcome case12_iterations() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true, converged = true;
    std::string detail;
    for (int a : {1, 4}) {
        auto rows = scaling_sweep(1, {2, 4, 8, 16}, Method::gmres_ms, sweep_config(), a, a);
        auto it = iterations(rows, converged);
        ok = ok && ratio(it) <= 1.5;
        detail += "(" + std::to_string(a) + "," + std::to_string(a) + ",n) " + join(it) + " ratio " +
                  format_double(ratio(it)) + "; ";
    }
    const double t = seconds_since(t0);
    return {ok && converged && t <= 600.0, detail + format_double(t) + " s"};
}

Outcome case3_iterations() {
    bool converged = true;
    auto rows = scaling_sweep(3, {2, 3, 4, 5}, Method::gmres_ms, sweep_config());
    auto it = iterations(rows, converged);
    std::vector<double> M;
    for (const auto& r : rows) M.push_back(r.M);
    bool monotone = true;
    for (std::size_t k = 1; k < it.size(); ++k) monotone = monotone && it[k] > it[k - 1];
    const double slope = loglog_slope(M, it);
    return {converged && monotone && slope >= 0.18 && slope <= 0.48,
            "iterations " + join(it) + ", slope " + format_double(slope)};
}

Outcome coarse_iterations() {
    bool ok = true, converged = true;
    std::string detail;
    for (Method m : {Method::ms_coarse, Method::gmres_ms_coarse}) {
        auto it = iterations(scaling_sweep(3, {2, 3, 4, 5}, m, sweep_config()), converged);
        ok = ok && ratio(it) <= 1.5;
        detail += method_name(m) + " " + join(it) + " ratio " + format_double(ratio(it)) + "; ";
    }
    return {ok && converged, detail};
}

// Runs `check` on every fixture; the detail names the failing ones.
Outcome over_fixtures(const std::vector<Fixture>& fx, const std::function<std::string(const Fixture&)>& check) {
    std::string failed;
    for (const auto& f : fx) {
        std::string why = check(f);
        if (!why.empty()) failed += f.name + " (" + why + ") ";
    }
    return {failed.empty(), failed.empty() ? std::to_string(fx.size()) + " fixtures" : "failed: " + failed};
}

}  // namespace

int main() {
    const auto fx = fixtures();
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"chain d_F constant in M", chain_indicator},
        {"lattice d_F affine in n", lattice_indicator},
        {"gmres-ms iterations bounded for (1,1,n) and (4,4,n)", case12_iterations},
        {"gmres-ms iterations grow like M^(1/3) for (n,n,n)", case3_iterations},
        {"coarse space keeps (n,n,n) iterations bounded", coarse_iterations},
        {"additive lambda_max <= n_0",
         [&] {
             return over_fixtures(fx, [](const Fixture& f) {
                 GridDomain g = build_grid(f.u, kH);
                 auto r = verify_additive_bound(g, f.u, overlap_constants(f.u, kH).n_0);
                 return r.passed ? std::string() : "lambda_max " + format_double(r.lambda_max);
             });
         }},
        {"smallest eigenvalue above (c_H c_M d_F)^-1",
         [&] {
             return over_fixtures(fx, [](const Fixture& f) {
                 GridDomain g = build_grid(f.u, kH);
                 auto r = verify_eigen_bound(g, d_F(f.u, kH).d_F);
                 return r.passed ? std::string() : "lambda_min " + format_double(r.lambda_min);
             });
         }},
        {"partition-of-unity suite on 1e4 points",
         [&] {
             return over_fixtures(fx, [](const Fixture& f) {
                 auto r = verify_pou(f.u, overlap_constants(f.u, kH), 10000, 11);
                 std::string bad;
                 for (const auto& c : r.checks)
                     if (!c.passed) bad += c.name + " ";
                 return bad;
             });
         }},
        {"overlap inequalities hold, x10 controls fail",
         [&] {
             return over_fixtures(fx, [](const Fixture& f) {
                 auto c = overlap_constants(f.u, kH);
                 auto r = verify_overlap_inequalities(f.u, c, 10000, 12);
                 std::string bad;
                 for (const auto& k : r.checks)
                     if (!k.passed) bad += k.name + " ";
                 if (f.u.size() == 2 && r.find("cone_calpha").vacuous) bad += "cone check skipped ";
                 if (verify_overlap_inequalities(f.u, c, 10000, 12, 10.0).all_passed())
                     bad += "negative control passed ";
                 return bad;
             });
         }},
        {"sweep energy monotone, fixed point kept, rho < 1",
         [&] {
             return over_fixtures(fx, [](const Fixture& f) {
                 GridDomain g = build_grid(f.u, kH);
                 Schwarz s(g, f.u, false);
                 auto r = verify_sweep(s, 13);
                 std::string bad;
                 if (!r.energy_ok) bad += "energy " + format_double(r.worst_energy_increase) + " ";
                 if (!r.fixed_point_ok) bad += "fixed point " + format_double(r.fixed_point_residual) + " ";
                 if (!(r.contraction.rho < 1.0)) bad += "rho " + format_double(r.contraction.rho);
                 return bad;
             });
         }},
        {"theta energy diverges under refinement",
         [] {
             auto e = theta_energy_sequence(chain(2, 2.0, 2.0), 0, 0.4, 3);
             bool up = e.size() == 4;
             for (std::size_t k = 1; k < e.size(); ++k) up = up && e[k] > e[k - 1];
             return Outcome{up, "energies " + join(e)};
         }},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.passed;
        std::printf("%s criterion %2zu: %s [%s] (%.1f s)\n", o.passed ? "PASS" : "FAIL", k + 1,
                    criteria[k].first.c_str(), o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
