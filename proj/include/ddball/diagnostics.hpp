#pragma once

#include <ddball/csv.hpp>
#include <ddball/indicators.hpp>
#include <ddball/schwarz.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ddball {

struct CheckResult {
    std::string name;
    bool passed = true;
    bool vacuous = false;  // nothing to sample
    double worst = 0.0;    // largest lhs/rhs ratio (or error) observed
    double limit = 0.0;    // pass threshold for `worst`
    Vec3 witness = Vec3::Zero();
    int samples = 0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult& find(const std::string& name) const;
    CsvTable table(const std::string& geometry) const;
};

// Constants the sampled inequalities are checked against.
struct OverlapConstants {
    int n_0 = 1;
    double gamma_int = kInf;
    double gamma_b = 0.5;
    double beta_inf = 0.0;
};

// n_0, γ_int, γ_b and β^∞ for `u` at grid spacing h (0 selects r_min/6).
OverlapConstants overlap_constants(const BallUnion& u, double h = 0.0);

// Relative slack granted to continuous inequalities.
inline constexpr double kSlack = 0.05;

// Partition-of-unity properties at `samples` random points of the union.
VerifyReport verify_pou(const BallUnion& u, const OverlapConstants& c, int samples = 10000,
                        std::uint64_t seed = 1);

// δ ≥ γ_int on Ω_int, δ ≥ γ_b dist(·,∂Ω^M) on Ω_b and, for two balls, the
// cone estimate δ_i(x) ≥ c_α |x - y|. `scale` multiplies every constant;
// scale = 10 serves as a negative control.
VerifyReport verify_overlap_inequalities(const BallUnion& u, const OverlapConstants& c, int samples = 10000,
                                         std::uint64_t seed = 1, double scale = 1.0);

struct EigenBoundReport {
    double lambda_min = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // lambda_min / bound
    bool passed = false;
};

EigenBoundReport verify_eigen_bound(const GridDomain& g, double d_F);

struct SweepCheckReport {
    double worst_energy_increase = 0.0;  // relative, over all substeps
    double fixed_point_residual = 0.0;   // relative residual after one sweep from the exact solution
    ContractionEstimate contraction;
    bool energy_ok = false;
    bool fixed_point_ok = false;
};

SweepCheckReport verify_sweep(const Schwarz& s, std::uint64_t seed = 1);

struct AdditiveBoundReport {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    int n_0 = 0;
    bool passed = false;
};

// Lanczos λ_max of the additive-preconditioned operator (no coarse term) against n_0.
AdditiveBoundReport verify_additive_bound(const GridDomain& g, const BallUnion& u, int n_0, int iters = 60,
                                          std::uint64_t seed = 1);

// ∫|∇θ_i|² at h, h/2, ..., h/2^levels.
std::vector<double> theta_energy_sequence(const BallUnion& u, int i, double h, int levels = 3);

struct SweepConfig {
    double h = 0.0;  // 0 selects r_min/6
    double tol = 1e-8;
    int max_iters = 500;
    int contraction_sweeps = 20;
    IndicatorConfig indicators;
    bool with_indicators = true;
    bool with_contraction = true;
    std::uint64_t seed = 1;
};

struct SweepRow {
    std::string geometry;
    int M = 0;
    std::string method;
    double h = 0.0;
    double tol = 0.0;
    int iterations = 0;
    double rho = 0.0;
    double d_F = 0.0;
    int n_0 = 0;
    int n_max = 0;
    double s0_bound = 0.0;
    bool converged = false;
};

// Lattice dims for the experiment cases: 1 → (a,b,n), 2 → (a,n,n), 3 → (n,n,n).
std::array<int, 3> case_dims(int which, int n, int a = 1, int b = 1);

std::vector<SweepRow> scaling_sweep(int which, const std::vector<int>& n_list, Method method,
                                    const SweepConfig& cfg, int a = 1, int b = 1, double r = 0.9);
SweepRow run_case(const std::string& label, const BallUnion& u, Method method, const SweepConfig& cfg);
CsvTable sweep_table(const std::vector<SweepRow>& rows);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
// Coefficient of determination of a straight-line fit.
double linear_r2(const std::vector<double>& x, const std::vector<double>& y);

CsvTable indicator_table(const std::vector<IndicatorReport>& reports);

}  // namespace ddball
