#pragma once

#include <ddball/geometry.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ddball {

struct IndicatorConfig {
    double h = 0.0;  // 0 selects r_min/6
    int circle_samples = 64;
    int mc_samples = 100000;
    int fatness_points = 16;  // probe centres per boundary ball
    int refine_levels = 3;
    std::vector<double> lambda_grid;  // empty selects the default grid
    std::uint64_t seed = 1;
};

struct IndicatorReport {
    std::string geometry;
    int M = 0;
    int n_max = 0;
    int n_0 = 0;
    int n_0_star = 0;
    double gamma_int = kInf;  // +inf when there are no interior balls
    double gamma_b = 0.0;
    double gamma_f = 0.0;
    double gamma_f_star = kInf;  // +inf when I_b* is empty
    double q_max = 1.0;
    double d_vdw = 0.0;
    double lambda_min_probe = 0.0;
    double gamma_F = 0.0;
    double d_ses_at_min = 0.0;
    double d_F = 0.0;
    double c_M = 0.0;
    double c_H = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
    double s0_bound = 0.0;
    double contraction_bound = 0.0;
    double eig_lower_bound = 0.0;
    double beta_min = 0.0;
    int mc_samples = 0;
    std::uint64_t seed = 0;
    bool has_interior = false;
};

struct DfResult {
    double d_F = kInf;
    double lambda_min = 0.0;
    double gamma_F = 0.0;
    double d_ses_at_min = 0.0;
    double d_vdw = 0.0;
    std::vector<double> lambdas, d_ses, quotient;  // per evaluated λ
};

struct HardyConstants {
    double c_M;
    double c_H;
};

int n_max(const BallUnion& u);
int n_0(const BallUnion& u, double h, int refine_levels = 3, int circle_samples = 64);
int n_0_star(const BallUnion& u, double h, int circle_samples = 64);
double gamma_int(const BallUnion& u, int samples = 2000);
double gamma_b(double beta_inf, double r_min, double r_max);
double gamma_f(const BallUnion& u, int mc_samples, int points = 16, std::uint64_t seed = 1);
double gamma_f_star(const BallUnion& u, int mc_samples, int points = 16, std::uint64_t seed = 1);
double q_max(const BallUnion& u);

// max over the closed union of the distance to its boundary.
double d_vdw(const BallUnion& u, double h);
// max over the closed union of the distance to the SES at probe radius r_p.
double d_ses(const BallUnion& u, double r_p, double h);
double gamma_lambda(double lambda, double d_vdw, double d_ses);
std::vector<double> default_lambda_grid();
DfResult d_F(const BallUnion& u, double h, const std::vector<double>& lambda_grid = {});

HardyConstants hardy_constants();
// Fills C1..C4, s0_bound, contraction_bound from the indicator fields.
void bound_constants(IndicatorReport& r);
double contraction_from_s0(double s0);
double eig_lower_bound(double c_H, double c_M, double d_F);

IndicatorReport compute_indicators(const BallUnion& u, const IndicatorConfig& cfg,
                                   const std::string& label = "");

// Lipschitz branch and bound for max f over a region. `feasible_near(c, rho)`
// returns a point of the region within rho of c, or nothing if the cell of
// half-diagonal rho around c misses the region.
struct BnbResult {
    double value = -kInf;
    Vec3 arg = Vec3::Zero();
    long evaluations = 0;
};
BnbResult lipschitz_maximize(const std::function<double(const Vec3&)>& f, double lipschitz,
                             const std::function<std::optional<Vec3>(const Vec3&, double)>& feasible_near,
                             const Vec3& lo, const Vec3& hi, double cell, double eps,
                             long max_evaluations = 2'000'000);

}  // namespace ddball
