#pragma once

#include <ddball/geometry.hpp>

#include <vector>

namespace ddball {

struct DeltaValue {
    IndexList active;              // balls with δ_i(x) > 0
    std::vector<double> delta_i;   // aligned with active
    double delta = 0.0;
};

struct PouValue {
    Vec3 point = Vec3::Zero();
    IndexList active;
    std::vector<double> delta_i;
    double delta = 0.0;
    std::vector<double> theta;
    std::vector<Vec3> grad_theta;

    // θ_i(x) and ∇θ_i(x); zero for inactive i.
    double theta_of(int i) const;
    Vec3 grad_of(int i) const;
};

DeltaValue eval_delta(const BallUnion& u, const Vec3& x);

// Gradient of δ_i; zero outside Ω_i and at the centre.
Vec3 grad_delta(const Ball& b, const Vec3& x);

// Throws DomainError when δ(x) = 0.
PouValue eval_theta(const BallUnion& u, const Vec3& x);

// Midpoint rule for ∫_{Ω_i} |∇θ_i|² over cells of width h.
double theta_energy_on_grid(const BallUnion& u, int i, double h);

}  // namespace ddball
