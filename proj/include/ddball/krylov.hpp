#pragma once

#include <ddball/types.hpp>

#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ddball {

struct LinearOperator {
    int n = 0;
    std::function<void(const Vec&, Vec&)> apply;  // y = Op x; y is resized by apply
    bool symmetric = true;

    Vec operator()(const Vec& x) const {
        Vec y;
        apply(x, y);
        return y;
    }
};

LinearOperator matrix_operator(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& A);
LinearOperator identity_operator(int n);

struct KrylovReport {
    int iterations = 0;
    std::vector<double> residual_history;  // relative residual norms, iterations+1 entries
    bool converged = false;
    bool breakdown = false;
    bool stagnated = false;
    double cond_estimate = 0.0;  // CG only: from the Lanczos coefficients
    std::string status;
};

struct KrylovResult {
    Vec x;
    KrylovReport report;
};

// Preconditioned conjugate gradients from x = 0. Throws if p^T A p <= 0.
KrylovResult cg(const LinearOperator& A, const LinearOperator* M, const Vec& b, double tol, int max_iters);

// Right-preconditioned GMRES from x = 0, modified Gram-Schmidt, no restart.
KrylovResult gmres(const LinearOperator& A, const LinearOperator* M, const Vec& b, double tol, int max_iters);

struct Extremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

// Ritz values of op, self-adjoint in <x,y>_B (B = identity when null), from
// one start vector, with full reorthogonalization.
std::vector<double> lanczos_ritz(const LinearOperator& op, const LinearOperator* B, const Vec& start, int iters);

// Extreme Ritz values of A, or of M A in the A inner product when M is given,
// over `probes` seeded random start vectors.
Extremes lanczos_extremes(const LinearOperator& A, const LinearOperator* M, int probes, int iters,
                          std::uint64_t seed = 1);

// Smallest eigenvalue of a sparse SPD matrix by Krylov-accelerated inverse
// iteration on a sparse Cholesky factor.
double smallest_eigenvalue(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& A, double rel_tol = 1e-10,
                           int max_iters = 300, std::uint64_t seed = 1);

// Seeded standard normal vector.
Vec random_vector(int n, std::uint64_t seed);

}  // namespace ddball
