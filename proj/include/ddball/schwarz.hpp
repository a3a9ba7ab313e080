#pragma once

#include <ddball/grid.hpp>
#include <ddball/krylov.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ddball {

using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Exact solvers for the principal submatrices A_ii, i = ball index.
class SubdomainSolverSet {
public:
    SubdomainSolverSet(const GridDomain& g, const BallUnion& u, bool strict_overlap = false);

    int size() const { return static_cast<int>(dofs_.size()); }
    const IndexList& dofs(int i) const { return dofs_[i]; }
    const std::vector<IndexList>& all_dofs() const { return dofs_; }
    // Neighbouring pairs whose overlap lies below the grid resolution.
    const std::vector<std::pair<int, int>>& unresolved_pairs() const { return unresolved_; }
    Vec solve(int i, const Vec& local_rhs) const { return factors_[i]->solve(local_rhs); }
    // Largest relative residual of a seeded probe solve over all subdomains.
    double probe_residual(std::uint64_t seed = 1) const;

private:
    const SparseMatrix* A_;
    std::vector<IndexList> dofs_;
    std::vector<std::pair<int, int>> unresolved_;
    std::vector<ColSparse> blocks_;
    std::vector<std::unique_ptr<Eigen::SimplicialLLT<ColSparse>>> factors_;
};

// Coarse space spanned by θ_i, i ∈ I_int, at the DOFs.
struct CoarseSpace {
    IndexList balls;
    ColSparse basis;   // n x n_c
    ColSparse a_basis; // A * basis
    Eigen::MatrixXd op;  // basis^T A basis
    Eigen::LLT<Eigen::MatrixXd> factor;

    int dim() const { return static_cast<int>(balls.size()); }
};

// Throws DomainError when I_int is empty.
CoarseSpace build_coarse_space(const GridDomain& g, const BallUnion& u);

// Q_0 v = Σ_{i∈I_int} v̄_i θ_i with v̄_i the mean of v over the DOFs of Ω_i.
Vec coarse_interpolate(const CoarseSpace& c, const SubdomainSolverSet& s, const Vec& v);

class Schwarz {
public:
    Schwarz(const GridDomain& g, const BallUnion& u, bool use_coarse, bool strict_overlap = false);

    const GridDomain& grid() const { return *grid_; }
    const SubdomainSolverSet& solvers() const { return solvers_; }
    bool has_coarse() const { return coarse_.has_value(); }
    const CoarseSpace* coarse() const { return coarse_ ? &*coarse_ : nullptr; }
    int coarse_dim() const { return coarse_ ? coarse_->dim() : 0; }

    // One successive pass (coarse first, then balls in index order) on u
    // with r = b - A u kept current. `after` sees (substep, u, r); substep -1
    // is the coarse correction.
    void sweep(Vec& u, Vec& r, const std::function<void(int, const Vec&, const Vec&)>& after = {}) const;
    // One sweep from u = 0 for right-hand side b.
    Vec sweep_from_zero(const Vec& b) const;
    // Σ R_i^T A_ii^{-1} R_i r plus the coarse term.
    Vec additive_apply(const Vec& r) const;

    LinearOperator operator_A() const;
    LinearOperator multiplicative_preconditioner() const;
    LinearOperator additive_preconditioner() const;

private:
    const GridDomain* grid_;
    SubdomainSolverSet solvers_;
    std::optional<CoarseSpace> coarse_;
};

enum class Method { ms, ms_coarse, pcg_as, pcg_as_coarse, gmres_ms, gmres_ms_coarse };

Method parse_method(const std::string& tag);
std::string method_name(Method m);
bool uses_coarse(Method m);

struct SolveReport {
    std::string method;
    int iterations = 0;
    std::vector<double> residual_history;  // relative residuals
    std::vector<double> energy_history;    // ½uᵀAu - bᵀu per iterate (ms and pcg)
    bool converged = false;
    std::string status;
    double wall_time = 0.0;  // seconds
    int dofs = 0;
    int coarse_dim = 0;
    Vec solution;
};

// Builds the Schwarz operators, then iterates until the relative residual
// reaches tol. Coarse variants fall back to the plain method when I_int = ∅.
SolveReport solve(const GridDomain& g, const BallUnion& u, const Vec& b, Method method, double tol,
                  int max_iters);
SolveReport solve(const Schwarz& s, const Vec& b, Method method, double tol, int max_iters);

struct ContractionEstimate {
    double rho = 0.0;
    bool vanished = false;  // error annihilated to round-off
    std::vector<double> ratios;
};

// Energy-norm contraction of the multiplicative sweep from a seeded random
// start with b = 0; geometric mean of the last five ratios.
ContractionEstimate estimate_contraction(const Schwarz& s, int sweeps = 20, std::uint64_t seed = 1);

}  // namespace ddball
