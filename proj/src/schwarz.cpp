#include <ddball/pou.hpp>
#include <ddball/schwarz.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace ddball {

SubdomainSolverSet::SubdomainSolverSet(const GridDomain& g, const BallUnion& u, bool strict_overlap)
    : A_(&g.laplacian) {
    const int m = u.size();
    dofs_.resize(m);
    for (int i = 0; i < m; ++i) dofs_[i] = subdomain_dofs(g, u, i);
    unresolved_ = validate_decomposition(g, u, dofs_, strict_overlap);
    blocks_.resize(m);
    factors_.resize(m);
    std::vector<int> local(g.num_dofs(), -1);
    for (int i = 0; i < m; ++i) {
        const auto& d = dofs_[i];
        for (int k = 0; k < static_cast<int>(d.size()); ++k) local[d[k]] = k;
        std::vector<Eigen::Triplet<double, int>> trip;
        for (int k = 0; k < static_cast<int>(d.size()); ++k)
            for (SparseMatrix::InnerIterator it(g.laplacian, d[k]); it; ++it)
                if (local[it.col()] >= 0) trip.emplace_back(k, local[it.col()], it.value());
        blocks_[i].resize(static_cast<int>(d.size()), static_cast<int>(d.size()));
        blocks_[i].setFromTriplets(trip.begin(), trip.end());
        factors_[i] = std::make_unique<Eigen::SimplicialLLT<ColSparse>>(blocks_[i]);
        if (factors_[i]->info() != Eigen::Success)
            throw InconsistencyError("subdomain matrix " + std::to_string(i) + " is not positive definite");
        for (int dd : d) local[dd] = -1;
    }
}

double SubdomainSolverSet::probe_residual(std::uint64_t seed) const {
    double worst = 0.0;
    for (int i = 0; i < size(); ++i) {
        Vec b = random_vector(static_cast<int>(dofs_[i].size()), seed + i);
        Vec x = solve(i, b);
        worst = std::max(worst, (blocks_[i] * x - b).norm() / b.norm());
    }
    return worst;
}

CoarseSpace build_coarse_space(const GridDomain& g, const BallUnion& u) {
    if (u.interior_indices().empty())
        throw DomainError("no interior balls: the coarse space is empty; use the method without coarse space");
    CoarseSpace c;
    c.balls = u.interior_indices();
    std::vector<Eigen::Triplet<double, int>> trip;
    for (int col = 0; col < c.dim(); ++col) {
        int i = c.balls[col];
        for (int d : subdomain_dofs(g, u, i)) trip.emplace_back(d, col, eval_theta(u, g.node_coords[d]).theta_of(i));
    }
    c.basis.resize(g.num_dofs(), c.dim());
    c.basis.setFromTriplets(trip.begin(), trip.end());
    c.a_basis = ColSparse(g.laplacian * c.basis);
    c.op = Eigen::MatrixXd(c.basis.transpose() * c.a_basis);
    c.op = 0.5 * (c.op + c.op.transpose());
    c.factor.compute(c.op);
    if (c.factor.info() != Eigen::Success) throw InconsistencyError("coarse operator is not positive definite");
    return c;
}

Vec coarse_interpolate(const CoarseSpace& c, const SubdomainSolverSet& s, const Vec& v) {
    Vec means(c.dim());
    for (int col = 0; col < c.dim(); ++col) {
        const auto& d = s.dofs(c.balls[col]);
        double sum = 0.0;
        for (int k : d) sum += v[k];
        means[col] = d.empty() ? 0.0 : sum / d.size();
    }
    return c.basis * means;
}

Schwarz::Schwarz(const GridDomain& g, const BallUnion& u, bool use_coarse, bool strict_overlap)
    : grid_(&g), solvers_(g, u, strict_overlap) {
    if (use_coarse && !u.interior_indices().empty()) coarse_ = build_coarse_space(g, u);
}

void Schwarz::sweep(Vec& u, Vec& r, const std::function<void(int, const Vec&, const Vec&)>& after) const {
    const SparseMatrix& A = grid_->laplacian;
    if (coarse_) {
        Vec e0 = coarse_->factor.solve(Vec(coarse_->basis.transpose() * r));
        u += coarse_->basis * e0;
        r -= coarse_->a_basis * e0;
        if (after) after(-1, u, r);
    }
    for (int i = 0; i < solvers_.size(); ++i) {
        const auto& d = solvers_.dofs(i);
        const int n = static_cast<int>(d.size());
        Vec rl(n);
        for (int k = 0; k < n; ++k) rl[k] = r[d[k]];
        Vec e = solvers_.solve(i, rl);
        for (int k = 0; k < n; ++k) {
            u[d[k]] += e[k];
            for (SparseMatrix::InnerIterator it(A, d[k]); it; ++it) r[it.col()] -= it.value() * e[k];
        }
        if (after) after(i, u, r);
    }
}

Vec Schwarz::sweep_from_zero(const Vec& b) const {
    Vec u = Vec::Zero(b.size());
    Vec r = b;
    sweep(u, r);
    return u;
}

Vec Schwarz::additive_apply(const Vec& r) const {
    Vec z = Vec::Zero(r.size());
    if (coarse_) z += coarse_->basis * coarse_->factor.solve(Vec(coarse_->basis.transpose() * r));
    for (int i = 0; i < solvers_.size(); ++i) {
        const auto& d = solvers_.dofs(i);
        const int n = static_cast<int>(d.size());
        Vec rl(n);
        for (int k = 0; k < n; ++k) rl[k] = r[d[k]];
        Vec e = solvers_.solve(i, rl);
        for (int k = 0; k < n; ++k) z[d[k]] += e[k];
    }
    return z;
}

LinearOperator Schwarz::operator_A() const { return matrix_operator(grid_->laplacian); }

LinearOperator Schwarz::multiplicative_preconditioner() const {
    return {grid_->num_dofs(), [this](const Vec& x, Vec& y) { y = sweep_from_zero(x); }, false};
}

LinearOperator Schwarz::additive_preconditioner() const {
    return {grid_->num_dofs(), [this](const Vec& x, Vec& y) { y = additive_apply(x); }, true};
}

Method parse_method(const std::string& tag) {
    if (tag == "ms") return Method::ms;
    if (tag == "ms+coarse") return Method::ms_coarse;
    if (tag == "pcg-as") return Method::pcg_as;
    if (tag == "pcg-as+coarse") return Method::pcg_as_coarse;
    if (tag == "gmres-ms") return Method::gmres_ms;
    if (tag == "gmres-ms+coarse") return Method::gmres_ms_coarse;
    throw Error("unknown method '" + tag +
                "' (expected ms, ms+coarse, pcg-as, pcg-as+coarse, gmres-ms, gmres-ms+coarse)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::ms: return "ms";
        case Method::ms_coarse: return "ms+coarse";
        case Method::pcg_as: return "pcg-as";
        case Method::pcg_as_coarse: return "pcg-as+coarse";
        case Method::gmres_ms: return "gmres-ms";
        case Method::gmres_ms_coarse: return "gmres-ms+coarse";
    }
    return "?";
}

bool uses_coarse(Method m) {
    return m == Method::ms_coarse || m == Method::pcg_as_coarse || m == Method::gmres_ms_coarse;
}

namespace {

double energy(const Vec& u, const Vec& b, const Vec& r) { return -0.5 * u.dot(b + r); }

}  // namespace

SolveReport solve(const Schwarz& s, const Vec& b, Method method, double tol, int max_iters) {
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("tolerance must lie in (0, 1)");
    if (max_iters < 1) throw DomainError("max_iters must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.method = method_name(method);
    rep.dofs = s.grid().num_dofs();
    rep.coarse_dim = s.coarse_dim();
    const double bnorm = b.norm();
    const SparseMatrix& A = s.grid().laplacian;
    switch (method) {
        case Method::ms:
        case Method::ms_coarse: {
            Vec u = Vec::Zero(b.size()), r = b;
            rep.residual_history.push_back(bnorm > 0 ? 1.0 : 0.0);
            rep.energy_history.push_back(0.0);
            if (bnorm == 0.0) {
                rep.converged = true;
                rep.solution = u;
                break;
            }
            for (int it = 0; it < max_iters; ++it) {
                s.sweep(u, r);
                r = b - A * u;  // refresh to avoid drift
                rep.residual_history.push_back(r.norm() / bnorm);
                rep.energy_history.push_back(energy(u, b, r));
                rep.iterations = it + 1;
                if (rep.residual_history.back() <= tol) {
                    rep.converged = true;
                    break;
                }
            }
            rep.solution = u;
            rep.status = rep.converged ? "converged" : "max iterations reached";
            break;
        }
        case Method::pcg_as:
        case Method::pcg_as_coarse: {
            LinearOperator Aop = s.operator_A(), M = s.additive_preconditioner();
            auto res = cg(Aop, &M, b, tol, max_iters);
            rep.iterations = res.report.iterations;
            rep.residual_history = res.report.residual_history;
            rep.converged = res.report.converged;
            rep.status = res.report.status;
            rep.solution = res.x;
            Vec r = b - A * res.x;
            rep.energy_history.push_back(energy(res.x, b, r));
            break;
        }
        case Method::gmres_ms:
        case Method::gmres_ms_coarse: {
            LinearOperator Aop = s.operator_A(), M = s.multiplicative_preconditioner();
            auto res = gmres(Aop, &M, b, tol, max_iters);
            rep.iterations = res.report.iterations;
            rep.residual_history = res.report.residual_history;
            rep.converged = res.report.converged;
            rep.status = res.report.status;
            rep.solution = res.x;
            Vec r = b - A * res.x;
            rep.energy_history.push_back(energy(res.x, b, r));
            break;
        }
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SolveReport solve(const GridDomain& g, const BallUnion& u, const Vec& b, Method method, double tol,
                  int max_iters) {
    Schwarz s(g, u, uses_coarse(method));
    return solve(s, b, method, tol, max_iters);
}

ContractionEstimate estimate_contraction(const Schwarz& s, int sweeps, std::uint64_t seed) {
    if (sweeps < 10) throw DomainError("contraction estimate needs at least 10 sweeps");
    const SparseMatrix& A = s.grid().laplacian;
    ContractionEstimate est;
    Vec u = random_vector(s.grid().num_dofs(), seed);
    Vec r = -(A * u);
    double norm = std::sqrt(-u.dot(r));
    u /= norm;
    r /= norm;
    for (int k = 0; k < sweeps; ++k) {
        s.sweep(u, r);
        r = -(A * u);
        double e = std::sqrt(std::max(0.0, -u.dot(r)));
        est.ratios.push_back(e);
        if (!(e > 1e-13)) {
            est.vanished = true;
            est.rho = 0.0;
            return est;
        }
        u /= e;
        r /= e;
    }
    double logsum = 0.0;
    const int tail = std::min<int>(5, static_cast<int>(est.ratios.size()));
    for (int k = static_cast<int>(est.ratios.size()) - tail; k < static_cast<int>(est.ratios.size()); ++k)
        logsum += std::log(est.ratios[k]);
    est.rho = std::exp(logsum / tail);
    return est;
}

}  // namespace ddball
