#include <ddball/krylov.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ddball {

LinearOperator matrix_operator(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& A) {
    return {static_cast<int>(A.rows()), [&A](const Vec& x, Vec& y) { y = A * x; }, true};
}

LinearOperator identity_operator(int n) {
    return {n, [](const Vec& x, Vec& y) { y = x; }, true};
}

Vec random_vector(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return ((rng() >> 11) + 0.5) * 0x1.0p-53; };
    Vec v(n);
    for (int k = 0; k < n; k += 2) {
        double r = std::sqrt(-2 * std::log(unit())), t = 2 * std::numbers::pi * unit();
        v[k] = r * std::cos(t);
        if (k + 1 < n) v[k + 1] = r * std::sin(t);
    }
    return v;
}

namespace {

std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int k = static_cast<int>(alpha.size());
    if (k == 0) return {};
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + k};
}

}  // namespace

KrylovResult cg(const LinearOperator& A, const LinearOperator* M, const Vec& b, double tol, int max_iters) {
    KrylovResult res;
    const int n = A.n;
    res.x = Vec::Zero(n);
    const double bnorm = b.norm();
    auto& rep = res.report;
    if (bnorm == 0.0) {
        rep.residual_history = {0.0};
        rep.converged = true;
        rep.status = "zero right-hand side";
        return res;
    }
    Vec r = b, z, p, q;
    if (M) M->apply(r, z); else z = r;
    p = z;
    double rz = r.dot(z);
    rep.residual_history.push_back(1.0);
    std::vector<double> alphas, betas;
    for (int it = 0; it < max_iters; ++it) {
        A.apply(p, q);
        double pq = p.dot(q);
        if (!(pq > 0.0)) throw InconsistencyError("conjugate gradients: operator is not positive definite");
        double alpha = rz / pq;
        res.x += alpha * p;
        r -= alpha * q;
        alphas.push_back(alpha);
        double rel = r.norm() / bnorm;
        rep.residual_history.push_back(rel);
        rep.iterations = it + 1;
        if (rel <= tol) {
            rep.converged = true;
            break;
        }
        if (M) M->apply(r, z); else z = r;
        double rz_new = r.dot(z);
        double beta = rz_new / rz;
        betas.push_back(beta);
        rz = rz_new;
        p = z + beta * p;
    }
    // Lanczos matrix from the CG coefficients.
    const std::size_t k = alphas.size();
    std::vector<double> diag(k), off(k > 0 ? k - 1 : 0);
    for (std::size_t i = 0; i < k; ++i) {
        diag[i] = 1.0 / alphas[i] + (i > 0 ? betas[i - 1] / alphas[i - 1] : 0.0);
        if (i + 1 < k) off[i] = std::sqrt(betas[i]) / alphas[i];
    }
    auto ev = tridiagonal_eigenvalues(diag, off);
    if (!ev.empty() && ev.front() > 0) rep.cond_estimate = ev.back() / ev.front();
    rep.status = rep.converged ? "converged" : "max iterations reached";
    return res;
}

KrylovResult gmres(const LinearOperator& A, const LinearOperator* M, const Vec& b, double tol, int max_iters) {
    KrylovResult res;
    const int n = A.n;
    res.x = Vec::Zero(n);
    auto& rep = res.report;
    const double beta0 = b.norm();
    if (beta0 == 0.0) {
        rep.residual_history = {0.0};
        rep.converged = true;
        rep.status = "zero right-hand side";
        return res;
    }
    std::vector<Vec> V, Z;
    V.push_back(b / beta0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(max_iters + 1, max_iters);
    std::vector<double> cs(max_iters), sn(max_iters);
    Vec g = Vec::Zero(max_iters + 1);
    g[0] = beta0;
    rep.residual_history.push_back(1.0);
    int k = 0;
    for (; k < max_iters; ++k) {
        Vec z, w;
        if (M) M->apply(V[k], z); else z = V[k];
        A.apply(z, w);
        Z.push_back(std::move(z));
        for (int j = 0; j <= k; ++j) {
            H(j, k) = w.dot(V[j]);
            w -= H(j, k) * V[j];
        }
        H(k + 1, k) = w.norm();
        for (int j = 0; j < k; ++j) {
            double t = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
            H(j + 1, k) = -sn[j] * H(j, k) + cs[j] * H(j + 1, k);
            H(j, k) = t;
        }
        const double hkk = H(k, k), hk1 = H(k + 1, k);
        const double den = std::hypot(hkk, hk1);
        const bool happy = hk1 <= 1e-14 * beta0;
        if (den == 0.0) {
            rep.breakdown = true;
            rep.status = "breakdown: singular Hessenberg";
            break;
        }
        cs[k] = hkk / den;
        sn[k] = hk1 / den;
        const double wnorm = hk1;
        H(k, k) = den;
        H(k + 1, k) = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] = cs[k] * g[k];
        const double rel = std::abs(g[k + 1]) / beta0;
        rep.residual_history.push_back(rel);
        rep.iterations = k + 1;
        if (rel <= tol || happy) {
            rep.converged = rel <= tol || happy;
            if (happy) rep.breakdown = true;
            ++k;
            break;
        }
        const int it = k + 1;
        if (it >= 20) {
            double prev = rep.residual_history[it - 20];
            if (prev - rel < 1e-14 * prev) {
                rep.stagnated = true;
                ++k;
                break;
            }
        }
        V.push_back(w / wnorm);
    }
    const int m = std::min<int>(k, static_cast<int>(Z.size()));
    if (m > 0) {
        Vec y = H.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(g.head(m));
        for (int j = 0; j < m; ++j) res.x += y[j] * Z[j];
    }
    if (rep.status.empty())
        rep.status = rep.converged ? (rep.breakdown ? "converged (happy breakdown)" : "converged")
                                   : (rep.stagnated ? "stagnated" : "max iterations reached");
    return res;
}

std::vector<double> lanczos_ritz(const LinearOperator& op, const LinearOperator* B, const Vec& start, int iters) {
    const int n = op.n;
    auto bapply = [&](const Vec& x) {
        if (!B) return Vec(x);
        Vec y;
        B->apply(x, y);
        return y;
    };
    std::vector<Vec> Q, BQ;
    std::vector<double> alpha, beta;
    Vec bq = bapply(start);
    double nrm = std::sqrt(start.dot(bq));
    if (!(nrm > 0.0)) return {};
    Q.push_back(start / nrm);
    BQ.push_back(bq / nrm);
    for (int k = 0; k < std::min(iters, n); ++k) {
        Vec w;
        op.apply(Q[k], w);
        double a = w.dot(BQ[k]);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < Q.size(); ++j) w -= w.dot(BQ[j]) * Q[j];
        Vec bw = bapply(w);
        double b = std::sqrt(std::max(0.0, w.dot(bw)));
        if (b <= 1e-13 * std::max(1.0, std::abs(a))) break;
        beta.push_back(b);
        Q.push_back(w / b);
        BQ.push_back(bw / b);
    }
    beta.resize(alpha.empty() ? 0 : alpha.size() - 1);
    return tridiagonal_eigenvalues(alpha, beta);
}

Extremes lanczos_extremes(const LinearOperator& A, const LinearOperator* M, int probes, int iters,
                          std::uint64_t seed) {
    Extremes e{kInf, -kInf};
    LinearOperator op = A;
    if (M) {
        op.apply = [&A, M](const Vec& x, Vec& y) {
            Vec t;
            A.apply(x, t);
            M->apply(t, y);
        };
    }
    for (int p = 0; p < probes; ++p) {
        Vec start = random_vector(A.n, seed + 7919 * static_cast<std::uint64_t>(p));
        auto ritz = lanczos_ritz(op, M ? &A : nullptr, start, iters);
        if (ritz.empty()) continue;
        e.lambda_min = std::min(e.lambda_min, ritz.front());
        e.lambda_max = std::max(e.lambda_max, ritz.back());
    }
    return e;
}

double smallest_eigenvalue(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& A, double rel_tol,
                           int max_iters, std::uint64_t seed) {
    Eigen::SparseMatrix<double> Ac = A;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Ac);
    if (llt.info() != Eigen::Success) throw InconsistencyError("Cholesky factorization failed");
    const int n = static_cast<int>(A.rows());
    Vec q = random_vector(n, seed);
    q.normalize();
    std::vector<Vec> Q{q};
    std::vector<double> alpha, beta;
    double prev = 0.0, theta = 0.0;
    for (int k = 0; k < std::min(max_iters, n); ++k) {
        Vec w = llt.solve(Q[k]);
        alpha.push_back(w.dot(Q[k]));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& v : Q) w -= w.dot(v) * v;
        std::vector<double> off(beta);
        theta = tridiagonal_eigenvalues(alpha, off).back();
        if (k >= 3 && std::abs(theta - prev) <= rel_tol * theta) break;
        prev = theta;
        double b = w.norm();
        if (b <= 1e-14 * theta) break;
        beta.push_back(b);
        Q.push_back(w / b);
    }
    return 1.0 / theta;
}

}  // namespace ddball
