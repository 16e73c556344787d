#include "csh/linear.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csh {

namespace {

using kernels::axpby;
using kernels::axpy;
using kernels::dot;
using kernels::dot3;
using kernels::spmv;
using kernels::sup_abs;

// ---------------------------------------------------------------------------
// dense Cholesky (row-major lower factor, in place)
// ---------------------------------------------------------------------------

void cholesky_factor(std::vector<double>& a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::runtime_error("Cholesky factorization hit a non-positive pivot");
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
    }
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
}

// ---------------------------------------------------------------------------
// preconditioned CG in the mu-weighted inner product
// ---------------------------------------------------------------------------

void remove_mean(const WeightedGraph& g, std::vector<double>& v) {
    const double mean = dot(g.mu_values().data(), v.data(), v.size()) / g.total_measure();
    for (double& x : v) x -= mean;
}

// Solves A x = rhs where A is SPD in the mu-inner product (restricted to the
// mean-zero subspace when `project` is set). Stops once the recurrence
// residual passes `target_sup` in sup norm and a recomputed true residual
// confirms it.
void pcg(const WeightedGraph& g, const std::function<void(const double*, double*)>& apply_a,
         const std::vector<double>& inv_diag, bool project, const std::vector<double>& rhs,
         std::vector<double>& x, double target_sup) {
    const std::size_t n = rhs.size();
    const double* mu = g.mu_values().data();
    std::vector<double> r(n), z(n), p(n), q(n);

    auto refresh_residual = [&]() {
        apply_a(x.data(), q.data());
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
        if (project) remove_mean(g, r);
    };

    refresh_residual();
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
    if (project) remove_mean(g, z);
    p = z;
    double rz = dot3(mu, r.data(), z.data(), n);

    const std::size_t max_iter = 20 * n + 200;
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (sup_abs(r.data(), n) <= target_sup) {
            refresh_residual();
            if (sup_abs(r.data(), n) <= target_sup) return;
            for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
            if (project) remove_mean(g, z);
            p = z;
            rz = dot3(mu, r.data(), z.data(), n);
        }
        apply_a(p.data(), q.data());
        const double pq = dot3(mu, p.data(), q.data(), n);
        if (!(pq > 0.0)) throw std::runtime_error("CG breakdown: operator not positive definite");
        const double alpha = rz / pq;
        axpy(alpha, p.data(), x.data(), n);
        axpy(-alpha, q.data(), r.data(), n);
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
        if (project) remove_mean(g, z);
        const double rz_next = dot3(mu, r.data(), z.data(), n);
        axpby(1.0, z.data(), rz_next / rz, p.data(), n);
        rz = rz_next;
    }
    throw std::runtime_error("CG failed to reach the requested tolerance");
}

}  // namespace

// ---------------------------------------------------------------------------
// ShiftedOperator
// ---------------------------------------------------------------------------

ShiftedOperator::ShiftedOperator(const WeightedGraph& g, double k) : g_(&g), k_(k) {
    if (!(k > 0.0)) throw std::invalid_argument("ShiftedOperator: K must be positive");
    const std::size_t n = g.size();
    dense_ = n < kDenseLimit;
    if (dense_) {
        // D_mu (K - Delta): K mu_i + deg_i on the diagonal, -omega_ij off it.
        chol_.assign(n * n, 0.0);
        const auto& adj = g.adjacency();
        for (std::size_t i = 0; i < n; ++i) {
            chol_[i * n + i] = k * g.mu(i) + g.weighted_degree(i);
            for (std::int32_t e = adj.row_ptr[i]; e < adj.row_ptr[i + 1]; ++e)
                chol_[i * n + adj.col[e]] = -adj.val[e];
        }
        cholesky_factor(chol_, n);
    } else {
        inv_diag_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            inv_diag_[i] = 1.0 / (k + g.weighted_degree(i) / g.mu(i));
    }
}

void ShiftedOperator::apply(const VertexFunction& x, VertexFunction& y) const {
    if (x.size() != g_->size())
        throw std::invalid_argument("ShiftedOperator::apply: domain mismatch");
    y.values().resize(g_->size());
    spmv(g_->laplacian_op(), x.data(), y.data());
    axpy(-k_, x.data(), y.data(), g_->size());
}

VertexFunction ShiftedOperator::solve(const VertexFunction& b, double tol,
                                      const VertexFunction* start) const {
    const std::size_t n = g_->size();
    if (b.size() != n) throw std::invalid_argument("ShiftedOperator::solve: domain mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("ShiftedOperator::solve: tol must be positive");
    const double target = tol * std::max(1.0, sup_abs(b.data(), n));

    VertexFunction psi(n);
    if (dense_) {
        // (K - Delta) psi = -b  as  D_mu(K - Delta) psi = -D_mu b
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -g_->mu(i) * b[i];
        cholesky_solve(chol_, n, rhs);
        psi.values() = std::move(rhs);
        // Iterative refinement until the sup-norm contract is met.
        VertexFunction res(n);
        for (int round = 0; round < 3; ++round) {
            apply(psi, res);
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                res[i] = b[i] - res[i];
                worst = std::max(worst, std::fabs(res[i]));
            }
            if (worst <= target) break;
            std::vector<double> corr(n);
            for (std::size_t i = 0; i < n; ++i) corr[i] = -g_->mu(i) * res[i];
            cholesky_solve(chol_, n, corr);
            axpy(1.0, corr.data(), psi.data(), n);
        }
        return psi;
    }

    if (start != nullptr && start->size() == n) psi.values() = start->values();
    // (K - Delta) psi = -b in the mu-inner product
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -b[i];
    auto apply_a = [&](const double* x, double* y) {
        spmv(g_->laplacian_op(), x, y);
        for (std::size_t i = 0; i < n; ++i) y[i] = k_ * x[i] - y[i];
    };
    pcg(*g_, apply_a, inv_diag_, /*project=*/false, rhs, psi.values(), target);
    return psi;
}

VertexFunction solve_shifted(const ShiftedOperator& op, const VertexFunction& b, double tol) {
    return op.solve(b, tol);
}

// ---------------------------------------------------------------------------
// Dirac sources and the singular Poisson problem
// ---------------------------------------------------------------------------

VertexFunction dirac_source(const WeightedGraph& g, const std::vector<std::size_t>& vortices) {
    if (vortices.empty()) throw std::invalid_argument("dirac_source: vortex list is empty");
    const std::size_t n = g.size();
    std::vector<double> mult(n, 0.0);
    for (std::size_t p : vortices) {
        if (p >= n) throw std::invalid_argument("dirac_source: vortex index out of range");
        mult[p] += 1.0;
    }
    const double n_vortices = static_cast<double>(vortices.size());
    const double uniform = -4.0 * std::numbers::pi * n_vortices / g.total_measure();
    VertexFunction s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = uniform + 4.0 * std::numbers::pi * mult[i] / g.mu(i);
    return s;
}

PoissonSolver::PoissonSolver(const WeightedGraph& g) : g_(&g) {
    const std::size_t n = g.size();
    dense_ = n < kDenseLimit;
    if (dense_) {
        // -D_mu Delta + rho mu mu^T: SPD since the rank-one term removes the
        // kernel of constants; rho scaled to the average Laplacian eigenvalue.
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += g.weighted_degree(i);
        const double rho = trace > 0.0 ? trace / (static_cast<double>(n) * g.total_measure())
                                       : 1.0 / g.total_measure();
        chol_.assign(n * n, 0.0);
        const auto& adj = g.adjacency();
        for (std::size_t i = 0; i < n; ++i) {
            chol_[i * n + i] = g.weighted_degree(i) + rho * g.mu(i) * g.mu(i);
            for (std::int32_t e = adj.row_ptr[i]; e < adj.row_ptr[i + 1]; ++e)
                chol_[i * n + adj.col[e]] = -adj.val[e] + rho * g.mu(i) * g.mu(adj.col[e]);
        }
        cholesky_factor(chol_, n);
    } else {
        inv_diag_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            inv_diag_[i] = g.mu(i) / g.weighted_degree(i);
    }
}

VertexFunction PoissonSolver::solve(const VertexFunction& source, double tol) const {
    const std::size_t n = g_->size();
    if (source.size() != n) throw std::invalid_argument("solve_poisson: domain mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_poisson: tol must be positive");

    double abs_integral = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_integral += g_->mu(i) * std::fabs(source[i]);
    const double integral = integrate(*g_, source);
    if (std::fabs(integral) > 1e-10 * abs_integral)
        throw std::invalid_argument("solve_poisson: incompatible source, integral = " +
                                    std::to_string(integral));
    VertexFunction v(n);
    if (abs_integral == 0.0) return v;  // source identically zero; gauge picks v = 0
    const double target = tol * sup_abs(source.data(), n);

    if (dense_) {
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -g_->mu(i) * source[i];
        cholesky_solve(chol_, n, rhs);
        v.values() = std::move(rhs);
        remove_mean(*g_, v.values());
        for (int round = 0; round < 3; ++round) {
            VertexFunction res = laplacian(*g_, v);
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                res[i] = source[i] - res[i];
                worst = std::max(worst, std::fabs(res[i]));
            }
            if (worst <= target) break;
            std::vector<double> corr(n);
            for (std::size_t i = 0; i < n; ++i) corr[i] = -g_->mu(i) * res[i];
            cholesky_solve(chol_, n, corr);
            axpy(1.0, corr.data(), v.data(), n);
            remove_mean(*g_, v.values());
        }
        return v;
    }

    // projected CG: -Delta v = -source restricted to the mean-zero subspace
    std::vector<double> rhs(source.values());
    remove_mean(*g_, rhs);
    for (double& x : rhs) x = -x;
    auto apply_a = [&](const double* x, double* y) {
        spmv(g_->laplacian_op(), x, y);
        for (std::size_t i = 0; i < n; ++i) y[i] = -y[i];
    };
    pcg(*g_, apply_a, inv_diag_, /*project=*/true, rhs, v.values(), target);
    remove_mean(*g_, v.values());
    return v;
}

VertexFunction solve_poisson(const PoissonProblem& p, double tol) {
    if (p.graph == nullptr) throw std::invalid_argument("solve_poisson: null graph");
    return PoissonSolver(*p.graph).solve(p.source, tol);
}

}  // namespace csh
