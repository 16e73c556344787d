#pragma once

// The two linear problems the scheme needs:
//   (Delta - K) psi = b   with K > 0 (uniquely solvable), and
//   Delta v0 = s          with compatible s (mean-zero gauge fixes v0).
// Both are solved in the mu-weighted inner product where Delta is
// self-adjoint: dense Cholesky below kDenseLimit vertices, Jacobi
// preconditioned conjugate gradients above. Factorizations are built once
// per (graph, K) and are read-only afterwards, so concurrent solves against
// one operator are safe.

#include <cstddef>
#include <vector>

#include "csh/graph.hpp"

namespace csh {

inline constexpr std::size_t kDenseLimit = 200;

class ShiftedOperator {
public:
    ShiftedOperator(const WeightedGraph& g, double k);

    double shift() const { return k_; }
    const WeightedGraph& graph() const { return *g_; }

    // y = (Delta - K) x
    void apply(const VertexFunction& x, VertexFunction& y) const;

    // Solves (Delta - K) psi = b with ||(Delta-K)psi - b||_inf <= tol * max(1, ||b||_inf).
    // `start` warm-starts the iterative path; ignored by the dense path.
    VertexFunction solve(const VertexFunction& b, double tol,
                         const VertexFunction* start = nullptr) const;

private:
    const WeightedGraph* g_;
    double k_;
    bool dense_;
    std::vector<double> chol_;        // lower Cholesky factor of D_mu (K - Delta)
    std::vector<double> inv_diag_;    // Jacobi preconditioner for the CG path
};

VertexFunction solve_shifted(const ShiftedOperator& op, const VertexFunction& b, double tol);

// s(x) = -4 pi N / |V| + 4 pi mult(x) / mu(x), where mult counts vortices at
// x (repetitions accumulate) and N is the vortex list length. Integrates to
// zero by construction.
VertexFunction dirac_source(const WeightedGraph& g, const std::vector<std::size_t>& vortices);

struct PoissonProblem {
    const WeightedGraph* graph;
    VertexFunction source;  // must satisfy integral(source) = 0 to 1e-10 relative
};

// Factors the singular operator once (rank-one regularization on the dense
// path, projected CG on the iterative path); every solution is returned in
// the mean-zero gauge.
class PoissonSolver {
public:
    explicit PoissonSolver(const WeightedGraph& g);

    // Solves Delta v = source with ||Delta v - source||_inf <= tol * ||source||_inf
    // and integral(v) = 0. Throws if the source is incompatible.
    VertexFunction solve(const VertexFunction& source, double tol = 1e-12) const;

private:
    const WeightedGraph* g_;
    bool dense_;
    std::vector<double> chol_;
    std::vector<double> inv_diag_;
};

VertexFunction solve_poisson(const PoissonProblem& p, double tol = 1e-12);

}  // namespace csh
