#pragma once

// Monotone upper/lower-solution iteration for the generalized and standard
// Chern-Simons-Higgs equations on a weighted graph, plus critical-coupling
// bisection and the constructive limit solve at the critical coupling.
//
// The scheme: reduce the equation with the mean-zero Poisson solution v0 of
// the Dirac problem, start at the upper solution psi_0 = -v0, and iterate
//   (Delta - K) psi_n = H(v0 + psi_{n-1}) - K psi_{n-1} + 4 pi N / |V|
// with K above the nonlinearity's Lipschitz bound. The iterates decrease
// strictly and converge to the maximal solution exactly when any lower
// solution exists; divergence is classified by heuristics (see SolveOptions).

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "csh/linear.hpp"
#include "csh/scalar.hpp"

namespace csh {

struct ProblemSpec {
    const WeightedGraph* graph = nullptr;
    NonlinearityKind kind = NonlinearityKind::Generalized;
    double lambda = 0.0;
    std::vector<std::size_t> vortices;  // indices; repetitions accumulate multiplicity
};

// 27 pi N / |V| (Generalized) or 16 pi N / |V| (Standard): couplings below
// this bound admit no solution.
double analytic_lambda_bound(NonlinearityKind kind, std::size_t n_vortices, double volume);

enum class SolveStatus { Solved, NoSolution, Inconclusive };
const char* status_name(SolveStatus s);
SolveStatus status_from_name(std::string_view name);

struct TraceEntry {
    int n;
    double delta;      // ||psi_n - psi_{n-1}||_inf
    double min_value;  // min_x psi_n(x)
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Inconclusive;
    VertexFunction v;  // reduced solution (meaningful iff Solved)
    VertexFunction u;  // u = v0 + v
    int iterations = 0;
    double residual_inf = std::numeric_limits<double>::quiet_NaN();
    std::vector<TraceEntry> trace;
    std::string note;
};

struct SolveOptions {
    double tol = 1e-10;  // convergence requires both delta and residual below tol
    int max_iter = 2000;
    std::optional<double> shift_k;  // must exceed lipschitz_bound; default adds a margin
    std::optional<double> floor;    // divergence floor; default -1e6 (1 + ||v0||_inf)
};

struct ReducedProblem {
    VertexFunction v0;     // mean-zero solution of Delta v0 = dirac source
    VertexFunction dirac;  // 4 pi mult(x) / mu(x)
    double volume = 0.0;
    double c4 = 0.0;  // 4 pi N / |V|
    std::size_t n_vortices = 0;
};

// Solves the Dirac Poisson problem and packages the reduced equation
//   Delta v = H(v0 + v) + 4 pi N / |V|.
ReducedProblem reduce(const ProblemSpec& spec, double tol = 1e-12);

struct IterationState {
    VertexFunction psi;
    int n = 0;
    double delta = 0.0;
    double min_value = 0.0;
};

// One scheme step. Requires op.shift() > lipschitz_bound(kind, lambda) and
// v0 + psi <= 0 everywhere (throws otherwise); the step at n = 0 starts from
// the upper solution where v0 + psi vanishes identically and the nonlinear
// term drops out.
IterationState iterate_step(const IterationState& state, const ReducedProblem& red,
                            const ProblemSpec& spec, const ShiftedOperator& op, double tol);

// Full solve from the upper solution psi_0 = -v0. Instances with lambda below
// the analytic bound are rejected without iterating.
SolveOutcome solve_at(const ProblemSpec& spec, const SolveOptions& opts = {});

// Same loop with caller-supplied reduction and start; used for warm starts
// and gauge experiments. `psi0` must be an upper solution for the scheme's
// guarantees to hold.
SolveOutcome solve_reduced(const ProblemSpec& spec, const ReducedProblem& red,
                           const VertexFunction& psi0, const SolveOptions& opts = {});

// Searches c' > 0 such that the constant -c' is a lower solution; any hit
// certifies that a solution exists at this coupling.
std::optional<double> constant_lower_solution(const ProblemSpec& spec,
                                              const ReducedProblem& red);

// Pointwise residual of the full equation, Dirac terms included:
//   r(x) = Delta u(x) - H(u(x)) - 4 pi mult(x)/mu(x).
// Requires u <= 0; u = 0 is admitted with H(0) = 0 (its removable limit).
VertexFunction residual(const ProblemSpec& spec, const VertexFunction& u);

struct ProbeRecord {
    double lambda;
    SolveStatus status;
    int iterations;
    bool reprobed = false;  // re-run with 10x max_iter after Inconclusive
};

struct CriticalSpec {
    const WeightedGraph* graph = nullptr;
    NonlinearityKind kind = NonlinearityKind::Generalized;
    std::vector<std::size_t> vortices;
};

struct CriticalOptions {
    double lambda_tol = 1e-3;
    SolveOptions solve;
    double doubling_cap = 1e6;  // abort if lambda_hi exceeds cap * bound
};

struct CriticalResult {
    double lambda_lo = 0.0;  // no-solution side (heuristic verdicts)
    double lambda_hi = 0.0;  // verified solution side
    double analytic_bound = 0.0;
    double lambda_tol = 0.0;
    SolveOutcome solution_at_hi;
    std::vector<ProbeRecord> probes;
    bool heuristic_flagged = false;  // a probe stayed Inconclusive after re-probing

    double lambda_c() const { return 0.5 * (lambda_lo + lambda_hi); }
};

// Bisection for the critical coupling. Sound because the solvable set is an
// upward-closed interval; the initial bracket is [bound, first solvable
// doubling step].
CriticalResult find_critical(const CriticalSpec& spec, const CriticalOptions& opts = {});

struct CriticalSolveOptions {
    double residual_tol = 1e-6;  // acceptance residual at the lambda_c estimate
    int max_halvings = 40;
    SolveOptions solve{.tol = 1e-10, .max_iter = 20000};
};

// Constructive limit lambda -> lambda_c from above: solves at
// lambda_c + lambda_tol 2^{-k}, warm-starting from the previous maximal
// solution and verifying the family decreases monotonically. Probes that
// fail to solve certify lambda_c lies above them, so the bracket in
// `critical` is refined in place. Accepts once the last solution's residual
// evaluated at the lambda_c estimate drops below residual_tol.
SolveOutcome solve_at_critical(const CriticalSpec& spec, CriticalResult& critical,
                               const CriticalSolveOptions& opts = {});

struct DiagnosticsReport {
    double mean_v = 0.0;    // (1/|V|) integral of v
    double grad_norm = 0.0; // ||grad v'||_2 with v' = v - mean_v
    double sobolev = 0.0;   // ||v||_{W^{1,2}}
    double min_u = 0.0;
    double mean_u = 0.0;
};
DiagnosticsReport diagnostics(const ProblemSpec& spec, const SolveOutcome& outcome);

// Least-squares slopes of log(grad_norm) and log(sobolev) against
// log(lambda) over a sweep; rows are (lambda, grad_norm, sobolev).
struct SweepExponents {
    double grad_exponent = 0.0;
    double sobolev_exponent = 0.0;
};
SweepExponents sweep_exponents(const std::vector<std::array<double, 3>>& rows);

}  // namespace csh
