#include "csh/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace csh {

namespace {

using kernels::min_value;
using kernels::sup_abs;
using kernels::sup_diff;

// H extended to w <= 0: the factor e^{g(w)}(e^{g(w)}-1)^2 resp. e^w(e^w-1)
// vanishes at w = 0, which the first scheme step (v0 + psi_0 = 0) needs.
double h_at(NonlinearityKind kind, double lambda, double w) {
    if (w == 0.0) return 0.0;
    return nonlinearity(kind, lambda, w);
}

void validate(const ProblemSpec& spec) {
    if (spec.graph == nullptr) throw std::invalid_argument("ProblemSpec: null graph");
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw std::invalid_argument("ProblemSpec: lambda must be a positive finite number");
    if (spec.vortices.empty()) throw std::invalid_argument("ProblemSpec: at least one vortex required");
    for (std::size_t p : spec.vortices)
        if (p >= spec.graph->size())
            throw std::invalid_argument("ProblemSpec: vortex index out of range");
}

void validate(const CriticalSpec& spec) {
    if (spec.graph == nullptr) throw std::invalid_argument("CriticalSpec: null graph");
    if (spec.vortices.empty()) throw std::invalid_argument("CriticalSpec: at least one vortex required");
    for (std::size_t p : spec.vortices)
        if (p >= spec.graph->size())
            throw std::invalid_argument("CriticalSpec: vortex index out of range");
}

double default_shift(NonlinearityKind kind, double lambda) {
    return lipschitz_bound(kind, lambda) + std::max(1.0, 0.1 * lambda);
}

double max_entry(const VertexFunction& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f[i]);
    return m;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

double analytic_lambda_bound(NonlinearityKind kind, std::size_t n_vortices, double volume) {
    if (n_vortices == 0) throw std::invalid_argument("analytic_lambda_bound: N must be >= 1");
    if (!(volume > 0.0)) throw std::invalid_argument("analytic_lambda_bound: volume must be positive");
    const double factor = kind == NonlinearityKind::Generalized ? 27.0 : 16.0;
    return factor * std::numbers::pi * static_cast<double>(n_vortices) / volume;
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "Solved";
        case SolveStatus::NoSolution: return "NoSolution";
        case SolveStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

SolveStatus status_from_name(std::string_view name) {
    if (name == "Solved") return SolveStatus::Solved;
    if (name == "NoSolution") return SolveStatus::NoSolution;
    if (name == "Inconclusive") return SolveStatus::Inconclusive;
    throw std::invalid_argument("unknown solve status \"" + std::string(name) + "\"");
}

ReducedProblem reduce(const ProblemSpec& spec, double tol) {
    validate(spec);
    const WeightedGraph& g = *spec.graph;
    ReducedProblem red;
    red.volume = g.total_measure();
    red.n_vortices = spec.vortices.size();
    red.c4 = 4.0 * std::numbers::pi * static_cast<double>(red.n_vortices) / red.volume;
    VertexFunction s = dirac_source(g, spec.vortices);
    red.dirac = VertexFunction(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) red.dirac[i] = s[i] + red.c4;
    red.v0 = PoissonSolver(g).solve(s, tol);
    return red;
}

IterationState iterate_step(const IterationState& state, const ReducedProblem& red,
                            const ProblemSpec& spec, const ShiftedOperator& op, double tol) {
    validate(spec);
    const std::size_t n = spec.graph->size();
    if (state.psi.size() != n || red.v0.size() != n)
        throw std::invalid_argument("iterate_step: domain mismatch");
    const double bound = lipschitz_bound(spec.kind, spec.lambda);
    if (!(op.shift() > bound))
        throw std::invalid_argument("iterate_step: shift K = " + fmt(op.shift()) +
                                    " must exceed the Lipschitz bound " + fmt(bound));
    VertexFunction rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = red.v0[i] + state.psi[i];
        if (w > 0.0)
            throw std::domain_error("iterate_step: v0 + psi must be <= 0 everywhere");
        rhs[i] = h_at(spec.kind, spec.lambda, w) - op.shift() * state.psi[i] + red.c4;
    }
    IterationState next;
    next.psi = op.solve(rhs, tol, &state.psi);
    next.n = state.n + 1;
    next.delta = sup_diff(next.psi.data(), state.psi.data(), n);
    next.min_value = min_value(next.psi.data(), n);
    return next;
}

namespace {

SolveOutcome run_scheme(const ProblemSpec& spec, const ReducedProblem& red,
                        const VertexFunction& psi0, const SolveOptions& opts) {
    const WeightedGraph& g = *spec.graph;
    const std::size_t n = g.size();
    if (psi0.size() != n || red.v0.size() != n)
        throw std::invalid_argument("solve: domain mismatch");
    if (!(opts.tol > 0.0) || opts.max_iter < 1)
        throw std::invalid_argument("solve: invalid options");
    const double lb = lipschitz_bound(spec.kind, spec.lambda);
    const double shift = opts.shift_k.value_or(default_shift(spec.kind, spec.lambda));
    if (!(shift > lb))
        throw std::invalid_argument("solve: shift K = " + fmt(shift) +
                                    " must exceed the Lipschitz bound " + fmt(lb));
    const double floor =
        opts.floor.value_or(-1e6 * (1.0 + sup_abs(red.v0.data(), n)));
    const double inner_tol = std::min(1e-12, 0.1 * opts.tol);

    ShiftedOperator op(g, shift);
    SolveOutcome out;
    out.trace.reserve(static_cast<std::size_t>(std::min(opts.max_iter, 4096)));
    VertexFunction psi = psi0;
    VertexFunction rhs(n);
    VertexFunction u(n);

    for (int it = 1; it <= opts.max_iter; ++it) {
        double w_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double w = red.v0[i] + psi[i];
            w_max = std::max(w_max, w);
            if (w <= 0.0) rhs[i] = h_at(spec.kind, spec.lambda, w) - shift * psi[i] + red.c4;
        }
        if (w_max > 0.0) {
            out.status = SolveStatus::Inconclusive;
            out.note = "regime violation: max(v0 + psi) = " + fmt(w_max) + " > 0 at step " +
                       std::to_string(it);
            return out;
        }
        VertexFunction next = op.solve(rhs, inner_tol, &psi);
        const double delta = sup_diff(next.data(), psi.data(), n);
        const double mn = min_value(next.data(), n);
        psi = std::move(next);
        out.trace.push_back({it, delta, mn});
        out.iterations = it;

        if (mn < floor) {
            out.status = SolveStatus::NoSolution;
            out.note = "diverged: iterate minimum " + fmt(mn) + " fell below the floor " +
                       fmt(floor);
            return out;
        }
        if (delta <= opts.tol) {
            for (std::size_t i = 0; i < n; ++i) u[i] = red.v0[i] + psi[i];
            if (max_entry(u) < 0.0) {
                VertexFunction r = residual(spec, u);
                const double r_inf = sup_abs(r.data(), n);
                out.residual_inf = r_inf;
                if (r_inf <= opts.tol) {
                    out.status = SolveStatus::Solved;
                    out.v = std::move(psi);
                    out.u = std::move(u);
                    return out;
                }
            }
        }
    }

    const std::size_t m = out.trace.size();
    const double last_delta = out.trace.back().delta;
    if (last_delta <= opts.tol) {
        out.status = SolveStatus::Inconclusive;
        out.note = "step size converged but the residual stayed above tol";
    } else if (m >= 2 && last_delta >= out.trace[m - 2].delta * (1.0 - 1e-12)) {
        out.status = SolveStatus::NoSolution;
        out.note = "step size stalled at max_iter = " + std::to_string(opts.max_iter) +
                   " (divergence heuristic)";
    } else {
        out.status = SolveStatus::Inconclusive;
        out.note = "still contracting at max_iter = " + std::to_string(opts.max_iter);
    }
    return out;
}

}  // namespace

SolveOutcome solve_at(const ProblemSpec& spec, const SolveOptions& opts) {
    validate(spec);
    const double bound =
        analytic_lambda_bound(spec.kind, spec.vortices.size(), spec.graph->total_measure());
    if (spec.lambda < bound) {
        SolveOutcome out;
        out.status = SolveStatus::NoSolution;
        out.note = "lambda = " + fmt(spec.lambda) + " is below the analytic bound " + fmt(bound) +
                   "; no solution exists";
        return out;
    }
    ReducedProblem red = reduce(spec, std::min(1e-12, 0.1 * opts.tol));
    VertexFunction psi0(spec.graph->size());
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = -red.v0[i];
    return run_scheme(spec, red, psi0, opts);
}

SolveOutcome solve_reduced(const ProblemSpec& spec, const ReducedProblem& red,
                           const VertexFunction& psi0, const SolveOptions& opts) {
    validate(spec);
    return run_scheme(spec, red, psi0, opts);
}

std::optional<double> constant_lower_solution(const ProblemSpec& spec,
                                              const ReducedProblem& red) {
    validate(spec);
    // A constant -c' is a lower solution iff 0 >= H(v0 - c') + c4 at every
    // vertex. Scan c' on a grid; each hit is verified exactly, so any return
    // value is a true certificate.
    const double v0_max = max_entry(red.v0);
    const double start = std::max(v0_max, 0.0) + 1e-9;
    const double range = sup_abs(red.v0.data(), red.v0.size()) + 40.0;
    const int steps = 4000;
    for (int k = 0; k <= steps; ++k) {
        const double c = start + range * static_cast<double>(k) / steps;
        bool ok = true;
        for (std::size_t i = 0; i < red.v0.size() && ok; ++i)
            ok = h_at(spec.kind, spec.lambda, red.v0[i] - c) <= -red.c4;
        if (ok) return c;
    }
    return std::nullopt;
}

VertexFunction residual(const ProblemSpec& spec, const VertexFunction& u) {
    validate(spec);
    const WeightedGraph& g = *spec.graph;
    const std::size_t n = g.size();
    if (u.size() != n) throw std::invalid_argument("residual: domain mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (u[i] > 0.0)
            throw std::domain_error("residual: u must be <= 0 everywhere, but u(\"" +
                                    g.id_of(i) + "\") = " + fmt(u[i]));
    std::vector<double> mult(n, 0.0);
    for (std::size_t p : spec.vortices) mult[p] += 1.0;
    VertexFunction r = laplacian(g, u);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] -= h_at(spec.kind, spec.lambda, u[i]);
        if (mult[i] != 0.0) r[i] -= 4.0 * std::numbers::pi * mult[i] / g.mu(i);
    }
    return r;
}

CriticalResult find_critical(const CriticalSpec& cspec, const CriticalOptions& opts) {
    validate(cspec);
    if (!(opts.lambda_tol > 0.0))
        throw std::invalid_argument("find_critical: lambda_tol must be positive");
    const WeightedGraph& g = *cspec.graph;
    const double bound =
        analytic_lambda_bound(cspec.kind, cspec.vortices.size(), g.total_measure());

    ProblemSpec base{&g, cspec.kind, bound, cspec.vortices};
    ReducedProblem red = reduce(base, std::min(1e-12, 0.1 * opts.solve.tol));
    VertexFunction psi0(g.size());
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = -red.v0[i];

    CriticalResult res;
    res.analytic_bound = bound;
    res.lambda_tol = opts.lambda_tol;

    auto probe = [&](double lambda) -> SolveOutcome {
        ProblemSpec s = base;
        s.lambda = lambda;
        SolveOutcome o = solve_reduced(s, red, psi0, opts.solve);
        bool reprobed = false;
        if (o.status == SolveStatus::Inconclusive) {
            SolveOptions longer = opts.solve;
            longer.max_iter *= 10;
            o = solve_reduced(s, red, psi0, longer);
            reprobed = true;
            if (o.status == SolveStatus::Inconclusive) res.heuristic_flagged = true;
        }
        res.probes.push_back({lambda, o.status, o.iterations, reprobed});
        return o;
    };

    // Anchor the no-solution side at the analytic bound.
    SolveOutcome at_bound = probe(bound);
    if (at_bound.status == SolveStatus::Solved) {
        res.lambda_lo = res.lambda_hi = bound;
        res.solution_at_hi = std::move(at_bound);
        return res;
    }

    double lo = bound;
    double hi = bound;
    SolveOutcome sol_hi;
    for (;;) {
        hi *= 2.0;
        if (hi > opts.doubling_cap * bound)
            throw std::runtime_error("find_critical: no solvable coupling found up to " +
                                     fmt(opts.doubling_cap) + "x the analytic bound");
        SolveOutcome o = probe(hi);
        if (o.status == SolveStatus::Solved) {
            sol_hi = std::move(o);
            break;
        }
        lo = hi;
    }

    while (hi - lo > opts.lambda_tol) {
        const double mid = 0.5 * (lo + hi);
        SolveOutcome o = probe(mid);
        if (o.status == SolveStatus::Solved) {
            hi = mid;
            sol_hi = std::move(o);
        } else {
            lo = mid;  // NoSolution, or Inconclusive after re-probing (flagged)
        }
    }

    res.lambda_lo = lo;
    res.lambda_hi = hi;
    res.solution_at_hi = std::move(sol_hi);
    return res;
}

SolveOutcome solve_at_critical(const CriticalSpec& cspec, CriticalResult& critical,
                               const CriticalSolveOptions& opts) {
    validate(cspec);
    if (critical.solution_at_hi.status != SolveStatus::Solved)
        throw std::invalid_argument("solve_at_critical: critical result carries no solution");
    const double lambda_tol = critical.lambda_tol > 0.0 ? critical.lambda_tol : 1e-3;

    ProblemSpec spec{cspec.graph, cspec.kind, critical.lambda_hi, cspec.vortices};
    ReducedProblem red = reduce(spec, std::min(1e-12, 0.1 * opts.solve.tol));

    SolveOutcome last = critical.solution_at_hi;
    double last_lambda = critical.lambda_hi;

    for (int k = 0; k <= opts.max_halvings; ++k) {
        // Accept as soon as the newest solution satisfies the equation at the
        // current lambda_c estimate.
        spec.lambda = critical.lambda_c();
        VertexFunction r = residual(spec, last.u);
        const double r_inf = sup_abs(r.data(), r.size());
        if (r_inf <= opts.residual_tol) {
            SolveOutcome accepted = last;
            accepted.residual_inf = r_inf;
            accepted.note = "accepted at lambda_c estimate " + fmt(critical.lambda_c()) +
                            " (solved at lambda = " + fmt(last_lambda) + ")";
            return accepted;
        }

        const double eps = lambda_tol * std::pow(2.0, -k);
        const double lambda_k = critical.lambda_c() + eps;
        if (lambda_k >= last_lambda) continue;  // already have a solution closer to lambda_c

        spec.lambda = lambda_k;
        SolveOutcome o = solve_reduced(spec, red, last.v, opts.solve);
        if (o.status == SolveStatus::Solved) {
            // Maximal solutions decrease strictly as lambda does.
            for (std::size_t i = 0; i < o.v.size(); ++i) {
                if (!(o.v[i] < last.v[i] + 1e-10)) {
                    SolveOutcome bad = std::move(o);
                    bad.status = SolveStatus::Inconclusive;
                    bad.note = "monotonicity violation in the critical family at vertex \"" +
                               cspec.graph->id_of(i) + "\"";
                    return bad;
                }
            }
            last = std::move(o);
            last_lambda = lambda_k;
            if (lambda_k < critical.lambda_hi) {
                critical.lambda_hi = lambda_k;
                critical.solution_at_hi = last;
            }
        } else {
            // The scheme converges iff a solution exists, so a failed probe
            // certifies lambda_c > lambda_k; refine the bracket.
            if (lambda_k > critical.lambda_lo) critical.lambda_lo = lambda_k;
            if (o.status == SolveStatus::Inconclusive) critical.heuristic_flagged = true;
        }
    }

    SolveOutcome out = last;
    out.status = SolveStatus::Inconclusive;
    out.note = "residual at the lambda_c estimate stayed above " + fmt(opts.residual_tol) +
               " after " + std::to_string(opts.max_halvings) + " halvings";
    return out;
}

DiagnosticsReport diagnostics(const ProblemSpec& spec, const SolveOutcome& outcome) {
    validate(spec);
    if (outcome.status != SolveStatus::Solved)
        throw std::invalid_argument("diagnostics: outcome is not Solved");
    const WeightedGraph& g = *spec.graph;
    const double vol = g.total_measure();
    DiagnosticsReport rep;
    rep.mean_v = integrate(g, outcome.v) / vol;
    VertexFunction vprime(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) vprime[i] = outcome.v[i] - rep.mean_v;
    rep.grad_norm = std::sqrt(std::max(0.0, integrate(g, gradient_form(g, vprime, vprime))));
    rep.sobolev = sobolev_norm(g, outcome.v);
    rep.min_u = min_value(outcome.u.data(), outcome.u.size());
    rep.mean_u = integrate(g, outcome.u) / vol;
    return rep;
}

SweepExponents sweep_exponents(const std::vector<std::array<double, 3>>& rows) {
    SweepExponents exp;
    auto slope = [&](int column) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const auto& row : rows) {
            if (!(row[0] > 0.0) || !(row[column] > 0.0)) continue;
            const double x = std::log(row[0]);
            const double y = std::log(row[column]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        if (m < 2) return 0.0;
        const double denom = m * sxx - sx * sx;
        return denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    };
    exp.grad_exponent = slope(1);
    exp.sobolev_exponent = slope(2);
    return exp;
}

}  // namespace csh
