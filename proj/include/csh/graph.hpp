#pragma once

// Finite connected weighted graphs with a positive vertex measure, and the
// discrete calculus on them: mu-Laplacian, gradient form, integral, norms.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "csh/kernels.hpp"

namespace csh {

struct VertexSpec {
    std::string id;
    double mu = 1.0;
};

struct EdgeSpec {
    std::string u;
    std::string v;
    double w = 1.0;
};

// Real values on the vertex set, dense in graph index order.
class VertexFunction {
public:
    VertexFunction() = default;
    explicit VertexFunction(std::size_t n, double value = 0.0) : v_(n, value) {}
    explicit VertexFunction(std::vector<double> values) : v_(std::move(values)) {}

    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

private:
    std::vector<double> v_;
};

// Immutable after construction; safe to share across threads.
//
// Construction validates the full invariant set: positive weights and
// measure, no self-loops, no duplicate edges (in either orientation),
// known endpoints, and connectedness.
class WeightedGraph {
public:
    WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

    std::size_t size() const { return vertices_.size(); }
    double mu(std::size_t i) const { return mu_[i]; }
    const std::vector<double>& mu_values() const { return mu_; }
    double total_measure() const { return volume_; }  // |V| = sum_x mu(x)

    const std::string& id_of(std::size_t i) const { return vertices_[i].id; }
    std::optional<std::size_t> index_of(std::string_view id) const;
    std::size_t require_index(std::string_view id) const;  // throws, naming id

    // Neighbor structure (no diagonal): col = neighbor, val = omega_xy.
    const kernels::Csr& adjacency() const { return adjacency_; }
    // mu-Laplacian materialized once as CSR (diagonal included):
    // row x holds omega_xy/mu(x) off-diagonal and -deg(x)/mu(x) on the diagonal.
    const kernels::Csr& laplacian_op() const { return laplacian_; }
    double weighted_degree(std::size_t i) const { return degree_[i]; }

    const std::vector<VertexSpec>& vertex_specs() const { return vertices_; }
    const std::vector<EdgeSpec>& edge_specs() const { return edges_; }

private:
    std::vector<VertexSpec> vertices_;
    std::vector<EdgeSpec> edges_;
    std::vector<double> mu_;
    std::vector<double> degree_;  // sum of incident weights per vertex
    double volume_ = 0.0;
    kernels::Csr adjacency_;
    kernels::Csr laplacian_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Delta u(x) = (1/mu(x)) sum_{y~x} omega_xy (u(y) - u(x))
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u);

// Gamma(u,v)(x) = (1/(2 mu(x))) sum_{y~x} omega_xy (u(y)-u(x)) (v(y)-v(x));
// Gamma(u,u) = |grad u|^2.
VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& u,
                             const VertexFunction& v);

// integral over V: sum_x mu(x) u(x)
double integrate(const WeightedGraph& g, const VertexFunction& u);

// W^{1,2} norm: sqrt( integral of |grad u|^2 + u^2 )
double sobolev_norm(const WeightedGraph& g, const VertexFunction& u);

// Checks the maximum-principle statement for a shift K > 0:
// premise   Delta u - K u >= 0 everywhere,
// conclusion u <= 0 everywhere.
// A test oracle, never a solver step. `slack` absorbs solver round-off when
// the premise was enforced numerically.
struct MaxPrincipleVerdict {
    bool premise_holds = false;
    bool conclusion_holds = false;
    std::size_t premise_witness = 0;     // vertex violating the premise
    std::size_t conclusion_witness = 0;  // vertex with u > 0
};
MaxPrincipleVerdict check_max_principle(const WeightedGraph& g, const VertexFunction& u,
                                        double k, double slack = 0.0);

// Smallest valid Poincare constant: integral u^2 <= C integral |grad u|^2 for
// all mean-zero u. Computed as 1 / (smallest nonzero eigenvalue of -Delta) by
// inverse power iteration deflated against constants.
double estimate_poincare_constant(const WeightedGraph& g);

}  // namespace csh
