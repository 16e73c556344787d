#include "csh/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace csh {

namespace {

void require_same_domain(const WeightedGraph& g, const VertexFunction& u, const char* what) {
    if (u.size() != g.size())
        throw std::invalid_argument(std::string(what) + ": function has " +
                                    std::to_string(u.size()) + " values but the graph has " +
                                    std::to_string(g.size()) + " vertices");
}

}  // namespace

WeightedGraph::WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    const std::size_t n = vertices_.size();
    if (n == 0) throw std::invalid_argument("graph has no vertices");

    mu_.resize(n);
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = vertices_[i];
        if (v.id.empty()) throw std::invalid_argument("vertex " + std::to_string(i) + " has an empty id");
        if (!(v.mu > 0.0) || !std::isfinite(v.mu))
            throw std::invalid_argument("vertex \"" + v.id + "\": measure must be a positive finite number");
        if (!index_.emplace(v.id, i).second)
            throw std::invalid_argument("duplicate vertex id \"" + v.id + "\"");
        mu_[i] = v.mu;
        volume_ += v.mu;
    }

    // Validate edges and collect per-vertex neighbor lists.
    std::vector<std::vector<std::pair<std::int32_t, double>>> nbrs(n);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges_) {
        const auto iu = index_.find(e.u);
        const auto iv = index_.find(e.v);
        if (iu == index_.end())
            throw std::invalid_argument("edge \"" + e.u + "\"-\"" + e.v + "\": unknown vertex \"" + e.u + "\"");
        if (iv == index_.end())
            throw std::invalid_argument("edge \"" + e.u + "\"-\"" + e.v + "\": unknown vertex \"" + e.v + "\"");
        if (iu->second == iv->second)
            throw std::invalid_argument("edge \"" + e.u + "\"-\"" + e.v + "\": self-loops are not allowed");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw std::invalid_argument("edge \"" + e.u + "\"-\"" + e.v + "\": weight must be a positive finite number");
        auto key = std::minmax(iu->second, iv->second);
        if (!seen.insert(key).second)
            throw std::invalid_argument("duplicate edge between \"" + e.u + "\" and \"" + e.v + "\"");
        nbrs[iu->second].emplace_back(static_cast<std::int32_t>(iv->second), e.w);
        nbrs[iv->second].emplace_back(static_cast<std::int32_t>(iu->second), e.w);
    }

    degree_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(nbrs[i].begin(), nbrs[i].end());
        for (const auto& [j, w] : nbrs[i]) degree_[i] += w;
    }

    // Connectivity by traversal from vertex 0.
    {
        std::vector<char> visited(n, 0);
        std::vector<std::size_t> stack = {0};
        visited[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (const auto& [y, w] : nbrs[x]) {
                if (!visited[y]) {
                    visited[y] = 1;
                    ++count;
                    stack.push_back(static_cast<std::size_t>(y));
                }
            }
        }
        if (count != n) {
            std::size_t missing = 0;
            while (visited[missing]) ++missing;
            throw std::invalid_argument("graph is not connected: vertex \"" + vertices_[missing].id +
                                        "\" is unreachable from \"" + vertices_[0].id + "\"");
        }
    }

    // Materialize adjacency and the mu-Laplacian.
    adjacency_.n = static_cast<std::int32_t>(n);
    adjacency_.row_ptr.assign(n + 1, 0);
    laplacian_.n = static_cast<std::int32_t>(n);
    laplacian_.row_ptr.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        adjacency_.row_ptr[i + 1] = adjacency_.row_ptr[i] + static_cast<std::int32_t>(nbrs[i].size());
        laplacian_.row_ptr[i + 1] = laplacian_.row_ptr[i] + static_cast<std::int32_t>(nbrs[i].size() + 1);
    }
    adjacency_.col.reserve(adjacency_.row_ptr[n]);
    adjacency_.val.reserve(adjacency_.row_ptr[n]);
    laplacian_.col.reserve(laplacian_.row_ptr[n]);
    laplacian_.val.reserve(laplacian_.row_ptr[n]);
    for (std::size_t i = 0; i < n; ++i) {
        const double inv_mu = 1.0 / mu_[i];
        bool diag_done = false;
        for (const auto& [j, w] : nbrs[i]) {
            adjacency_.col.push_back(j);
            adjacency_.val.push_back(w);
            if (!diag_done && j > static_cast<std::int32_t>(i)) {
                laplacian_.col.push_back(static_cast<std::int32_t>(i));
                laplacian_.val.push_back(-degree_[i] * inv_mu);
                diag_done = true;
            }
            laplacian_.col.push_back(j);
            laplacian_.val.push_back(w * inv_mu);
        }
        if (!diag_done) {
            laplacian_.col.push_back(static_cast<std::int32_t>(i));
            laplacian_.val.push_back(-degree_[i] * inv_mu);
        }
    }
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t WeightedGraph::require_index(std::string_view id) const {
    auto idx = index_of(id);
    if (!idx) throw std::invalid_argument("unknown vertex id \"" + std::string(id) + "\"");
    return *idx;
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u) {
    require_same_domain(g, u, "laplacian");
    VertexFunction out(g.size());
    kernels::spmv(g.laplacian_op(), u.data(), out.data());
    return out;
}

VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& u,
                             const VertexFunction& v) {
    require_same_domain(g, u, "gradient_form");
    require_same_domain(g, v, "gradient_form");
    const auto& adj = g.adjacency();
    VertexFunction out(g.size());
    for (std::int32_t x = 0; x < adj.n; ++x) {
        double s = 0.0;
        for (std::int32_t k = adj.row_ptr[x]; k < adj.row_ptr[x + 1]; ++k) {
            const std::int32_t y = adj.col[k];
            s += adj.val[k] * (u[y] - u[x]) * (v[y] - v[x]);
        }
        out[x] = s / (2.0 * g.mu(x));
    }
    return out;
}

double integrate(const WeightedGraph& g, const VertexFunction& u) {
    require_same_domain(g, u, "integrate");
    return kernels::dot(g.mu_values().data(), u.data(), g.size());
}

double sobolev_norm(const WeightedGraph& g, const VertexFunction& u) {
    require_same_domain(g, u, "sobolev_norm");
    VertexFunction grad2 = gradient_form(g, u, u);
    double s = integrate(g, grad2) + kernels::dot3(g.mu_values().data(), u.data(), u.data(), g.size());
    return std::sqrt(std::max(0.0, s));
}

MaxPrincipleVerdict check_max_principle(const WeightedGraph& g, const VertexFunction& u,
                                        double k, double slack) {
    require_same_domain(g, u, "check_max_principle");
    if (!(k > 0.0)) throw std::invalid_argument("check_max_principle: K must be positive");
    VertexFunction lu = laplacian(g, u);
    MaxPrincipleVerdict verdict;
    verdict.premise_holds = true;
    verdict.conclusion_holds = true;
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (lu[x] - k * u[x] < -slack && verdict.premise_holds) {
            verdict.premise_holds = false;
            verdict.premise_witness = x;
        }
        if (u[x] > slack && verdict.conclusion_holds) {
            verdict.conclusion_holds = false;
            verdict.conclusion_witness = x;
        }
    }
    return verdict;
}

}  // namespace csh
