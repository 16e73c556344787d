#include "csh/generate.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace csh {

namespace {

// Platform-stable uniform in [0, 1): raw mt19937_64 bits, no distribution
// object, so identical seeds give identical files everywhere.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw_05_2(std::mt19937_64& rng) { return 0.5 + 1.5 * u01(rng); }

std::string letter_id(int i, int n) {
    if (n <= 26) return std::string(1, static_cast<char>('a' + i));
    return "v" + std::to_string(i);
}

WeightedGraph assemble(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges,
                       const GenerateOptions& opts, std::mt19937_64& rng) {
    if (opts.random_measure)
        for (auto& v : vertices) v.mu = draw_05_2(rng);
    if (opts.random_weights)
        for (auto& e : edges) e.w = draw_05_2(rng);
    return WeightedGraph(std::move(vertices), std::move(edges));
}

}  // namespace

WeightedGraph make_path(int n, const GenerateOptions& opts) {
    if (n < 1) throw std::invalid_argument("path: n must be >= 1");
    std::mt19937_64 rng(opts.seed);
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    for (int i = 0; i < n; ++i) vs.push_back({letter_id(i, n), 1.0});
    for (int i = 0; i + 1 < n; ++i) es.push_back({vs[i].id, vs[i + 1].id, 1.0});
    return assemble(std::move(vs), std::move(es), opts, rng);
}

WeightedGraph make_cycle(int n, const GenerateOptions& opts) {
    if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
    std::mt19937_64 rng(opts.seed);
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    for (int i = 0; i < n; ++i) vs.push_back({letter_id(i, n), 1.0});
    for (int i = 0; i < n; ++i) es.push_back({vs[i].id, vs[(i + 1) % n].id, 1.0});
    return assemble(std::move(vs), std::move(es), opts, rng);
}

WeightedGraph make_complete(int n, const GenerateOptions& opts) {
    if (n < 1) throw std::invalid_argument("complete: n must be >= 1");
    std::mt19937_64 rng(opts.seed);
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    for (int i = 0; i < n; ++i) vs.push_back({letter_id(i, n), 1.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.push_back({vs[i].id, vs[j].id, 1.0});
    return assemble(std::move(vs), std::move(es), opts, rng);
}

WeightedGraph make_torus(int rows, int cols, const GenerateOptions& opts) {
    if (rows < 3 || cols < 3)
        throw std::invalid_argument("torus: rows and cols must be >= 3");
    std::mt19937_64 rng(opts.seed);
    std::vector<VertexSpec> vs;
    std::vector<EdgeSpec> es;
    auto id = [&](int i, int j) {
        return "t" + std::to_string(i) + "_" + std::to_string(j);
    };
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) vs.push_back({id(i, j), 1.0});
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            es.push_back({id(i, j), id(i, (j + 1) % cols), 1.0});
            es.push_back({id(i, j), id((i + 1) % rows, j), 1.0});
        }
    return assemble(std::move(vs), std::move(es), opts, rng);
}

WeightedGraph make_random(int n, double p, const GenerateOptions& opts) {
    if (n < 1) throw std::invalid_argument("random: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random: p must lie in [0, 1]");
    std::mt19937_64 rng(opts.seed);

    std::vector<std::pair<int, int>> pairs;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        pairs.clear();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (u01(rng) < p) pairs.emplace_back(i, j);

        // union-find connectivity check before committing to this draw
        std::vector<int> parent(n);
        for (int i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int components = n;
        for (const auto& [i, j] : pairs) {
            int a = find(i), b = find(j);
            if (a != b) {
                parent[a] = b;
                --components;
            }
        }
        if (components != 1) continue;

        std::vector<VertexSpec> vs;
        std::vector<EdgeSpec> es;
        for (int i = 0; i < n; ++i) vs.push_back({"v" + std::to_string(i), 1.0});
        for (const auto& [i, j] : pairs) es.push_back({vs[i].id, vs[j].id, 1.0});
        return assemble(std::move(vs), std::move(es), opts, rng);
    }
    throw std::runtime_error("random: failed to draw a connected graph; increase p");
}

}  // namespace csh
