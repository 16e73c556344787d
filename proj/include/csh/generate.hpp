#pragma once

// Built-in graph families. Defaults are mu = 1 and omega = 1; the random_*
// flags draw values uniformly from [0.5, 2], deterministically from the seed
// (measures first in vertex order, then weights in edge order).

#include <cstdint>

#include "csh/graph.hpp"

namespace csh {

struct GenerateOptions {
    std::uint64_t seed = 0;
    bool random_weights = false;
    bool random_measure = false;
};

WeightedGraph make_path(int n, const GenerateOptions& opts = {});
WeightedGraph make_cycle(int n, const GenerateOptions& opts = {});      // n >= 3
WeightedGraph make_complete(int n, const GenerateOptions& opts = {});
// 4-neighbor wraparound lattice; rows, cols >= 3 so no edge duplicates arise
WeightedGraph make_torus(int rows, int cols, const GenerateOptions& opts = {});
// Erdos-Renyi G(n, p), redrawn until connected
WeightedGraph make_random(int n, double p, const GenerateOptions& opts = {});

}  // namespace csh
