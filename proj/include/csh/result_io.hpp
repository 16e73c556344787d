#pragma once

// Result files for the solve and critical commands. All numbers are written
// with 17 significant digits; non-finite values serialize as null. Files
// embed an FNV-1a hash of the graph file so verification cannot silently run
// against the wrong instance.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "csh/solver.hpp"

namespace csh {

struct SolveRecord {
    std::string graph_hash;
    std::string equation;  // "generalized" | "standard"
    double lambda = 0.0;
    std::vector<std::string> vortices;
    std::string status;
    int iterations = 0;
    double residual_inf = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, double>> u;  // present iff Solved
    std::vector<TraceEntry> trace;
    std::string note;
};

void write_solve_result(const std::string& path, const WeightedGraph& g,
                        const ProblemSpec& spec, const std::vector<std::string>& vortex_ids,
                        const SolveOutcome& outcome, const std::string& graph_hash);

SolveRecord read_solve_result(const std::string& path);

void write_critical_result(const std::string& path, const WeightedGraph& g,
                           const CriticalSpec& spec, const std::vector<std::string>& vortex_ids,
                           const CriticalResult& critical, const SolveOutcome& at_critical,
                           const std::string& graph_hash);

}  // namespace csh
