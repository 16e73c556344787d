#pragma once

// Graph file format (JSON, UTF-8):
//   {"vertices":[{"id":"a","mu":1.0}, ...],
//    "edges":[{"u":"a","v":"b","w":1.0}, ...]}
// Duplicate edges, self-loops, non-positive weights or measures, unknown
// endpoints and disconnected graphs are all rejected with a diagnostic
// naming the offending entry.

#include <string>

#include "csh/graph.hpp"

namespace csh {

WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

// FNV-1a (64-bit) over the file bytes; binds result files to their graph.
std::string file_hash_hex(const std::string& path);

}  // namespace csh
