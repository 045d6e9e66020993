#pragma once

#include <string>

#include "expdecomp/graph.hpp"

namespace expdecomp {

// k cliques of size s in a ring; one ring edge between consecutive cliques.
// k = 1 is a plain clique (a self ring edge would be a loop); k = 2 yields a
// parallel pair of ring edges.
Graph gen_ring_of_cliques(int k, int s);

// Two K_s joined by a single bridge edge.
Graph gen_dumbbell(int s);

Graph gen_path(int n);

// Simple d-regular graph via the pairing model with full-restart rejection.
// Requires n*d even, 0 <= d < n.
Graph gen_random_regular(int n, int d, uint64_t seed);

// Edge-list text in the loader's format (vertex ids as labels).
std::string to_edge_list_text(const Graph& g, const std::string& header_comment = "");

}  // namespace expdecomp
