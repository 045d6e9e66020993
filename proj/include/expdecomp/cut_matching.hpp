#pragma once

#include <utility>
#include <vector>

#include "expdecomp/graph.hpp"
#include "expdecomp/unit_flow.hpp"

namespace expdecomp {

// Bounded-height flow between unit sources S and unit sinks T plus the level
// cut taken when the flow chokes. paths/matching realize the embedded
// (possibly non-perfect) matching; cut contains every unmatched source and no
// sink that did not absorb.
struct MatchResult {
  std::vector<std::vector<Vertex>> paths;  // S -> T vertex sequences (self-matches are singletons)
  std::vector<std::pair<Vertex, Vertex>> matching;
  VertexSet cut;
  int64_t congestion = 0;  // max paths over one edge
  int64_t loop_iterations = 0;
  int64_t level_cut_steps = 0;
  int64_t dropped_paths = 0;
  int64_t h = 0;
};

MatchResult parallel_matching(const Graph& g, const VertexSet& s, const VertexSet& t, double phi,
                              Counters* counters = nullptr);

// Path decomposition of the net flow. Opposing pushes over an edge cancel in
// the flow vector, which realizes the tail-swapped pairing; per-edge
// congestion is therefore at most cap(e). Paths are vertex-simple (cycles in
// the remaining flow are removed). At most drop_fraction * |paths| longest
// paths are discarded and every survivor has length <= ceil((h+1)/drop_fraction).
struct PathDecomposition {
  std::vector<std::vector<Vertex>> paths;
  std::vector<std::vector<EdgeId>> path_edges;
  std::vector<uint8_t> ends_at_sink;  // consumed sink capacity vs parked as excess
  int64_t dropped = 0;
};

PathDecomposition path_decompose(const FlowInstance& inst, int64_t h, double drop_fraction);

struct CutMatchResult {
  VertexSet cut;                      // on the input graph
  bool sparsity_ok = false;           // |E(C, V\C)| < phi*m / (64*ceil(log2 n)^2)
  bool balanced = false;              // deg_G(C) > m/100
  bool certified_remainder = false;   // no cut below phi found; remainder declared nearly expanding
  int64_t rounds = 0;
};

// Cut-matching driver. Components with at most 24 vertices use the exact
// minimum-conductance cut player; larger graphs play random-projection rounds
// on the degree-reduced graph, where each round evaluates sweep cuts of the
// projection order (accepted only on an exact rational conductance < phi
// check against the remainder) and otherwise embeds a matching via
// parallel_matching.
CutMatchResult cut_matching(const Graph& g, double phi, uint64_t seed, Counters* counters = nullptr);

}  // namespace expdecomp
