#pragma once

#include <string>
#include <vector>

#include "expdecomp/graph.hpp"
#include "expdecomp/unit_flow.hpp"

namespace expdecomp {

// Iteratively routes boundary-induced source mass with growing sinks, prunes
// level cuts while the flow stays infeasible, and returns a subset whose
// induced graph the final feasible flow certifies as a phi/6-expander.
struct TrimResult {
  VertexSet a_prime;                             // on the original graph
  InducedSubgraph view;                          // induced on the starting A
  FlowInstance certificate;                      // final flow (on view.graph)
  LevelState levels;                             // labeling of the last round
  int64_t iterations = 0;                        // outer rounds executed
  std::vector<std::vector<Vertex>> pruned_history;  // pruned sets, original ids
  bool success = false;                          // zero-excess certificate reached
  bool rounds_exceeded = false;                  // needed more than ceil(log2 n) rounds
  bool contraction_failed = false;               // some round did not shrink the excess
  std::vector<int64_t> excess_history;           // total excess at the end of each round
  std::string diagnostic;
  int64_t h = 0;
  int64_t kappa = 0;                             // edge capacity ceil(2/phi)
};

TrimResult trim(const Graph& g, const VertexSet& a, double phi, Counters* counters = nullptr);

// Ball growing over the level structure: returns the first prefix
// S_j = {v : level(v) >= h - j} whose residual out-boundary is below
// (5 ln m / h) * deg(S_j), degrees taken from deg_for_threshold (original
// graph degrees). Requires some vertex at level h.
std::vector<Vertex> level_cut(const FlowInstance& inst, const LevelState& lvl,
                              const std::vector<int64_t>& deg_for_threshold, double ln_m,
                              int64_t* steps_out = nullptr);

// Mechanical check of the expander certificate: inst is a feasible zero-excess
// routing of source ceil(2/phi) * (deg_G(v) - deg_G[A](v)) into sinks
// <= deg_G(v) within uniform capacity ceil(2/phi) on G[A]. A is given by the
// instance's active set inside view.
bool certify_expander(const Graph& g, const VertexSet& a, const InducedSubgraph& view, const FlowInstance& inst,
                      double phi);

}  // namespace expdecomp
