#pragma once

#include <optional>

#include "expdecomp/graph.hpp"
#include "expdecomp/unit_flow.hpp"

namespace expdecomp {

// Exact sparsity as a rational; den == 0 encodes "no nontrivial cut exists"
// (single vertex or all cuts have zero volume on the small side).
struct ExpansionReport {
  bool is_expander = true;
  int64_t phi_num = 0;
  int64_t phi_den = 0;
  VertexSet witness;  // achieves phi_num/phi_den when phi_den > 0
};

inline constexpr int kBruteForceLimit = 24;

// Exhaustive minimum over all nonempty proper subsets of
// cut(S) / min(vol(S), vol(V\S)); exact rational verdict against phi.
// Cuts whose smaller side has zero volume cannot violate expansion and are
// skipped. Throws when n > 24.
ExpansionReport brute_force_expansion(const Graph& g, double phi);

struct NearlyExpanderReport {
  bool holds = true;
  std::vector<Vertex> witness;  // violating S when !holds
};

// Definition check: for all S subseteq A with deg_G(S) <= deg_G(A\S),
// |E_G(S, V\S)| >= phi * deg_G(S). The cut counts edges in G, not G[A].
NearlyExpanderReport brute_force_nearly_expander(const Graph& g, const VertexSet& a, double phi);

// Edge bounds, sink caps and per-vertex conservation of a flow instance.
bool check_flow_feasible(const FlowInstance& inst);

}  // namespace expdecomp
