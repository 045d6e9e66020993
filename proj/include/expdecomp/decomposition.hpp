#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expdecomp/graph.hpp"
#include "expdecomp/util.hpp"

namespace expdecomp {

struct ClusterCertificate {
  enum class Kind {
    TrimFlow,        // zero-excess routing certificate from trim
    Edgeless,        // single vertex / no internal edges
    BruteForce,      // exact expansion check (fallback path)
  };
  Kind kind = Kind::Edgeless;
  int64_t trim_iterations = 0;
  bool verified_exact = false;  // brute-force phi/6 double check ran and passed
};

struct Partition {
  std::vector<int32_t> cluster_of;     // per vertex
  std::vector<VertexSet> clusters;     // disjoint cover of V, on the input graph
  std::vector<ClusterCertificate> certificates;
  int64_t error_edges = 0;
  int64_t max_recursion_depth = 0;
};

struct DecompOptions {
  int threads = 1;
  Counters* counters = nullptr;
};

// Recursive driver: cut-match, branch on balance, trim, recurse. Connected
// components are split first and processed independently; edgeless components
// become singleton clusters.
Partition compute_exp_decomp(const Graph& g, double phi, uint64_t seed, const DecompOptions& opts = {});

// Exact inter-cluster edge count; throws when the partition does not cover V.
int64_t measure_error(const Graph& g, const Partition& p);

}  // namespace expdecomp
