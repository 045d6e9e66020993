#include "expdecomp/decomposition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <mutex>
#include <stdexcept>

#include "expdecomp/cut_matching.hpp"
#include "expdecomp/trimming.hpp"
#include "expdecomp/verify.hpp"

namespace expdecomp {

namespace {

struct ClusterOut {
  std::vector<Vertex> members;  // root ids
  ClusterCertificate cert;
};

struct BuildState {
  const Graph* root = nullptr;
  double phi = 0.0;
  int64_t depth_bound = 0;
  Counters* counters = nullptr;
  std::mutex mu;  // guards clusters/counters/depth under sibling parallelism
  std::vector<ClusterOut> clusters;
  int64_t max_depth = 0;
  std::atomic<int> spare_threads{0};
};

void emit_cluster(BuildState& st, std::vector<Vertex> members, ClusterCertificate cert);

void decompose_rec(BuildState& st, const Graph& g, const std::vector<Vertex>& to_root, uint64_t seed,
                   int64_t depth, int64_t parent_edges);

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<std::vector<Vertex>> comps;
  std::vector<uint8_t> seen(g.num_vertices(), 0);
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (const auto& [u, e] : g.neighbors(v)) {
        (void)e;
        if (!seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
          stack.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

void recurse_on(BuildState& st, const Graph& g, const std::vector<Vertex>& to_root,
                const std::vector<Vertex>& members, uint64_t seed, int64_t depth, int64_t parent_edges) {
  InducedSubgraph sub = induced_subgraph(g, VertexSet(g, members));
  std::vector<Vertex> sub_to_root(sub.to_parent.size());
  for (size_t i = 0; i < sub.to_parent.size(); ++i) sub_to_root[i] = to_root[sub.to_parent[i]];
  if (parent_edges > 0 && sub.graph.num_edges() >= parent_edges)
    throw std::logic_error("decomposition: recursive call did not shrink the edge set");
  decompose_rec(st, sub.graph, sub_to_root, seed, depth, sub.graph.num_edges());
}

void emit_cluster(BuildState& st, std::vector<Vertex> members, ClusterCertificate cert) {
  std::lock_guard<std::mutex> lock(st.mu);
  st.clusters.push_back({std::move(members), cert});
}

// Emits a cluster, double-checking small ones exactly; an exact failure (only
// possible after an upstream nearly-expander promise was broken) splits along
// the brute-force witness instead of emitting a bad cluster.
void emit_checked(BuildState& st, const Graph& g, const std::vector<Vertex>& to_root,
                  const std::vector<Vertex>& members, ClusterCertificate cert, uint64_t seed, int64_t depth,
                  int64_t parent_edges) {
  if (static_cast<int>(members.size()) <= kBruteForceLimit && members.size() >= 2) {
    InducedSubgraph sub = induced_subgraph(g, VertexSet(g, members));
    ExpansionReport rep = brute_force_expansion(sub.graph, st.phi / 6.0);
    if (!rep.is_expander) {
      if (st.counters) {
        std::lock_guard<std::mutex> lock(st.mu);
        ++st.counters->anomalies;
      }
      std::vector<Vertex> side, other;
      for (Vertex v = 0; v < sub.graph.num_vertices(); ++v)
        (rep.witness.contains(v) ? side : other).push_back(sub.to_parent[v]);
      recurse_on(st, g, to_root, side, derive_seed(seed, 71), depth + 1, parent_edges);
      recurse_on(st, g, to_root, other, derive_seed(seed, 72), depth + 1, parent_edges);
      return;
    }
    cert.verified_exact = true;
  }
  std::vector<Vertex> root_members(members.size());
  for (size_t i = 0; i < members.size(); ++i) root_members[i] = to_root[members[i]];
  emit_cluster(st, std::move(root_members), cert);
}

void process_component(BuildState& st, const Graph& g, const std::vector<Vertex>& to_root, uint64_t seed,
                       int64_t depth) {
  int64_t m = g.num_edges();
  Counters local;
  CutMatchResult cm = cut_matching(g, st.phi, derive_seed(seed, 1), &local);
  {
    std::lock_guard<std::mutex> lock(st.mu);
    if (st.counters) st.counters->merge(local);
    st.max_depth = std::max(st.max_depth, depth);
  }

  auto all = VertexSet::all(g);
  if (cm.cut.size() == 0) {
    // Certified nearly expanding; trim with A = V yields the expander
    // certificate (the boundary is empty, so it succeeds in one round).
    Counters tl;
    TrimResult tr = trim(g, all, st.phi, &tl);
    if (st.counters) {
      std::lock_guard<std::mutex> lock(st.mu);
      st.counters->merge(tl);
    }
    if (!tr.success) throw std::logic_error("decomposition: trim failed on a boundaryless set");
    emit_checked(st, g, to_root, tr.a_prime.vertices(),
                 {ClusterCertificate::Kind::TrimFlow, tr.iterations, false}, seed, depth, m);
    return;
  }

  if (100 * cm.cut.volume() > m) {
    recurse_on(st, g, to_root, cm.cut.vertices(), derive_seed(seed, 2), depth + 1, m);
    recurse_on(st, g, to_root, cm.cut.complement().vertices(), derive_seed(seed, 3), depth + 1, m);
    return;
  }

  Counters tl;
  TrimResult tr = trim(g, cm.cut.complement(), st.phi, &tl);
  if (st.counters) {
    std::lock_guard<std::mutex> lock(st.mu);
    st.counters->merge(tl);
  }
  if (tr.success && tr.a_prime.size() > 0) {
    emit_checked(st, g, to_root, tr.a_prime.vertices(), {ClusterCertificate::Kind::TrimFlow, tr.iterations, false},
                 seed, depth, m);
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      if (!tr.a_prime.contains(v)) rest.push_back(v);
    if (!rest.empty()) recurse_on(st, g, to_root, rest, derive_seed(seed, 4), depth + 1, m);
    return;
  }

  // Trim pruned everything: the nearly-expander promise was broken upstream.
  // Fall back to the two sides of the cut-matching cut.
  if (st.counters) {
    std::lock_guard<std::mutex> lock(st.mu);
    ++st.counters->anomalies;
  }
  recurse_on(st, g, to_root, cm.cut.vertices(), derive_seed(seed, 5), depth + 1, m);
  recurse_on(st, g, to_root, cm.cut.complement().vertices(), derive_seed(seed, 6), depth + 1, m);
}

void decompose_rec(BuildState& st, const Graph& g, const std::vector<Vertex>& to_root, uint64_t seed,
                   int64_t depth, int64_t parent_edges) {
  (void)parent_edges;
  if (depth > st.depth_bound) throw std::logic_error("decomposition: recursion depth bound exceeded");
  auto comps = connected_components(g);
  std::vector<std::function<void()>> tasks;
  for (size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& comp = comps[ci];
    uint64_t comp_seed = derive_seed(seed, 100 + ci);
    if (comp.size() == 1) {
      emit_checked(st, g, to_root, comp, {ClusterCertificate::Kind::Edgeless, 0, false}, comp_seed, depth, -1);
      continue;
    }
    if (comps.size() == 1) {
      process_component(st, g, to_root, comp_seed, depth);
      continue;
    }
    InducedSubgraph sub = induced_subgraph(g, VertexSet(g, comp));
    std::vector<Vertex> sub_to_root(sub.to_parent.size());
    for (size_t i = 0; i < sub.to_parent.size(); ++i) sub_to_root[i] = to_root[sub.to_parent[i]];
    tasks.push_back([&st, sub = std::move(sub), sub_to_root = std::move(sub_to_root), comp_seed, depth]() {
      process_component(st, sub.graph, sub_to_root, comp_seed, depth);
    });
  }
  // Independent components may run concurrently; the cluster list is merged
  // under a lock and renumbered deterministically afterwards.
  std::vector<std::future<void>> futures;
  for (auto& task : tasks) {
    int spare = st.spare_threads.load();
    if (spare > 0 && st.spare_threads.compare_exchange_strong(spare, spare - 1)) {
      futures.push_back(std::async(std::launch::async, [&st, task]() {
        task();
        st.spare_threads.fetch_add(1);
      }));
    } else {
      task();
    }
  }
  for (auto& f : futures) f.get();
}

}  // namespace

Partition compute_exp_decomp(const Graph& g, double phi, uint64_t seed, const DecompOptions& opts) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("compute_exp_decomp: phi must be in (0,1)");
  BuildState st;
  st.root = &g;
  st.phi = phi;
  st.counters = opts.counters;
  st.spare_threads.store(std::max(0, opts.threads - 1));
  int64_t m = std::max<int64_t>(g.num_edges(), 2);
  st.depth_bound = 2 * static_cast<int64_t>(std::ceil(std::log(static_cast<double>(m)) / std::log(100.0 / 99.0))) + 1;

  std::vector<Vertex> ident(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) ident[v] = v;
  if (g.num_vertices() > 0) decompose_rec(st, g, ident, seed, 0, g.num_edges());

  // Deterministic cluster ids: order by smallest member.
  std::sort(st.clusters.begin(), st.clusters.end(),
            [](const ClusterOut& a, const ClusterOut& b) { return a.members.front() < b.members.front(); });

  Partition p;
  p.cluster_of.assign(g.num_vertices(), -1);
  p.max_recursion_depth = st.max_depth;
  for (size_t i = 0; i < st.clusters.size(); ++i) {
    for (Vertex v : st.clusters[i].members) {
      if (p.cluster_of[v] != -1) throw std::logic_error("decomposition: clusters overlap");
      p.cluster_of[v] = static_cast<int32_t>(i);
    }
    p.clusters.emplace_back(g, st.clusters[i].members);
    p.certificates.push_back(st.clusters[i].cert);
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (p.cluster_of[v] == -1) throw std::logic_error("decomposition: clusters do not cover V");
  p.error_edges = measure_error(g, p);
  return p;
}

int64_t measure_error(const Graph& g, const Partition& p) {
  if (static_cast<int>(p.cluster_of.size()) != g.num_vertices())
    throw std::invalid_argument("measure_error: partition does not match graph");
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (p.cluster_of[v] < 0) throw std::invalid_argument("measure_error: partition does not cover V");
  int64_t err = 0;
  for (const Edge& e : g.edges())
    if (p.cluster_of[e.u] != p.cluster_of[e.v]) ++err;
  return err;
}

}  // namespace expdecomp
