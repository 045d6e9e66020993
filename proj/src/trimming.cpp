#include "expdecomp/trimming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expdecomp {

std::vector<Vertex> level_cut(const FlowInstance& inst, const LevelState& lvl,
                              const std::vector<int64_t>& deg_for_threshold, double ln_m, int64_t* steps_out) {
  const Graph& g = *inst.graph;
  int64_t h = lvl.h;
  std::vector<uint8_t> in_s(g.num_vertices(), 0);
  std::vector<std::pair<int64_t, Vertex>> by_level;  // active vertices, level descending
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (inst.active(v)) by_level.emplace_back(-lvl.level[v], v);
  std::sort(by_level.begin(), by_level.end());

  size_t next = 0;
  int64_t vol = 0;
  auto grow_to = [&](int64_t min_level) {
    while (next < by_level.size() && -by_level[next].first >= min_level) {
      Vertex v = by_level[next].second;
      in_s[v] = 1;
      vol += deg_for_threshold[v];
      ++next;
    }
  };
  grow_to(h);
  if (next == 0) throw std::logic_error("level_cut: no vertex at level h");

  double factor = 5.0 * ln_m / static_cast<double>(h);
  int64_t j = 0;
  while (true) {
    int64_t residual_out = 0;
    for (size_t i = 0; i < next; ++i) {
      Vertex v = by_level[i].second;
      for (const auto& [u, e] : g.neighbors(v)) {
        if (!inst.edge_active[e] || !inst.vertex_active[u] || in_s[u]) continue;
        if (inst.residual(e, v) > 0) ++residual_out;
      }
    }
    if (vol == 0 || static_cast<double>(residual_out) < factor * static_cast<double>(vol)) break;
    if (next == by_level.size())
      throw std::logic_error("level_cut: grew past the whole active set");  // residual_out would be 0
    ++j;
    if (j >= h) throw std::logic_error("level_cut: did not converge below h steps");
    grow_to(h - j);
  }
  if (steps_out) *steps_out = j;
  std::vector<Vertex> out;
  out.reserve(next);
  for (size_t i = 0; i < next; ++i) out.push_back(by_level[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

bool certify_expander(const Graph& g, const VertexSet& a, const InducedSubgraph& view, const FlowInstance& inst,
                      double phi) {
  if (!(phi > 0.0 && phi < 1.0)) return false;
  const Graph& sub = *inst.graph;
  if (&sub != &view.graph) return false;
  int64_t kappa = static_cast<int64_t>(std::ceil(2.0 / phi));
  // Active set must be exactly A.
  for (Vertex v = 0; v < sub.num_vertices(); ++v)
    if ((inst.vertex_active[v] != 0) != a.contains(view.to_parent[v])) return false;
  for (Vertex p : a.vertices())
    if (view.from_parent[p] < 0) return false;

  std::vector<int64_t> deg_in_a(sub.num_vertices(), 0);
  for (EdgeId e = 0; e < sub.num_edges(); ++e) {
    const Edge& ed = sub.edge(e);
    bool both = inst.vertex_active[ed.u] && inst.vertex_active[ed.v];
    if (inst.edge_active[e] != (both ? 1 : 0)) return false;  // active edges = E[A]
    if (!both) continue;
    if (inst.cap[e] != kappa) return false;
    if (inst.flow[e] > kappa || inst.flow[e] < -kappa) return false;
    deg_in_a[ed.u] += 1;
    deg_in_a[ed.v] += 1;
  }
  for (Vertex v = 0; v < sub.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    int64_t dg = g.degree(view.to_parent[v]);
    if (inst.source[v] != kappa * (dg - deg_in_a[v])) return false;
    if (inst.absorbed[v] < 0 || inst.absorbed[v] > dg) return false;
    if (inst.absorbed[v] > inst.sink_total[v]) return false;
    if (inst.source[v] + inst.net_in(v) - inst.absorbed[v] != 0) return false;  // zero excess
  }
  return true;
}

TrimResult trim(const Graph& g, const VertexSet& a, double phi, Counters* counters) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("trim: phi must be in (0,1)");
  if (a.size() == 0) throw std::invalid_argument("trim: empty starting set");

  TrimResult res;
  int64_t log_n = ceil_log2(std::max<int64_t>(g.num_vertices(), 2));
  double ln_m = ln_capped(g.num_edges());
  res.h = static_cast<int64_t>(std::ceil((5120.0 / phi) * static_cast<double>(log_n * log_n) * ln_m));
  res.kappa = static_cast<int64_t>(std::ceil(2.0 / phi));
  res.view = induced_subgraph(g, a);
  const Graph& sub = res.view.graph;
  int nv = sub.num_vertices();

  std::vector<int64_t> orig_deg(nv);
  for (Vertex v = 0; v < nv; ++v) orig_deg[v] = g.degree(res.view.to_parent[v]);

  FlowInstance inst(sub, res.kappa);
  for (Vertex v = 0; v < nv; ++v) {
    inst.source[v] = res.kappa * (orig_deg[v] - sub.degree(v));
    inst.excess[v] = inst.source[v];
  }

  UnitFlowOptions ufo;
  ufo.counters = counters;

  int64_t active = nv;
  res.excess_history.push_back(inst.total_excess());
  for (int64_t round = 1;; ++round) {
    if (round > log_n + nv + 2) throw std::logic_error("trim: outer loop failed to terminate");
    res.iterations = round;
    if (counters) ++counters->trim_iterations;
    if (round > log_n) res.rounds_exceeded = true;

    int64_t effective_round = std::min(round, log_n);  // sinks are capped at deg_G
    for (Vertex v = 0; v < nv; ++v)
      if (inst.active(v))
        inst.sink_total[v] = std::min(orig_deg[v], effective_round * orig_deg[v] / log_n);

    LevelState lvl(nv, res.h);
    run_unit_flow(inst, lvl, ufo);

    if (inst.total_excess() == 0) {
      if (res.excess_history.back() != 0) res.excess_history.push_back(0);
      std::vector<Vertex> members;
      for (Vertex v = 0; v < nv; ++v)
        if (inst.active(v)) members.push_back(res.view.to_parent[v]);
      res.a_prime = VertexSet(g, members);
      res.levels = std::move(lvl);
      res.success = true;
      break;
    }

    std::vector<Vertex> pruned = level_cut(inst, lvl, orig_deg, ln_m);
    {
      std::vector<Vertex> parent_ids;
      parent_ids.reserve(pruned.size());
      for (Vertex v : pruned) parent_ids.push_back(res.view.to_parent[v]);
      res.pruned_history.push_back(std::move(parent_ids));
    }
    for (Vertex v : pruned) inst.vertex_active[v] = 0;
    active -= static_cast<int64_t>(pruned.size());
    for (Vertex v : pruned) {
      for (const auto& [u, e] : sub.neighbors(v)) {
        if (!inst.edge_active[e]) continue;
        inst.edge_active[e] = 0;
        inst.flow[e] = 0;
        // A surviving endpoint gains one boundary edge worth of fresh source;
        // whatever the edge carried is cancelled with it.
        if (inst.vertex_active[u]) inst.source[u] += res.kappa;
      }
    }
    inst.recompute_excess();

    // Iteration-end excess; the idealized contraction constant is 1/32, we
    // require plain strict decrease and keep the history for callers.
    {
      int64_t ex_now = inst.total_excess();
      if (res.excess_history.back() > 0 && ex_now >= res.excess_history.back()) res.contraction_failed = true;
      res.excess_history.push_back(ex_now);
    }

    if (active == 0) {
      res.a_prime = VertexSet::none(g);
      res.levels = std::move(lvl);
      res.success = false;
      res.diagnostic = "trim: every vertex was pruned; the nearly-expander precondition did not hold";
      break;
    }
  }

  res.certificate = std::move(inst);
  return res;
}

}  // namespace expdecomp
