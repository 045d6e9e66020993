#include "expdecomp/unit_flow.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace expdecomp {

FlowInstance::FlowInstance(const Graph& g, int64_t uniform_cap) : graph(&g) {
  cap.assign(g.num_edges(), uniform_cap);
  flow.assign(g.num_edges(), 0);
  source.assign(g.num_vertices(), 0);
  sink_total.assign(g.num_vertices(), 0);
  absorbed.assign(g.num_vertices(), 0);
  excess.assign(g.num_vertices(), 0);
  vertex_active.assign(g.num_vertices(), 1);
  edge_active.assign(g.num_edges(), 1);
}

int64_t FlowInstance::net_in(Vertex v) const {
  int64_t s = 0;
  for (const auto& [u, e] : graph->neighbors(v)) {
    (void)u;
    if (edge_active[e]) s += flow_into(e, v);
  }
  return s;
}

void FlowInstance::recompute_excess() {
  for (Vertex v = 0; v < graph->num_vertices(); ++v)
    excess[v] = vertex_active[v] ? source[v] + net_in(v) - absorbed[v] : 0;
}

int64_t FlowInstance::total_excess() const {
  int64_t s = 0;
  for (Vertex v = 0; v < graph->num_vertices(); ++v)
    if (vertex_active[v]) s += excess[v];
  return s;
}

int64_t FlowInstance::active_vertex_count() const {
  return std::count(vertex_active.begin(), vertex_active.end(), uint8_t{1});
}

int64_t FlowInstance::active_edge_count() const {
  return std::count(edge_active.begin(), edge_active.end(), uint8_t{1});
}

std::vector<int64_t> excess(const FlowInstance& inst) {
  const Graph& g = *inst.graph;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (inst.edge_active[e] && (inst.flow[e] > inst.cap[e] || inst.flow[e] < -inst.cap[e]))
      throw std::invalid_argument("excess: infeasible flow on edge " + std::to_string(e));
  std::vector<int64_t> ex(g.num_vertices(), 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    ex[v] = inst.source[v] + inst.net_in(v) - inst.absorbed[v];
    if (ex[v] < 0) throw std::invalid_argument("excess: negative excess at vertex " + std::to_string(v));
  }
  return ex;
}

int64_t unsettled_excess(const FlowInstance& inst, const LevelState& lvl) {
  int64_t s = 0;
  for (Vertex v = 0; v < inst.graph->num_vertices(); ++v)
    if (inst.vertex_active[v] && lvl.level[v] <= lvl.h) s += inst.excess[v];
  return s;
}

namespace {

// Active vertices grouped by level, levels descending, ids ascending within a
// level. Settled vertices (h+1) are excluded; they never act again.
std::vector<std::pair<int64_t, Vertex>> level_order(const FlowInstance& inst, const LevelState& lvl) {
  std::vector<std::pair<int64_t, Vertex>> order;
  order.reserve(inst.graph->num_vertices());
  for (Vertex v = 0; v < inst.graph->num_vertices(); ++v)
    if (inst.vertex_active[v] && lvl.level[v] <= lvl.h) order.emplace_back(-lvl.level[v], v);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

SweepStats push_then_relabel(FlowInstance& inst, LevelState& lvl, std::span<const int64_t> absorb_budget,
                             std::span<const int64_t> relabel_gate) {
  SweepStats st;
  const Graph& g = *inst.graph;
  auto order = level_order(inst, lvl);

  size_t i = 0;
  std::vector<std::pair<Vertex, int64_t>> deltas;  // receipts applied at level end
  while (i < order.size()) {
    int64_t level = -order[i].first;
    size_t j = i;
    deltas.clear();
    for (; j < order.size() && -order[j].first == level; ++j) {
      Vertex v = order[j].second;
      if (inst.excess[v] <= 0) continue;
      int64_t room = std::min(absorb_budget[v], inst.sink_total[v]) - inst.absorbed[v];
      if (room > 0) {
        int64_t d = std::min(room, inst.excess[v]);
        inst.absorbed[v] += d;
        inst.excess[v] -= d;
        st.absorbed_units += d;
      }
      if (level >= 1 && inst.excess[v] > 0) {
        for (const auto& [u, e] : g.neighbors(v)) {
          if (!inst.edge_active[e] || !inst.vertex_active[u]) continue;
          if (lvl.level[u] != level - 1) continue;
          int64_t r = inst.residual(e, v);
          if (r <= 0) continue;
          int64_t d = std::min(inst.excess[v], r);
          inst.push(e, v, d);
          inst.excess[v] -= d;
          deltas.emplace_back(u, d);
          st.pushed_units += d;
          st.push_ops += 1;
          if (inst.excess[v] == 0) break;
        }
      }
    }
    for (const auto& [u, d] : deltas) inst.excess[u] += d;
    i = j;
  }

  // Relabel: a vertex with excess rises when its sink is spent (per the gate)
  // and every edge to the level below is saturated. Deeper edges are already
  // saturated by the level-gap invariant.
  std::vector<Vertex> rising;
  for (const auto& [neg, v] : order) {
    (void)neg;
    if (inst.excess[v] <= 0) continue;
    if (inst.absorbed[v] < std::min(relabel_gate[v], inst.sink_total[v])) continue;
    bool blocked = false;
    for (const auto& [u, e] : g.neighbors(v)) {
      if (!inst.edge_active[e] || !inst.vertex_active[u]) continue;
      if (lvl.level[u] == lvl.level[v] - 1 && inst.residual(e, v) > 0) {
        blocked = true;
        break;
      }
    }
    if (!blocked) rising.push_back(v);
  }
  for (Vertex v : rising) lvl.level[v] = std::min(lvl.level[v] + 1, lvl.h + 1);
  st.relabels = static_cast<int64_t>(rising.size());
  st.risen = std::move(rising);
  return st;
}

SweepStats push_then_relabel(FlowInstance& inst, LevelState& lvl, std::span<const int64_t> stage_sink) {
  return push_then_relabel(inst, lvl, stage_sink, stage_sink);
}

int64_t fast_forward_climb(FlowInstance& inst, LevelState& lvl, const std::vector<Vertex>& risen) {
  const Graph& g = *inst.graph;
  std::vector<uint8_t> in_set(g.num_vertices(), 0);
  std::vector<Vertex> climbing;
  for (Vertex v : risen) {
    if (!inst.vertex_active[v] || inst.excess[v] <= 0 || lvl.level[v] > lvl.h) continue;
    in_set[v] = 1;
    climbing.push_back(v);
  }
  if (climbing.empty()) return 0;

  // Next event: a climber settles at h+1, or rises to exactly one level above
  // an unsaturated non-climbing neighbor (then the next sweep pushes). Edges
  // more than one level down are saturated by the level-gap invariant and stay
  // that way as the gap grows.
  int64_t delta = lvl.h + 2;
  for (Vertex v : climbing) {
    delta = std::min(delta, lvl.h + 1 - lvl.level[v]);
    for (const auto& [u, e] : g.neighbors(v)) {
      if (!inst.edge_active[e] || !inst.vertex_active[u] || in_set[u]) continue;
      if (lvl.level[u] > lvl.h) continue;                 // settled; pushes cannot reach it
      if (lvl.level[u] < lvl.level[v] - 1) continue;
      if (inst.residual(e, v) <= 0) continue;
      delta = std::min(delta, lvl.level[u] + 1 - lvl.level[v]);
    }
  }
  int64_t extra = delta - 1;
  if (extra <= 0) return 0;
  for (Vertex v : climbing) lvl.level[v] += extra;
  return extra;
}

namespace {

// BFS over residual directions from the unsettled excess. Fills `reach` and
// returns the budget room found (stops early once positive).
int64_t residual_reach(const FlowInstance& inst, const LevelState& lvl, std::span<const int64_t> absorb_budget,
                       std::vector<uint8_t>& reach) {
  const Graph& g = *inst.graph;
  reach.assign(g.num_vertices(), 0);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (inst.vertex_active[v] && inst.excess[v] > 0 && lvl.level[v] <= lvl.h) {
      reach[v] = 1;
      queue.push_back(v);
    }
  }
  int64_t room = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    room += std::max<int64_t>(std::min(absorb_budget[v], inst.sink_total[v]) - inst.absorbed[v], 0);
    if (room > 0) return room;
    for (const auto& [u, e] : g.neighbors(v)) {
      if (!inst.edge_active[e] || !inst.vertex_active[u] || reach[u]) continue;
      if (inst.residual(e, v) > 0) {
        reach[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return room;
}

}  // namespace

int64_t reachable_budget_room(const FlowInstance& inst, const LevelState& lvl,
                              std::span<const int64_t> absorb_budget) {
  std::vector<uint8_t> reach;
  return residual_reach(inst, lvl, absorb_budget, reach);
}

int64_t settle_trapped_excess(FlowInstance& inst, LevelState& lvl) {
  const Graph& g = *inst.graph;
  std::vector<uint8_t> reach;
  if (residual_reach(inst, lvl, inst.sink_total, reach) > 0) return 0;
  int64_t settled = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!reach[v]) continue;
    settled += inst.excess[v];
    lvl.level[v] = lvl.h + 1;
  }
  return settled;
}

namespace {

struct PreconditionProfile {
  // gamma_int = min sink/deg over active degree-positive vertices, kept as the
  // minimizing pair so the stage sweep bound can be asserted exactly.
  int64_t gamma_num = 1, gamma_den = 1;
  bool gamma_positive = true;
  int64_t eta = 1;
};

PreconditionProfile profile_instance(const FlowInstance& inst) {
  PreconditionProfile p;
  const Graph& g = *inst.graph;
  bool first = true;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v] || g.degree(v) == 0) continue;
    int64_t deg = g.degree(v);
    if (first || static_cast<__int128>(inst.sink_total[v]) * p.gamma_den <
                     static_cast<__int128>(p.gamma_num) * deg) {
      p.gamma_num = inst.sink_total[v];
      p.gamma_den = deg;
      first = false;
    }
    p.eta = std::max(p.eta, ceil_div(inst.excess[v] + inst.absorbed[v], deg));
  }
  p.gamma_positive = !first && p.gamma_num > 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (inst.edge_active[e]) p.eta = std::max(p.eta, inst.cap[e]);
  return p;
}

void check_stage_sweep_bound(const PreconditionProfile& p, int64_t stage_sweeps, int64_t h, int64_t log_n) {
  if (!p.gamma_positive || stage_sweeps <= 1) return;
  // sweeps <= 64 * eta * h * log_n / gamma_int + 1
  __int128 lhs = static_cast<__int128>(stage_sweeps - 1) * p.gamma_num;
  __int128 rhs = static_cast<__int128>(64) * p.eta * h * log_n * p.gamma_den;
  if (lhs > rhs) throw std::logic_error("unit flow: stage sweep bound exceeded");
}

}  // namespace

UnitFlowRunStats run_unit_flow(FlowInstance& inst, LevelState& lvl, const UnitFlowOptions& opts) {
  UnitFlowRunStats rs;
  const Graph& g = *inst.graph;
  int64_t n_active = inst.active_vertex_count();
  int64_t log_n = ceil_log2(std::max<int64_t>(n_active, 2));
  int64_t stages = 8 * log_n;
  PreconditionProfile prof = profile_instance(inst);

  std::vector<int64_t> budget(g.num_vertices(), 0);
  auto run_phase = [&](std::span<const int64_t> absorb, auto cont) -> int64_t {
    int64_t phase_sweeps = 0;
    while (cont()) {
      SweepStats st = push_then_relabel(inst, lvl, absorb, inst.sink_total);
      ++rs.sweeps;
      ++rs.emulated_sweeps;
      ++phase_sweeps;
      if (opts.counters) ++opts.counters->unit_flow_sweeps;
      if (opts.post_sweep_hook) opts.post_sweep_hook(opts.hook_ctx, inst, lvl);
      if (!st.any()) break;  // stalled; a later stage releases more sink
      if (st.absorbed_units == 0) {
        int64_t settled = settle_trapped_excess(inst, lvl);
        if (settled > 0) {
          if (opts.counters) ++opts.counters->trapped_settles;
          continue;
        }
        // Nothing absorbed and no unsettled excess can reach remaining room
        // in this phase's budgets: the rest of the phase could only ratchet
        // levels, so hand over to the next stage instead.
        if (reachable_budget_room(inst, lvl, absorb) == 0) break;
        if (st.pushed_units == 0 && st.relabels > 0) {
          int64_t extra = fast_forward_climb(inst, lvl, st.risen);
          rs.emulated_sweeps += extra;
          if (opts.counters) opts.counters->fast_forward_levels += extra;
        }
      }
    }
    return phase_sweeps;
  };

  for (int64_t i = 1; i <= stages; ++i) {
    int64_t x = unsettled_excess(inst, lvl);
    if (x == 0) break;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      budget[v] = std::min(inst.sink_total[v], i * inst.sink_total[v] / stages);
    ++rs.stages;
    int64_t stage_sweeps = run_phase(budget, [&] { return 2 * unsettled_excess(inst, lvl) >= x; });
    rs.max_stage_sweeps = std::max(rs.max_stage_sweeps, stage_sweeps);
    check_stage_sweep_bound(prof, stage_sweeps, lvl.h, log_n);
  }

  // Drain: full budgets until no unsettled excess remains. Every vertex with
  // unsettled excess can always absorb, push or rise, so this terminates and
  // is what makes "level < h implies no excess" exact.
  run_phase(inst.sink_total, [&] {
    if (unsettled_excess(inst, lvl) == 0) return false;
    return true;
  });
  if (unsettled_excess(inst, lvl) != 0) throw std::logic_error("unit flow: drain left unsettled excess");

  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (inst.vertex_active[v] && lvl.level[v] == lvl.h + 1) lvl.level[v] = lvl.h;
  return rs;
}

ParallelUnitFlowResult parallel_unit_flow(const Graph& g, const std::vector<int64_t>& cap,
                                          const std::vector<int64_t>& source, const std::vector<int64_t>& sink,
                                          int64_t h, const UnitFlowOptions& opts) {
  if (h < 1) throw std::invalid_argument("parallel_unit_flow: h must be >= 1");
  if (static_cast<int>(cap.size()) != g.num_edges() || static_cast<int>(source.size()) != g.num_vertices() ||
      static_cast<int>(sink.size()) != g.num_vertices())
    throw std::invalid_argument("parallel_unit_flow: vector sizes do not match graph");
  int64_t total_source = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (source[v] < 0 || sink[v] < 0) throw std::invalid_argument("parallel_unit_flow: negative source or sink");
    total_source += source[v];
  }
  if (total_source > 2 * static_cast<int64_t>(g.num_edges()))
    throw std::invalid_argument("parallel_unit_flow: total source exceeds 2m");
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (cap[e] < 0) throw std::invalid_argument("parallel_unit_flow: negative capacity");

  FlowInstance inst(g, 0);
  inst.cap = cap;
  inst.source = source;
  inst.sink_total = sink;
  inst.excess = source;
  LevelState lvl(g.num_vertices(), h);
  UnitFlowRunStats stats = run_unit_flow(inst, lvl, opts);
  return {inst.flow, lvl.level, inst.absorbed, stats};
}

}  // namespace expdecomp
