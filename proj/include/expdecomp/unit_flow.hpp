#pragma once

#include <span>
#include <vector>

#include "expdecomp/graph.hpp"
#include "expdecomp/util.hpp"

namespace expdecomp {

// Residual flow instance over a graph (or an active subset of one, which is
// how trimming prunes without rebuilding). Flow is oriented edges[e].u ->
// edges[e].v; feasible means -cap <= flow <= cap. Absorbed mass is tracked
// explicitly and never decreases, so
//   excess(v) = source(v) + net_in(v) - absorbed(v) >= 0
// holds at all times on active vertices.
struct FlowInstance {
  const Graph* graph = nullptr;
  std::vector<int64_t> cap;
  std::vector<int64_t> flow;
  std::vector<int64_t> source;      // Delta
  std::vector<int64_t> sink_total;  // nabla (cumulative)
  std::vector<int64_t> absorbed;
  std::vector<int64_t> excess;      // maintained incrementally
  std::vector<uint8_t> vertex_active;
  std::vector<uint8_t> edge_active;

  FlowInstance() = default;
  FlowInstance(const Graph& g, int64_t uniform_cap);

  bool active(Vertex v) const { return vertex_active[v] != 0; }
  int64_t residual(EdgeId e, Vertex from) const {
    return graph->edge(e).u == from ? cap[e] - flow[e] : cap[e] + flow[e];
  }
  // Signed flow entering v over edge e.
  int64_t flow_into(EdgeId e, Vertex v) const { return graph->edge(e).v == v ? flow[e] : -flow[e]; }
  void push(EdgeId e, Vertex from, int64_t amount) {
    if (graph->edge(e).u == from)
      flow[e] += amount;
    else
      flow[e] -= amount;
  }

  int64_t net_in(Vertex v) const;
  void recompute_excess();                       // from source/flow/absorbed
  int64_t total_excess() const;
  int64_t active_vertex_count() const;
  int64_t active_edge_count() const;
};

// Independent recomputation of the excess vector (the incremental counters in
// FlowInstance are checked against this in tests). Throws on infeasible flow.
std::vector<int64_t> excess(const FlowInstance& inst);

struct LevelState {
  std::vector<int64_t> level;
  int64_t h = 0;

  LevelState() = default;
  LevelState(int n, int64_t height) : level(n, 0), h(height) {}
  bool settled(Vertex v) const { return level[v] == h + 1; }
};

struct SweepStats {
  int64_t absorbed_units = 0;
  int64_t pushed_units = 0;
  int64_t push_ops = 0;
  int64_t relabels = 0;
  std::vector<Vertex> risen;  // the vertices that relabeled this sweep
  bool any() const { return absorbed_units || pushed_units || relabels; }
};

// One top-to-bottom sweep: per level (h down to 0) vertices with excess absorb
// into their remaining absorb_budget, then (level >= 1) push along unsaturated
// edges to vertices exactly one level down; afterwards every vertex with
// excess whose down-edges are all saturated and whose absorbed mass has
// reached relabel_gate rises one level, capped at h+1. Settled vertices
// (level h+1) never act again.
SweepStats push_then_relabel(FlowInstance& inst, LevelState& lvl, std::span<const int64_t> absorb_budget,
                             std::span<const int64_t> relabel_gate);

// Spec-shaped overload: the stage sink budget is also the relabel gate.
SweepStats push_then_relabel(FlowInstance& inst, LevelState& lvl, std::span<const int64_t> stage_sink);

// Unsettled excess = excess at levels <= h.
int64_t unsettled_excess(const FlowInstance& inst, const LevelState& lvl);

// Batches the pure-climb regime: after a sweep that only relabeled `risen`,
// that same set relabels once per sweep until a push unlocks or a member
// settles. Jumps straight to the next such event; returns the number of
// emulated sweeps (0 when the next event is one sweep away anyway).
int64_t fast_forward_climb(FlowInstance& inst, LevelState& lvl, const std::vector<Vertex>& risen);

// Remaining absorbable room (against absorb_budget, clamped to the sinks)
// inside the residual-forward-reachable region of the unsettled excess.
int64_t reachable_budget_room(const FlowInstance& inst, const LevelState& lvl,
                              std::span<const int64_t> absorb_budget);

// When the residual-forward-reachable region from all excess vertices has no
// remaining sink capacity, that mass can never be absorbed; settle it at
// level h+1 in one step. Every vertex of the region has a spent sink, so it
// may legally rise, and edges leaving the region carry no residual capacity,
// so the level-gap invariant is preserved. Returns settled mass (0 = no-op).
int64_t settle_trapped_excess(FlowInstance& inst, LevelState& lvl);

struct UnitFlowOptions {
  Counters* counters = nullptr;
  // Invoked after every executed sweep (tests hook invariant checks here).
  void* hook_ctx = nullptr;
  void (*post_sweep_hook)(void* ctx, const FlowInstance&, const LevelState&) = nullptr;
};

struct UnitFlowRunStats {
  int64_t sweeps = 0;           // executed push_then_relabel calls
  int64_t emulated_sweeps = 0;  // including fast-forwarded climbs
  int64_t stages = 0;
  int64_t max_stage_sweeps = 0;
};

// Staged bounded-height engine (in place; used by trimming round after
// round). Runs 8*ceil(log2 n_active) stages with cumulative-floor sink
// budgets floor(i * sink/stages), each while unsettled excess stays >= half
// its stage-start value, then drains until no unsettled excess remains.
// Levels must be freshly zeroed by the caller. On return levels h+1 are
// rewritten to h.
UnitFlowRunStats run_unit_flow(FlowInstance& inst, LevelState& lvl, const UnitFlowOptions& opts = {});

struct ParallelUnitFlowResult {
  std::vector<int64_t> flow;
  std::vector<int64_t> level;
  std::vector<int64_t> absorbed;
  UnitFlowRunStats stats;
};

// Fresh-instance form. Validates sum(source) <= 2m and h >= 1 up front.
ParallelUnitFlowResult parallel_unit_flow(const Graph& g, const std::vector<int64_t>& cap,
                                          const std::vector<int64_t>& source, const std::vector<int64_t>& sink,
                                          int64_t h, const UnitFlowOptions& opts = {});

}  // namespace expdecomp
