#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expdecomp/unit_flow.hpp"
#include "expdecomp/verify.hpp"
#include "test_support.hpp"

using namespace expdecomp;
using namespace expdecomp::testing;

namespace {

// Direct scan of the bounded-height flow contract: saturated level gaps,
// absorbed mass at relabeled vertices, no excess below the top level.
void check_flow_properties(const Graph& g, const FlowInstance& inst, const std::vector<int64_t>& level, int64_t h,
                           int64_t log_n) {
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!inst.edge_active[e]) continue;
    const Edge& ed = g.edge(e);
    if (!inst.vertex_active[ed.u] || !inst.vertex_active[ed.v]) continue;
    if (level[ed.u] > level[ed.v] + 1) CHECK(inst.residual(e, ed.u) == 0);
    if (level[ed.v] > level[ed.u] + 1) CHECK(inst.residual(e, ed.v) == 0);
  }
  std::vector<int64_t> ex = excess(inst);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    if (level[v] >= 1 && inst.sink_total[v] > 0)
      CHECK(inst.absorbed[v] >= ceil_div(inst.sink_total[v], 8 * log_n));
    if (level[v] < h) CHECK(ex[v] == 0);
  }
}

struct HookState {
  const Graph* g;
  std::vector<int64_t> prev_levels;
  bool first = true;
  int64_t sweeps_seen = 0;
  int64_t log_n = 1;
};

void invariant_hook(void* ctx, const FlowInstance& inst, const LevelState& lvl) {
  auto* hs = static_cast<HookState*>(ctx);
  const Graph& g = *hs->g;
  ++hs->sweeps_seen;
  REQUIRE(check_flow_feasible(inst));
  // Mass conservation: the incremental excess matches a fresh recomputation.
  std::vector<int64_t> ex = excess(inst);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    REQUIRE(ex[v] == inst.excess[v]);
  }
  // Levels only rise; saturated level gaps and near-saturated sinks hold
  // after every sweep, not just at the end.
  if (!hs->first) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) REQUIRE(lvl.level[v] >= hs->prev_levels[v]);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!inst.edge_active[e]) continue;
    const Edge& ed = g.edge(e);
    if (lvl.level[ed.u] > lvl.level[ed.v] + 1) REQUIRE(inst.residual(e, ed.u) == 0);
    if (lvl.level[ed.v] > lvl.level[ed.u] + 1) REQUIRE(inst.residual(e, ed.v) == 0);
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v] || lvl.level[v] < 1 || inst.sink_total[v] == 0) continue;
    REQUIRE(inst.absorbed[v] >= ceil_div(inst.sink_total[v], 8 * hs->log_n));
  }
  hs->prev_levels = lvl.level;
  hs->first = false;
}

}  // namespace

TEST_CASE("excess recomputation") {
  Graph g = make_graph(2, {{0, 1}});
  FlowInstance inst(g, 5);
  CHECK(excess(inst) == std::vector<int64_t>{0, 0});

  inst.source[0] = 3;
  inst.flow[0] = 2;
  inst.sink_total[1] = 2;
  inst.absorbed[1] = 2;
  inst.recompute_excess();
  std::vector<int64_t> ex = excess(inst);
  CHECK(ex[0] == 1);
  CHECK(ex[1] == 0);

  inst.flow[0] = 6;  // infeasible
  CHECK_THROWS_AS(excess(inst), std::invalid_argument);
}

TEST_CASE("excess matches brute-force recomputation on random flows") {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    Graph g = random_connected_graph(8, 0.4, 300 + t);
    FlowInstance inst(g, 4);
    for (Vertex v = 0; v < 8; ++v) {
      inst.source[v] = rng.uniform_int(0, 3);
      inst.sink_total[v] = rng.uniform_int(0, 3);
    }
    // Route a bit of mass greedily, keeping excess nonnegative.
    inst.recompute_excess();
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      Vertex u = g.edge(e).u;
      int64_t d = std::min<int64_t>(inst.excess[u], rng.uniform_int(0, 2));
      inst.push(e, u, d);
      inst.excess[u] -= d;
      inst.excess[g.edge(e).v] += d;
    }
    for (Vertex v = 0; v < 8; ++v) {
      int64_t a = std::min(inst.excess[v], inst.sink_total[v]);
      inst.absorbed[v] = a;
      inst.excess[v] -= a;
    }
    CHECK(excess(inst) == inst.excess);
  }
}

TEST_CASE("push_then_relabel single sweep") {
  SUBCASE("no excess leaves everything unchanged") {
    Graph g = make_clique(4);
    FlowInstance inst(g, 3);
    for (Vertex v = 0; v < 4; ++v) inst.sink_total[v] = 3;
    LevelState lvl(4, 10);
    std::vector<int64_t> budget(4, 1);
    SweepStats st = push_then_relabel(inst, lvl, budget);
    CHECK(!st.any());
    CHECK(inst.flow == std::vector<int64_t>(6, 0));
    CHECK(lvl.level == std::vector<int64_t>(4, 0));
  }

  SUBCASE("push, absorb, then relabel the stuck source") {
    Graph g = make_graph(2, {{0, 1}});
    FlowInstance inst(g, 2);
    inst.source[0] = 3;
    inst.sink_total[1] = 5;
    inst.recompute_excess();
    LevelState lvl(2, 10);
    lvl.level[0] = 1;
    std::vector<int64_t> budget = {0, 5};
    SweepStats st = push_then_relabel(inst, lvl, budget);
    CHECK(st.pushed_units == 2);  // capacity bound
    CHECK(inst.absorbed[1] == 2);
    CHECK(inst.excess[0] == 1);
    CHECK(inst.excess[1] == 0);
    CHECK(lvl.level[0] == 2);  // down-edge saturated, no sink at 0
    CHECK(lvl.level[1] == 0);
  }

  SUBCASE("a vertex at level h settles at h+1") {
    Graph g = make_graph(2, {{0, 1}});
    FlowInstance inst(g, 1);
    inst.source[0] = 2;
    inst.flow[0] = 1;  // already saturated toward 1
    inst.recompute_excess();
    LevelState lvl(2, 4);
    lvl.level[0] = 4;
    std::vector<int64_t> budget = {0, 0};
    push_then_relabel(inst, lvl, budget);
    CHECK(lvl.level[0] == 5);  // h + 1
  }
}

TEST_CASE("parallel_unit_flow trivial and local instances") {
  SUBCASE("zero source") {
    Graph g = make_clique(5);
    std::vector<int64_t> cap(g.num_edges(), 3), src(5, 0), sink(5, 2);
    auto res = parallel_unit_flow(g, cap, src, sink, 8);
    CHECK(res.flow == std::vector<int64_t>(g.num_edges(), 0));
    CHECK(res.level == std::vector<int64_t>(5, 0));
  }

  SUBCASE("K4 with sinks equal to degrees absorbs everything locally") {
    Graph g = make_clique(4);
    std::vector<int64_t> cap(g.num_edges(), 4), src(4, 3), sink(4, 3);
    auto res = parallel_unit_flow(g, cap, src, sink, 20);
    for (Vertex v = 0; v < 4; ++v) {
      CHECK(res.absorbed[v] == 3);
      CHECK(res.level[v] < 20);
    }
  }

  SUBCASE("precondition violations are rejected up front") {
    Graph g = make_clique(3);
    std::vector<int64_t> cap(3, 2), sink(3, 1);
    std::vector<int64_t> too_much(3, 10);  // sum 30 > 2m = 6
    CHECK_THROWS_AS(parallel_unit_flow(g, cap, too_much, sink, 5), std::invalid_argument);
    std::vector<int64_t> src(3, 1);
    CHECK_THROWS_AS(parallel_unit_flow(g, cap, src, sink, 0), std::invalid_argument);
  }
}

TEST_CASE("oversubscribed instances settle at the top level") {
  // Total source exceeds total sink; leftovers must sit at level h with the
  // gap and absorption properties intact.
  Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  std::vector<int64_t> cap(3, 2), src = {4, 0, 0, 0}, sink = {0, 1, 1, 1};
  int64_t h = 6;
  auto res = parallel_unit_flow(g, cap, src, sink, h);
  int64_t absorbed_total = res.absorbed[0] + res.absorbed[1] + res.absorbed[2] + res.absorbed[3];
  CHECK(absorbed_total == 2);  // the first edge's capacity bottlenecks vertex 0
  bool some_at_h = false;
  for (Vertex v = 0; v < 4; ++v)
    if (res.level[v] == h) some_at_h = true;
  CHECK(some_at_h);

  FlowInstance audit(g, 2);
  audit.flow = res.flow;
  audit.source = src;
  audit.sink_total = sink;
  audit.absorbed = res.absorbed;
  audit.recompute_excess();
  check_flow_properties(g, audit, res.level, h, ceil_log2(4));
}

TEST_CASE("randomized instances satisfy the flow contract") {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    int n = 5 + static_cast<int>(rng.uniform_int(0, 15));
    Graph g = random_connected_graph(n, 0.3, 7000 + t);
    int64_t m = g.num_edges();
    int64_t eta = 1 + rng.uniform_int(0, 5);
    std::vector<int64_t> cap(m), src(n), sink(n);
    for (EdgeId e = 0; e < m; ++e) cap[e] = 1 + rng.uniform_int(0, eta - 1);
    int64_t budget = 2 * m;
    for (Vertex v = 0; v < n; ++v) {
      sink[v] = rng.uniform_int(0, g.degree(v));
      src[v] = std::min<int64_t>(rng.uniform_int(0, eta * g.degree(v)), budget);
      budget -= src[v];
    }
    int64_t h = 3 * n;

    HookState hs{&g, {}, true, 0, ceil_log2(n)};
    UnitFlowOptions opts;
    opts.hook_ctx = &hs;
    opts.post_sweep_hook = invariant_hook;
    auto res = parallel_unit_flow(g, cap, src, sink, h, opts);
    CHECK(hs.sweeps_seen == res.stats.sweeps);

    FlowInstance audit(g, 0);
    audit.cap = cap;
    audit.flow = res.flow;
    audit.source = src;
    audit.sink_total = sink;
    audit.absorbed = res.absorbed;
    audit.recompute_excess();
    check_flow_properties(g, audit, res.level, h, ceil_log2(n));
  }
}

TEST_CASE("deterministic results across runs") {
  Graph g = random_connected_graph(14, 0.3, 555);
  std::vector<int64_t> cap(g.num_edges(), 3), src(14, 0), sink(14, 1);
  src[0] = 9;
  src[5] = 7;
  auto a = parallel_unit_flow(g, cap, src, sink, 12);
  auto b = parallel_unit_flow(g, cap, src, sink, 12);
  CHECK(a.flow == b.flow);
  CHECK(a.level == b.level);
  CHECK(a.absorbed == b.absorbed);
}

TEST_CASE("huge height bounds stay cheap via climb batching") {
  // A source that can never drain: with h in the millions this only works if
  // the climb is batched rather than swept level by level.
  Graph g = make_graph(3, {{0, 1}, {1, 2}});
  std::vector<int64_t> cap(2, 1), src = {4, 0, 0}, sink = {0, 1, 1};
  int64_t h = 5'000'000;
  auto res = parallel_unit_flow(g, cap, src, sink, h);
  CHECK(res.stats.sweeps < 2000);
  CHECK(res.level[0] == h);
}
