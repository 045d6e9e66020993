#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "expdecomp/decomposition.hpp"
#include "expdecomp/generators.hpp"
#include "expdecomp/verify.hpp"
#include "test_support.hpp"

using namespace expdecomp;
using namespace expdecomp::testing;

namespace {

void check_partition_valid(const Graph& g, const Partition& p, double phi) {
  REQUIRE(static_cast<int>(p.cluster_of.size()) == g.num_vertices());
  std::vector<int> seen(g.num_vertices(), 0);
  for (const auto& c : p.clusters)
    for (Vertex v : c.vertices()) seen[v] += 1;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    CHECK(seen[v] == 1);  // disjoint cover
    CHECK(p.cluster_of[v] >= 0);
  }
  CHECK(p.error_edges == measure_error(g, p));
  for (const auto& c : p.clusters) {
    if (c.size() < 2 || c.size() > 20) continue;
    InducedSubgraph sub = induced_subgraph(g, c);
    CHECK(brute_force_expansion(sub.graph, phi / 6.0).is_expander);
  }
}

}  // namespace

TEST_CASE("single vertex and edgeless graphs") {
  Graph one(1, {});
  Partition p = compute_exp_decomp(one, 0.3, 1);
  CHECK(p.clusters.size() == 1);
  CHECK(p.error_edges == 0);

  Graph edgeless(5, {});
  Partition pe = compute_exp_decomp(edgeless, 0.3, 1);
  CHECK(pe.clusters.size() == 5);  // every vertex its own cluster
  CHECK(pe.error_edges == 0);
}

TEST_CASE("two triangles joined by one edge") {
  Graph g = gen_dumbbell(3);

  SUBCASE("phi = 0.4 splits into the triangles") {
    Partition p = compute_exp_decomp(g, 0.4, 1);
    CHECK(p.clusters.size() == 2);
    CHECK(p.error_edges == 1);
    check_partition_valid(g, p, 0.4);
    std::set<int32_t> left{p.cluster_of[0], p.cluster_of[1], p.cluster_of[2]};
    std::set<int32_t> right{p.cluster_of[3], p.cluster_of[4], p.cluster_of[5]};
    CHECK(left.size() == 1);
    CHECK(right.size() == 1);
    CHECK(*left.begin() != *right.begin());
  }

  SUBCASE("phi = 0.05 keeps one cluster") {
    // The bridge cut has sparsity 1/7 >= 0.05, so the graph is a 0.05-expander.
    Partition p = compute_exp_decomp(g, 0.05, 1);
    CHECK(p.clusters.size() == 1);
    CHECK(p.error_edges == 0);
    check_partition_valid(g, p, 0.05);
  }
}

TEST_CASE("ring of four K6 cliques at phi = 0.05") {
  Graph g = gen_ring_of_cliques(4, 6);
  Partition p = compute_exp_decomp(g, 0.05, 3);
  CHECK(p.clusters.size() == 4);
  CHECK(p.error_edges == 4);
  check_partition_valid(g, p, 0.05);
  for (const auto& c : p.clusters) {
    CHECK(c.size() == 6);
    // Each cluster is exactly one clique: 6 consecutive ids.
    const auto& m = c.vertices();
    CHECK(m.front() / 6 == m.back() / 6);
  }
}

TEST_CASE("disconnected inputs decompose per component") {
  std::vector<Edge> edges;
  for (int base : {0, 3})
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        edges.push_back({static_cast<Vertex>(base + i), static_cast<Vertex>(base + j)});
  Graph g(6, std::move(edges));  // two disjoint triangles
  Partition p = compute_exp_decomp(g, 0.4, 1);
  CHECK(p.clusters.size() == 2);
  CHECK(p.error_edges == 0);
  check_partition_valid(g, p, 0.4);
}

TEST_CASE("measure_error") {
  Graph c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  Partition p;
  p.cluster_of = {0, 0, 1, 1};
  p.clusters = {VertexSet(c4, {0, 1}), VertexSet(c4, {2, 3})};
  CHECK(measure_error(c4, p) == 2);

  Partition single;
  single.cluster_of = {0, 0, 0, 0};
  single.clusters = {VertexSet::all(c4)};
  CHECK(measure_error(c4, single) == 0);

  Partition bad;
  bad.cluster_of = {0, 0, 0, -1};
  CHECK_THROWS_AS(measure_error(c4, bad), std::invalid_argument);

  // Independent recount on random partitions.
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Graph g = random_graph(9, 0.4, 200 + t);
    Partition rp;
    rp.cluster_of.resize(9);
    for (auto& c : rp.cluster_of) c = static_cast<int32_t>(rng.uniform_int(0, 2));
    int64_t manual = 0;
    for (const Edge& e : g.edges())
      if (rp.cluster_of[e.u] != rp.cluster_of[e.v]) ++manual;
    CHECK(measure_error(g, rp) == manual);
  }
}

TEST_CASE("random small graphs produce certified clusters") {
  for (int t = 0; t < 15; ++t) {
    Graph g = random_graph(10 + t % 5, 0.35, 860 + t);
    for (double phi : {0.05, 0.3}) {
      Partition p = compute_exp_decomp(g, phi, 40 + t);
      check_partition_valid(g, p, phi);
      CHECK(p.certificates.size() == p.clusters.size());
    }
  }
}

TEST_CASE("deterministic for a fixed seed") {
  Graph g = gen_ring_of_cliques(6, 5);
  Partition a = compute_exp_decomp(g, 0.1, 99);
  Partition b = compute_exp_decomp(g, 0.1, 99);
  CHECK(a.cluster_of == b.cluster_of);
  CHECK(a.error_edges == b.error_edges);
}

TEST_CASE("sibling parallelism yields the same partition") {
  Graph ring = gen_ring_of_cliques(2, 3);
  std::vector<Edge> edges;
  for (int base : {0, 6})  // two disjoint ring components
    for (const Edge& e : ring.edges())
      edges.push_back({static_cast<Vertex>(base + e.u), static_cast<Vertex>(base + e.v)});
  Graph g(12, std::move(edges));
  Partition serial = compute_exp_decomp(g, 0.4, 7, {1, nullptr});
  Partition parallel = compute_exp_decomp(g, 0.4, 7, {4, nullptr});
  CHECK(serial.cluster_of == parallel.cluster_of);
}
