#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "expdecomp/generators.hpp"
#include "expdecomp/graph.hpp"
#include "test_support.hpp"

using namespace expdecomp;
using namespace expdecomp::testing;

TEST_CASE("load_edge_list basics") {
  std::istringstream two_path("0 1\n1 2\n");
  LoadedGraph lg = load_edge_list(two_path);
  CHECK(lg.graph.num_vertices() == 3);
  CHECK(lg.graph.num_edges() == 2);
  CHECK(lg.labels[0] == "0");

  std::istringstream dup("a b\nb a\n");
  LoadedGraph lg2 = load_edge_list(dup);
  CHECK(lg2.graph.num_vertices() == 2);
  CHECK(lg2.graph.num_edges() == 2);  // duplicate line becomes a parallel edge
  CHECK(lg2.graph.degree(0) == 2);

  std::istringstream loop("0 0\n");
  CHECK_THROWS_WITH_AS(load_edge_list(loop), doctest::Contains("self-loop"), ParseError);

  std::istringstream bad("0 1\n2\n");
  CHECK_THROWS_WITH_AS(load_edge_list(bad), doctest::Contains("line 2"), ParseError);

  std::istringstream comments("# header\n0 1 # trailing\n\n1 2\n");
  LoadedGraph lg3 = load_edge_list(comments);
  CHECK(lg3.graph.num_edges() == 2);

  std::istringstream order("z a\na q\n");
  LoadedGraph lg4 = load_edge_list(order);  // first-appearance remap
  CHECK(lg4.labels == std::vector<std::string>{"z", "a", "q"});
}

TEST_CASE("volume and cut_edges examples") {
  Graph k3 = make_clique(3);
  CHECK(volume(k3, VertexSet(k3, {0})) == 2);
  CHECK(volume(k3, VertexSet::all(k3)) == 6);
  CHECK(cut_edges(k3, VertexSet(k3, {0})) == 2);
  CHECK(cut_edges(k3, VertexSet::none(k3)) == 0);

  Graph p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(volume(p4, VertexSet(p4, {0, 1})) == 3);
  CHECK(cut_edges(p4, VertexSet(p4, {0, 1})) == 1);
}

TEST_CASE("cut and volume properties on random graphs") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    Graph g = random_graph(10, 0.4, 1000 + t);
    std::vector<Vertex> members;
    for (int v = 0; v < 10; ++v)
      if (rng.uniform() < 0.5) members.push_back(v);
    VertexSet s(g, members);
    VertexSet c = s.complement();
    CHECK(cut_edges(g, s) == cut_edges(g, c));
    CHECK(volume(g, s) + volume(g, c) == g.total_volume());
    CHECK(s.volume() == volume(g, s));
  }
}

TEST_CASE("induced_subgraph examples") {
  Graph k4 = make_clique(4);
  InducedSubgraph t = induced_subgraph(k4, VertexSet(k4, {0, 2, 3}));
  CHECK(t.graph.num_vertices() == 3);
  CHECK(t.graph.num_edges() == 3);  // K3

  Graph p4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  InducedSubgraph iso = induced_subgraph(p4, VertexSet(p4, {0, 2}));
  CHECK(iso.graph.num_edges() == 0);
  CHECK(iso.graph.num_vertices() == 2);

  Graph dumbbell = gen_dumbbell(3);
  InducedSubgraph left = induced_subgraph(dumbbell, VertexSet(dumbbell, {0, 1, 2}));
  CHECK(left.graph.num_vertices() == 3);
  CHECK(left.graph.num_edges() == 3);
  CHECK(left.to_parent == std::vector<Vertex>{0, 1, 2});

  CHECK_THROWS_AS(induced_subgraph(p4, VertexSet::none(p4)), std::invalid_argument);

  for (int t2 = 0; t2 < 20; ++t2) {
    Graph g = random_graph(12, 0.3, 50 + t2);
    VertexSet a(g, range_vec(0, 7));
    InducedSubgraph sub = induced_subgraph(g, a);
    for (Vertex v = 0; v < sub.graph.num_vertices(); ++v)
      CHECK(sub.graph.degree(v) <= g.degree(sub.to_parent[v]));
  }
}

TEST_CASE("degree_reduce") {
  Graph k5 = make_clique(5);
  DegreeReduction r = degree_reduce(k5);
  CHECK(r.identity);
  CHECK(r.reduced.num_vertices() == 5);
  CHECK(r.reduced.num_edges() == 10);

  // Star with center degree 20: the center becomes a 20-cycle of copies.
  std::vector<Edge> star_edges;
  for (int i = 1; i <= 20; ++i) star_edges.push_back({0, static_cast<Vertex>(i)});
  Graph star(21, std::move(star_edges));
  DegreeReduction rs = degree_reduce(star);
  CHECK(rs.fwd[0].size() == 20);
  int64_t maxdeg = 0;
  for (Vertex v = 0; v < rs.reduced.num_vertices(); ++v) maxdeg = std::max(maxdeg, rs.reduced.degree(v));
  CHECK(maxdeg <= 3);
  CHECK(maxdeg <= kDegreeBound);
  CHECK(rs.reduced.num_edges() == 20 + 20);  // cycle + originals
  for (Vertex c : rs.fwd[0]) CHECK(rs.back[c] == 0);

  Graph empty(0, {});
  DegreeReduction re = degree_reduce(empty);
  CHECK(re.reduced.num_vertices() == 0);
}

TEST_CASE("degree_reduce preserves cut structure") {
  // Lifted cuts have the same number of original-edge crossings; cycle edges
  // are the only additions.
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Graph g = random_graph(14, 0.8, 400 + t);  // dense: degrees above 16 appear
    DegreeReduction r = degree_reduce(g);
    std::vector<Vertex> side;
    for (int v = 0; v < 14; ++v)
      if (rng.uniform() < 0.5) side.push_back(v);
    VertexSet s(g, side);
    std::vector<Vertex> lifted;
    for (Vertex v : side)
      for (Vertex c : r.fwd[v]) lifted.push_back(c);
    VertexSet ls(r.reduced, lifted);
    // Count only edges that correspond to original edges (the last m edges by
    // construction when reduction is non-identity).
    int64_t crossings = 0;
    int first_original = r.reduced.num_edges() - g.num_edges();
    for (EdgeId e = first_original; e < r.reduced.num_edges(); ++e) {
      const Edge& ed = r.reduced.edge(e);
      if (ls.contains(ed.u) != ls.contains(ed.v)) ++crossings;
    }
    if (r.identity) crossings = cut_edges(r.reduced, ls);
    CHECK(crossings == cut_edges(g, s));
  }
}

TEST_CASE("generator shapes") {
  Graph ring = gen_ring_of_cliques(3, 4);
  CHECK(ring.num_vertices() == 12);
  CHECK(ring.num_edges() == 21);  // 3*6 + 3

  Graph p = gen_path(4);
  CHECK(p.num_edges() == 3);

  Graph rr1 = gen_random_regular(10, 3, 42);
  Graph rr2 = gen_random_regular(10, 3, 42);
  CHECK(to_edge_list_text(rr1) == to_edge_list_text(rr2));
  for (Vertex v = 0; v < 10; ++v) CHECK(rr1.degree(v) == 3);

  CHECK_THROWS_AS(gen_random_regular(5, 3, 1), std::invalid_argument);  // odd n*d
}
