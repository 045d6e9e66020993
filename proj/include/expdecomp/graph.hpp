#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expdecomp {

using Vertex = int32_t;
using EdgeId = int32_t;

struct Edge {
  Vertex u;
  Vertex v;
};

// Immutable undirected multigraph. Parallel edges are allowed (trimming and
// degree reduction create them), self-loops are not. Safe to share across
// threads once built.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // (neighbor, edge id) pairs, sorted by (neighbor, edge id).
  const std::vector<std::pair<Vertex, EdgeId>>& neighbors(Vertex v) const { return adj_[v]; }

  int64_t degree(Vertex v) const { return deg_[v]; }
  const std::vector<int64_t>& degrees() const { return deg_; }
  int64_t total_volume() const { return 2 * static_cast<int64_t>(edges_.size()); }

  Vertex other_endpoint(EdgeId e, Vertex v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<Vertex, EdgeId>>> adj_;
  std::vector<int64_t> deg_;
};

// Subset of a graph's vertices with cached size and volume.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(const Graph& g, const std::vector<Vertex>& members);
  static VertexSet all(const Graph& g);
  static VertexSet none(const Graph& g);

  bool contains(Vertex v) const { return in_[v] != 0; }
  int64_t size() const { return size_; }
  int64_t volume() const { return volume_; }
  const std::vector<Vertex>& vertices() const { return members_; }  // sorted
  const Graph& parent() const { return *g_; }

  VertexSet complement() const;

 private:
  const Graph* g_ = nullptr;
  std::vector<uint8_t> in_;
  std::vector<Vertex> members_;
  int64_t size_ = 0;
  int64_t volume_ = 0;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> labels;  // original label of vertex i
};

// Edge-list text: one "u v" per line, '#' comments, arbitrary string labels
// remapped to 0..n-1 in order of first appearance. Duplicate lines become
// parallel edges; self-loops are rejected.
LoadedGraph load_edge_list(std::istream& in);

int64_t volume(const Graph& g, const VertexSet& s);

// |E(S, V \ S)| with multiplicity.
int64_t cut_edges(const Graph& g, const VertexSet& s);

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_parent;    // subgraph id -> parent id
  std::vector<Vertex> from_parent;  // parent id -> subgraph id, -1 outside
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& a);

// Bounded-degree transformation: vertices of degree > 16 become a cycle of
// copies, one copy per incident edge (copy degree <= 3). Cut structure is
// preserved up to the added cycle edges.
struct DegreeReduction {
  Graph reduced;
  std::vector<std::vector<Vertex>> fwd;  // original -> copies
  std::vector<Vertex> back;              // copy -> original
  bool identity = false;
};

inline constexpr int64_t kDegreeBound = 16;

DegreeReduction degree_reduce(const Graph& g);

}  // namespace expdecomp
