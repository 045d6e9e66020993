#include "expdecomp/graph.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace expdecomp {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  adj_.assign(n_, {});
  deg_.assign(n_, 0);
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (ed.u == ed.v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(ed.u));
    adj_[ed.u].emplace_back(ed.v, e);
    adj_[ed.v].emplace_back(ed.u, e);
    deg_[ed.u] += 1;
    deg_[ed.v] += 1;
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

VertexSet::VertexSet(const Graph& g, const std::vector<Vertex>& members) : g_(&g) {
  in_.assign(g.num_vertices(), 0);
  members_ = members;
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (Vertex v : members_) {
    if (v < 0 || v >= g.num_vertices()) throw std::invalid_argument("VertexSet: vertex out of range");
    in_[v] = 1;
    volume_ += g.degree(v);
  }
  size_ = static_cast<int64_t>(members_.size());
}

VertexSet VertexSet::all(const Graph& g) {
  std::vector<Vertex> m(g.num_vertices());
  for (int i = 0; i < g.num_vertices(); ++i) m[i] = i;
  return VertexSet(g, m);
}

VertexSet VertexSet::none(const Graph& g) { return VertexSet(g, {}); }

VertexSet VertexSet::complement() const {
  std::vector<Vertex> m;
  m.reserve(g_->num_vertices() - members_.size());
  for (Vertex v = 0; v < g_->num_vertices(); ++v)
    if (!in_[v]) m.push_back(v);
  return VertexSet(*g_, m);
}

LoadedGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  auto intern = [&](const std::string& tok) {
    auto it = ids.find(tok);
    if (it != ids.end()) return it->second;
    Vertex id = static_cast<Vertex>(labels.size());
    ids.emplace(tok, id);
    labels.push_back(tok);
    return id;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // blank or comment-only line
    if (!(ls >> b) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected two vertex tokens");
    Vertex u = intern(a);
    Vertex v = intern(b);
    if (u == v) throw ParseError("line " + std::to_string(lineno) + ": self-loop at vertex '" + a + "'");
    edges.push_back({u, v});
  }
  return {Graph(static_cast<int>(labels.size()), std::move(edges)), std::move(labels)};
}

int64_t volume(const Graph& g, const VertexSet& s) {
  int64_t vol = 0;
  for (Vertex v : s.vertices()) vol += g.degree(v);
  return vol;
}

int64_t cut_edges(const Graph& g, const VertexSet& s) {
  int64_t cut = 0;
  for (const Edge& e : g.edges())
    if (s.contains(e.u) != s.contains(e.v)) ++cut;
  return cut;
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& a) {
  if (a.size() == 0) throw std::invalid_argument("induced_subgraph: empty vertex set");
  InducedSubgraph out;
  out.from_parent.assign(g.num_vertices(), -1);
  out.to_parent = a.vertices();
  for (size_t i = 0; i < out.to_parent.size(); ++i) out.from_parent[out.to_parent[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (a.contains(e.u) && a.contains(e.v)) edges.push_back({out.from_parent[e.u], out.from_parent[e.v]});
  out.graph = Graph(static_cast<int>(out.to_parent.size()), std::move(edges));
  return out;
}

DegreeReduction degree_reduce(const Graph& g) {
  DegreeReduction out;
  bool needed = false;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) > kDegreeBound) needed = true;

  out.fwd.assign(g.num_vertices(), {});
  if (!needed) {
    out.reduced = g;
    out.back.resize(g.num_vertices());
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      out.fwd[v] = {v};
      out.back[v] = v;
    }
    out.identity = true;
    return out;
  }

  // Copies first, then cycle edges, then one reduced edge per original edge.
  Vertex next = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    int64_t copies = g.degree(v) > kDegreeBound ? g.degree(v) : 1;
    for (int64_t i = 0; i < copies; ++i) {
      out.fwd[v].push_back(next++);
      out.back.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto& c = out.fwd[v];
    if (c.size() >= 2)
      for (size_t i = 0; i < c.size(); ++i) edges.push_back({c[i], c[(i + 1) % c.size()]});
  }
  // The k-th incident edge of a high-degree vertex lands on its k-th copy.
  std::vector<int64_t> used(g.num_vertices(), 0);
  for (const Edge& e : g.edges()) {
    auto slot = [&](Vertex v) {
      const auto& c = out.fwd[v];
      if (c.size() == 1) return c[0];
      return c[static_cast<size_t>(used[v]++)];
    };
    edges.push_back({slot(e.u), slot(e.v)});
  }
  out.reduced = Graph(next, std::move(edges));
  return out;
}

}  // namespace expdecomp
