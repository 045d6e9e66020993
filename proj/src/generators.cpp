#include "expdecomp/generators.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "expdecomp/util.hpp"

namespace expdecomp {

Graph gen_ring_of_cliques(int k, int s) {
  if (k < 1 || s < 1) throw std::invalid_argument("ring-of-cliques: need k >= 1 and s >= 1");
  std::vector<Edge> edges;
  auto id = [&](int clique, int j) { return static_cast<Vertex>(clique * s + j); };
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) edges.push_back({id(c, i), id(c, j)});
  if (k >= 2) {
    int attach = s > 1 ? 1 : 0;
    for (int c = 0; c < k; ++c) edges.push_back({id(c, 0), id((c + 1) % k, attach)});
  }
  return Graph(k * s, std::move(edges));
}

Graph gen_dumbbell(int s) {
  if (s < 1) throw std::invalid_argument("dumbbell: need s >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j)});
      edges.push_back({static_cast<Vertex>(s + i), static_cast<Vertex>(s + j)});
    }
  edges.push_back({0, static_cast<Vertex>(s)});
  return Graph(2 * s, std::move(edges));
}

Graph gen_path(int n) {
  if (n < 1) throw std::invalid_argument("path: need n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(i + 1)});
  return Graph(n, std::move(edges));
}

Graph gen_random_regular(int n, int d, uint64_t seed) {
  if (n < 1 || d < 0 || d >= n || (static_cast<int64_t>(n) * d) % 2 != 0)
    throw std::invalid_argument("random-regular: need 0 <= d < n with n*d even");
  Rng rng(seed);
  // Pairing model plus double-edge swaps to repair loops and duplicates (the
  // raw pairing is almost never simple for dense small graphs).
  std::vector<Vertex> stubs;
  for (Vertex v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  for (int restart = 0; restart < 200; ++restart) {
    for (size_t i = stubs.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(stubs[i - 1], stubs[j]);
    }
    std::vector<Edge> edges;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) edges.push_back({stubs[i], stubs[i + 1]});

    auto key = [](Vertex a, Vertex b) {
      return std::pair<Vertex, Vertex>(std::min(a, b), std::max(a, b));
    };
    std::multiset<std::pair<Vertex, Vertex>> seen;
    for (const Edge& e : edges) seen.insert(key(e.u, e.v));
    auto bad = [&](const Edge& e) { return e.u == e.v || seen.count(key(e.u, e.v)) > 1; };

    bool ok = true;
    int64_t attempts = 0;
    int64_t budget = 200LL * n * std::max(d, 1);
    for (size_t i = 0; i < edges.size();) {
      if (!bad(edges[i])) {
        ++i;
        continue;
      }
      if (++attempts > budget) {
        ok = false;
        break;
      }
      size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(edges.size()) - 1));
      if (j == i) continue;
      Edge a = edges[i], b = edges[j];
      Edge na{a.u, b.v}, nb{b.u, a.v};
      if (na.u == na.v || nb.u == nb.v) continue;
      if (seen.count(key(na.u, na.v)) > 0 || seen.count(key(nb.u, nb.v)) > 0) continue;
      seen.erase(seen.find(key(a.u, a.v)));
      seen.erase(seen.find(key(b.u, b.v)));
      seen.insert(key(na.u, na.v));
      seen.insert(key(nb.u, nb.v));
      edges[i] = na;
      edges[j] = nb;
      i = 0;  // rescan; swaps can move a bad edge anywhere
    }
    if (!ok) continue;
    bool clean = true;
    for (const Edge& e : edges)
      if (bad(e)) clean = false;
    if (clean) return Graph(n, std::move(edges));
  }
  throw std::runtime_error("random-regular: failed to generate a simple graph");
}

std::string to_edge_list_text(const Graph& g, const std::string& header_comment) {
  std::ostringstream out;
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  // Isolated vertices are kept visible via a comment so n is recoverable.
  out << "# n=" << g.num_vertices() << " m=" << g.num_edges() << "\n";
  for (const Edge& e : g.edges()) out << e.u << " " << e.v << "\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) == 0) out << "# isolated " << v << "\n";
  return out.str();
}

}  // namespace expdecomp
