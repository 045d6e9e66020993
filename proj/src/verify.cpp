#include "expdecomp/verify.hpp"

#include <bit>
#include <stdexcept>

namespace expdecomp {

namespace {

// Cross-multiplied comparison of cut_a/vol_a < cut_b/vol_b.
bool sparsity_less(int64_t cut_a, int64_t vol_a, int64_t cut_b, int64_t vol_b) {
  return static_cast<__int128>(cut_a) * vol_b < static_cast<__int128>(cut_b) * vol_a;
}

}  // namespace

ExpansionReport brute_force_expansion(const Graph& g, double phi) {
  int n = g.num_vertices();
  if (n > kBruteForceLimit)
    throw std::invalid_argument("brute_force_expansion: graph too large (n > 24)");
  ExpansionReport rep;
  rep.witness = VertexSet::none(g);
  if (n <= 1) return rep;  // no nonempty proper subset

  // Gray-code walk over subsets of {1..n-1}; vertex 0 stays outside S, which
  // still covers every cut once.
  int bits = n - 1;
  uint64_t total = (uint64_t{1} << bits) - 1;
  std::vector<uint8_t> in_s(n, 0);
  int64_t cut = 0, vol_s = 0;
  int64_t twom = g.total_volume();
  int64_t best_cut = -1, best_vol = 0;
  uint64_t best_mask = 0;
  uint64_t gray = 0;
  for (uint64_t k = 1; k <= total; ++k) {
    uint64_t next = k ^ (k >> 1);
    uint64_t diff = gray ^ next;
    Vertex w = static_cast<Vertex>(std::countr_zero(diff)) + 1;
    bool entering = (next & diff) != 0;
    if (entering) vol_s += g.degree(w); else vol_s -= g.degree(w);
    for (const auto& [u, e] : g.neighbors(w)) {
      (void)e;
      bool u_in = in_s[u] != 0;
      if (entering)
        cut += u_in ? -1 : 1;
      else
        cut += u_in ? 1 : -1;
    }
    in_s[w] = entering ? 1 : 0;
    gray = next;

    int64_t min_vol = std::min(vol_s, twom - vol_s);
    if (min_vol <= 0) continue;  // zero-volume side cannot violate expansion
    if (best_cut < 0 || sparsity_less(cut, min_vol, best_cut, best_vol)) {
      best_cut = cut;
      best_vol = min_vol;
      best_mask = gray;
    }
  }

  if (best_cut < 0) return rep;  // every cut had a zero-volume side
  rep.phi_num = best_cut;
  rep.phi_den = best_vol;
  rep.is_expander = ratio_geq(best_cut, best_vol, phi);
  std::vector<Vertex> members;
  for (int b = 0; b < bits; ++b)
    if (best_mask & (uint64_t{1} << b)) members.push_back(static_cast<Vertex>(b + 1));
  rep.witness = VertexSet(g, members);
  return rep;
}

NearlyExpanderReport brute_force_nearly_expander(const Graph& g, const VertexSet& a, double phi) {
  if (a.size() > kBruteForceLimit)
    throw std::invalid_argument("brute_force_nearly_expander: set too large (|A| > 24)");
  NearlyExpanderReport rep;
  const auto& verts = a.vertices();
  int bits = static_cast<int>(verts.size());
  if (bits == 0) return rep;
  uint64_t total = (uint64_t{1} << bits) - 1;
  std::vector<uint8_t> in_s(g.num_vertices(), 0);
  int64_t cut = 0, vol_s = 0;  // cut counts edges of G leaving S
  int64_t vol_a = a.volume();
  uint64_t gray = 0;
  for (uint64_t k = 1; k <= total; ++k) {
    uint64_t next = k ^ (k >> 1);
    uint64_t diff = gray ^ next;
    Vertex w = verts[std::countr_zero(diff)];
    bool entering = (next & diff) != 0;
    if (entering) vol_s += g.degree(w); else vol_s -= g.degree(w);
    for (const auto& [u, e] : g.neighbors(w)) {
      (void)e;
      bool u_in = in_s[u] != 0;
      if (entering)
        cut += u_in ? -1 : 1;
      else
        cut += u_in ? 1 : -1;
    }
    in_s[w] = entering ? 1 : 0;
    gray = next;

    if (vol_s > vol_a - vol_s) continue;  // only the smaller-volume half is constrained
    if (vol_s == 0) continue;
    if (ratio_less(cut, vol_s, phi)) {
      rep.holds = false;
      for (int b = 0; b < bits; ++b)
        if (gray & (uint64_t{1} << b)) rep.witness.push_back(verts[b]);
      return rep;
    }
  }
  return rep;
}

bool check_flow_feasible(const FlowInstance& inst) {
  const Graph& g = *inst.graph;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!inst.edge_active[e]) continue;
    if (inst.cap[e] < 0) return false;
    if (inst.flow[e] > inst.cap[e] || inst.flow[e] < -inst.cap[e]) return false;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    if (inst.source[v] < 0 || inst.absorbed[v] < 0) return false;
    if (inst.absorbed[v] > inst.sink_total[v]) return false;
    if (inst.source[v] + inst.net_in(v) - inst.absorbed[v] < 0) return false;
  }
  return true;
}

}  // namespace expdecomp
