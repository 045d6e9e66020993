#include "expdecomp/cut_matching.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "expdecomp/verify.hpp"

namespace expdecomp {

PathDecomposition path_decompose(const FlowInstance& inst, int64_t h, double drop_fraction) {
  const Graph& g = *inst.graph;
  if (drop_fraction < 0.0 || drop_fraction >= 1.0)
    throw std::invalid_argument("path_decompose: drop_fraction must be in [0,1)");
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (inst.source[v] > 1 || inst.sink_total[v] > 1)
      throw std::invalid_argument("path_decompose: expects unit sources and sinks");
  std::vector<int64_t> ex = excess(inst);  // validates feasibility

  // Remaining unit multiplicity per edge, plus per-vertex outgoing flow lists
  // in (neighbor, edge) order for deterministic traces.
  std::vector<int64_t> rem(g.num_edges(), 0);
  std::vector<std::vector<std::pair<Vertex, EdgeId>>> out_adj(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (const auto& [u, e] : g.neighbors(v)) {
      if (!inst.edge_active[e]) continue;
      if (inst.flow_into(e, u) > 0) out_adj[v].emplace_back(u, e);
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (inst.edge_active[e]) rem[e] = std::llabs(inst.flow[e]);

  std::vector<int64_t> supply(g.num_vertices(), 0), sink_end(g.num_vertices(), 0), park_end(g.num_vertices(), 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!inst.vertex_active[v]) continue;
    supply[v] = std::max<int64_t>(inst.source[v] - ex[v] - inst.absorbed[v], 0);
    int64_t demand = std::max<int64_t>(ex[v] + inst.absorbed[v] - inst.source[v], 0);
    sink_end[v] = std::min(inst.absorbed[v], demand);
    park_end[v] = demand - sink_end[v];
  }

  std::vector<std::vector<Vertex>> paths;
  std::vector<std::vector<EdgeId>> path_edges;
  std::vector<uint8_t> kinds;
  std::vector<int32_t> pos_of(g.num_vertices(), -1);
  std::vector<size_t> cursor(g.num_vertices(), 0);

  for (Vertex start = 0; start < g.num_vertices(); ++start) {
    while (supply[start] > 0) {
      --supply[start];
      std::vector<Vertex> path{start};
      std::vector<EdgeId> edges;
      pos_of[start] = 0;
      Vertex cur = start;
      uint8_t kind = 0;
      while (true) {
        if (cur != start && sink_end[cur] > 0) {
          --sink_end[cur];
          kind = 1;
          break;
        }
        if (cur != start && park_end[cur] > 0) {
          --park_end[cur];
          kind = 0;
          break;
        }
        auto& oa = out_adj[cur];
        size_t& c = cursor[cur];
        while (c < oa.size() && rem[oa[c].second] == 0) ++c;
        if (c >= oa.size()) throw std::logic_error("path_decompose: trace ran out of flow (conservation broken)");
        auto [to, e] = oa[c];
        --rem[e];
        if (pos_of[to] >= 0) {
          // Cycle in the remaining flow; it carries no supply, drop it.
          while (path.back() != to) {
            pos_of[path.back()] = -1;
            path.pop_back();
            edges.pop_back();
          }
          cur = to;
        } else {
          pos_of[to] = static_cast<int32_t>(path.size());
          path.push_back(to);
          edges.push_back(e);
          cur = to;
        }
      }
      for (Vertex v : path) pos_of[v] = -1;
      paths.push_back(std::move(path));
      path_edges.push_back(std::move(edges));
      kinds.push_back(kind);
    }
  }

  PathDecomposition out;
  std::vector<uint8_t> dropped(paths.size(), 0);
  if (drop_fraction > 0.0 && !paths.empty()) {
    double cap_d = std::ceil(static_cast<double>(h + 1) / drop_fraction);
    int64_t cap_len = cap_d > 9e18 ? INT64_MAX : static_cast<int64_t>(cap_d);
    int64_t budget = static_cast<int64_t>(drop_fraction * static_cast<double>(paths.size()));
    std::vector<size_t> idx(paths.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      if (path_edges[a].size() != path_edges[b].size()) return path_edges[a].size() > path_edges[b].size();
      return a < b;
    });
    for (size_t i : idx) {
      int64_t len = static_cast<int64_t>(path_edges[i].size());
      if (len <= cap_len) break;
      if (budget <= 0) throw std::logic_error("path_decompose: drop budget too small for the length cap");
      dropped[i] = 1;
      --budget;
      ++out.dropped;
    }
  }
  for (size_t i = 0; i < paths.size(); ++i) {
    if (dropped[i]) continue;
    out.paths.push_back(std::move(paths[i]));
    out.path_edges.push_back(std::move(path_edges[i]));
    out.ends_at_sink.push_back(kinds[i]);
  }
  return out;
}

MatchResult parallel_matching(const Graph& g, const VertexSet& s, const VertexSet& t, double phi,
                              Counters* counters) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("parallel_matching: phi must be in (0,1)");
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) > kDegreeBound)
      throw std::invalid_argument("parallel_matching: degree bound 16 violated at vertex " + std::to_string(v));
  if (s.size() > t.size()) throw std::invalid_argument("parallel_matching: |S| must be <= |T|");

  int n = g.num_vertices();
  int64_t m = g.num_edges();
  MatchResult res;
  res.h = static_cast<int64_t>(std::ceil(100.0 * std::log2(static_cast<double>(std::max<int64_t>(m, 2))) / phi));
  int64_t kappa = static_cast<int64_t>(std::ceil(2.0 / phi));

  std::vector<Vertex> self_matched;
  FlowInstance inst(g, kappa);
  for (Vertex v : s.vertices()) {
    if (t.contains(v))
      self_matched.push_back(v);
    else
      inst.source[v] = 1;
  }
  for (Vertex v : t.vertices())
    if (!s.contains(v)) inst.sink_total[v] = 1;
  inst.excess = inst.source;

  LevelState lvl(n, res.h);
  double threshold = phi * static_cast<double>(m) / 16.0;
  double iter_bound = 64.0 * static_cast<double>(ceil_log2(std::max<int64_t>(m, 2))) / (phi * phi * phi);
  while (true) {
    int64_t unsettled = unsettled_excess(inst, lvl);
    if (unsettled <= 0 || static_cast<double>(unsettled) < threshold) break;
    SweepStats st = push_then_relabel(inst, lvl, inst.sink_total, inst.sink_total);
    ++res.loop_iterations;
    if (counters) ++counters->unit_flow_sweeps;
    if (!st.any()) throw std::logic_error("parallel_matching: flow loop stalled");
    if (st.absorbed_units == 0 && st.relabels > 0) {
      int64_t settled = settle_trapped_excess(inst, lvl);
      if (settled > 0) {
        if (counters) ++counters->trapped_settles;
        continue;
      }
      if (st.pushed_units == 0) {
        int64_t extra = fast_forward_climb(inst, lvl, st.risen);
        if (counters) counters->fast_forward_levels += extra;
      }
    }
    if (static_cast<double>(res.loop_iterations) > iter_bound)
      throw std::logic_error("parallel_matching: loop iteration bound exceeded");
  }
  for (Vertex v = 0; v < n; ++v)
    if (lvl.level[v] == lvl.h + 1) lvl.level[v] = lvl.h;

  // Level cut over {level >= h+1-j} while the residual out-boundary stays
  // >= (phi/4) * deg(S_j).
  std::vector<uint8_t> in_s(n, 0);
  std::vector<Vertex> cut_part;
  {
    std::vector<std::pair<int64_t, Vertex>> by_level;
    for (Vertex v = 0; v < n; ++v) by_level.emplace_back(-lvl.level[v], v);
    std::sort(by_level.begin(), by_level.end());
    size_t next = 0;
    int64_t vol = 0;
    auto grow_to = [&](int64_t min_level) {
      while (next < by_level.size() && -by_level[next].first >= min_level) {
        Vertex v = by_level[next].second;
        in_s[v] = 1;
        vol += g.degree(v);
        ++next;
      }
    };
    grow_to(lvl.h);
    if (next > 0) {
      int64_t j = 0;
      while (true) {
        int64_t residual_out = 0;
        for (size_t i = 0; i < next; ++i) {
          Vertex v = by_level[i].second;
          for (const auto& [u, e] : g.neighbors(v)) {
            if (in_s[u]) continue;
            if (inst.residual(e, v) > 0) ++residual_out;
          }
        }
        if (vol == 0 || static_cast<double>(residual_out) < (phi / 4.0) * static_cast<double>(vol)) break;
        ++j;
        if (j >= res.h) throw std::logic_error("parallel_matching: level cut did not converge");
        grow_to(lvl.h + 1 - j);
        if (next == by_level.size() && j > 1) break;  // whole graph; residual boundary is empty
      }
      res.level_cut_steps = j;
      for (size_t i = 0; i < next; ++i) cut_part.push_back(by_level[i].second);
    }
  }

  PathDecomposition pd = path_decompose(inst, res.h, phi);
  res.dropped_paths = pd.dropped;
  std::vector<uint8_t> has_path(n, 0);
  std::vector<int64_t> edge_use(g.num_edges(), 0);
  for (size_t i = 0; i < pd.paths.size(); ++i) {
    if (!pd.ends_at_sink[i]) continue;  // parked mass; its source stays unmatched
    res.paths.push_back(pd.paths[i]);
    res.matching.emplace_back(pd.paths[i].front(), pd.paths[i].back());
    has_path[pd.paths[i].front()] = 1;
    for (EdgeId e : pd.path_edges[i]) res.congestion = std::max(res.congestion, ++edge_use[e]);
  }
  for (Vertex v : self_matched) {
    res.paths.push_back({v});
    res.matching.emplace_back(v, v);
    has_path[v] = 1;
  }

  std::vector<Vertex> c_members = cut_part;
  for (Vertex v : s.vertices())
    if (!has_path[v]) c_members.push_back(v);
  res.cut = VertexSet(g, c_members);
  return res;
}

namespace {

struct Lift {
  std::vector<Vertex> members;  // on G
};

// Exact rational conductance of cand inside the remainder subgraph.
bool sparse_in_remainder(const Graph& g, const std::vector<uint8_t>& g_rem, const std::vector<Vertex>& members,
                         double phi) {
  std::vector<uint8_t> cand(g.num_vertices(), 0);
  for (Vertex v : members) cand[v] = 1;
  int64_t ccut = 0, cvol = 0, rvol = 0;
  for (const Edge& e : g.edges()) {
    if (!g_rem[e.u] || !g_rem[e.v]) continue;
    rvol += 2;
    if (cand[e.u] != cand[e.v]) ++ccut;
    if (cand[e.u]) ++cvol;
    if (cand[e.v]) ++cvol;
  }
  int64_t minvol = std::min(cvol, rvol - cvol);
  if (minvol <= 0) return false;
  return ratio_less(ccut, minvol, phi);
}

// Prefix sweep over the projection order of the active reduced graph;
// candidates are lifted to G and accepted only when their conductance inside
// the current remainder is below phi by exact rational comparison.
std::optional<Lift> find_sweep_cut(const Graph& g, const DegreeReduction& red, const Graph& h_graph,
                                   const std::vector<uint8_t>& h_active, const std::vector<Vertex>& order,
                                   const std::vector<uint8_t>& g_rem, double phi) {
  if (order.size() < 2) return std::nullopt;
  // Degrees within H[active].
  std::vector<int64_t> hdeg(h_graph.num_vertices(), 0);
  int64_t total_vol = 0;
  for (const Edge& e : h_graph.edges()) {
    if (!h_active[e.u] || !h_active[e.v]) continue;
    hdeg[e.u] += 1;
    hdeg[e.v] += 1;
    total_vol += 2;
  }
  if (total_vol == 0) return std::nullopt;

  struct Cand {
    int64_t cut;
    int64_t minvol;
    size_t k;
  };
  std::vector<Cand> best;
  auto sparser = [](const Cand& a, const Cand& b) {
    return static_cast<__int128>(a.cut) * b.minvol < static_cast<__int128>(b.cut) * a.minvol;
  };

  std::vector<uint8_t> in_prefix(h_graph.num_vertices(), 0);
  int64_t cut = 0, vol = 0;
  for (size_t k = 0; k + 1 < order.size(); ++k) {
    Vertex v = order[k];
    in_prefix[v] = 1;
    vol += hdeg[v];
    for (const auto& [u, e] : h_graph.neighbors(v)) {
      (void)e;
      if (!h_active[u]) continue;
      cut += in_prefix[u] ? -1 : 1;
    }
    int64_t minvol = std::min(vol, total_vol - vol);
    if (minvol <= 0) continue;
    Cand c{cut, minvol, k};
    best.push_back(c);
    std::sort(best.begin(), best.end(), sparser);
    if (best.size() > 4) best.pop_back();
  }

  for (const Cand& c : best) {
    std::vector<int64_t> copies_in(g.num_vertices(), 0);
    for (size_t i = 0; i <= c.k; ++i) copies_in[red.back[order[i]]] += 1;
    std::vector<uint8_t> cand(g.num_vertices(), 0);
    std::vector<Vertex> members;
    int64_t rem_count = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      if (g_rem[v]) ++rem_count;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (!g_rem[v] || copies_in[v] == 0) continue;
      if (2 * copies_in[v] >= static_cast<int64_t>(red.fwd[v].size())) {
        cand[v] = 1;
        members.push_back(v);
      }
    }
    if (members.empty() || static_cast<int64_t>(members.size()) >= rem_count) continue;
    if (sparse_in_remainder(g, g_rem, members, phi)) return Lift{std::move(members)};
  }
  return std::nullopt;
}

}  // namespace

CutMatchResult cut_matching(const Graph& g, double phi, uint64_t seed, Counters* counters) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("cut_matching: phi must be in (0,1)");
  int n = g.num_vertices();
  int64_t m = g.num_edges();
  int64_t log_n = ceil_log2(std::max<int64_t>(n, 2));
  double sparsity_bound = phi * static_cast<double>(m) / (64.0 * static_cast<double>(log_n * log_n));

  CutMatchResult res;
  res.cut = VertexSet::none(g);
  auto finalize = [&](std::vector<Vertex> members, bool certified) {
    res.cut = VertexSet(g, members);
    res.certified_remainder = certified;
    if (res.cut.size() == 0) {
      res.sparsity_ok = true;  // vacuous
      res.balanced = false;
    } else {
      res.sparsity_ok = static_cast<double>(cut_edges(g, res.cut)) < sparsity_bound;
      res.balanced = 100 * res.cut.volume() > m;
    }
  };

  if (n <= 1 || m == 0) {
    finalize({}, true);
    return res;
  }

  if (n <= kBruteForceLimit) {
    if (counters) ++counters->exact_cut_player_calls;
    ExpansionReport rep = brute_force_expansion(g, phi);
    if (rep.phi_den > 0 && ratio_less(rep.phi_num, rep.phi_den, phi)) {
      // Return the smaller-volume side of the exact minimizer.
      VertexSet side = rep.witness;
      if (side.volume() > g.total_volume() - side.volume()) side = side.complement();
      finalize(side.vertices(), false);
    } else {
      finalize({}, true);
    }
    return res;
  }

  DegreeReduction red = degree_reduce(g);
  const Graph& H = red.reduced;
  int nH = H.num_vertices();
  std::vector<uint8_t> h_active(nH, 1);
  std::vector<uint8_t> g_rem(n, 1);
  std::vector<Vertex> acc;
  int64_t acc_vol = 0;
  int64_t rem_count = n;
  Rng rng(seed);
  std::vector<double> proj(nH), next_proj(nH);
  int64_t rounds_max = log_n * log_n;

  auto remove_from_remainder = [&](const std::vector<Vertex>& members) {
    for (Vertex v : members) {
      g_rem[v] = 0;
      acc.push_back(v);
      acc_vol += g.degree(v);
      --rem_count;
      for (Vertex c : red.fwd[v]) h_active[c] = 0;
    }
  };

  for (int64_t round = 1; round <= rounds_max; ++round) {
    res.rounds = round;
    if (counters) ++counters->cut_matching_rounds;
    if (rem_count <= 1) break;

    // Project a fresh random direction through a lazy random walk on the
    // active reduced graph: fast modes die off and any sparse-cut mode
    // survives, so the sweep order lines up with sparse cuts when they exist.
    for (Vertex v = 0; v < nH; ++v) proj[v] = h_active[v] ? rng.gaussian() : 0.0;
    std::vector<int64_t> hdeg(nH, 0);
    for (const Edge& e : H.edges()) {
      if (!h_active[e.u] || !h_active[e.v]) continue;
      hdeg[e.u] += 1;
      hdeg[e.v] += 1;
    }
    int64_t active_count = 0;
    for (Vertex v = 0; v < nH; ++v)
      if (h_active[v]) ++active_count;
    int64_t walk_steps = 10 * ceil_log2(std::max<int64_t>(active_count, 2));
    for (int64_t s = 0; s < walk_steps; ++s) {
      std::fill(next_proj.begin(), next_proj.end(), 0.0);
      for (const Edge& e : H.edges()) {
        if (!h_active[e.u] || !h_active[e.v]) continue;
        next_proj[e.u] += proj[e.v];
        next_proj[e.v] += proj[e.u];
      }
      for (Vertex v = 0; v < nH; ++v) {
        if (!h_active[v]) continue;
        proj[v] = hdeg[v] > 0 ? 0.5 * proj[v] + 0.5 * next_proj[v] / static_cast<double>(hdeg[v]) : proj[v];
      }
    }
    std::vector<Vertex> order;
    order.reserve(nH);
    for (Vertex v = 0; v < nH; ++v)
      if (h_active[v]) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      if (proj[a] != proj[b]) return proj[a] < proj[b];
      return a < b;
    });

    if (auto cand = find_sweep_cut(g, red, H, h_active, order, g_rem, phi)) {
      if (counters) ++counters->sweep_cut_hits;
      remove_from_remainder(cand->members);
      if (100 * acc_vol > m) {
        finalize(acc, false);
        return res;
      }
      continue;
    }

    if (order.size() < 2) break;
    // Matching round: median split of the projections, sources on the low
    // half. A choked flow surfaces its level cut as a candidate.
    VertexSet active_set(H, order);
    InducedSubgraph hact = induced_subgraph(H, active_set);
    std::vector<Vertex> s_local, t_local;
    size_t half = order.size() / 2;
    for (size_t i = 0; i < order.size(); ++i) {
      Vertex lv = hact.from_parent[order[i]];
      (i < half ? s_local : t_local).push_back(lv);
    }
    MatchResult mr = parallel_matching(hact.graph, VertexSet(hact.graph, s_local), VertexSet(hact.graph, t_local),
                                       phi, counters);

    if (mr.cut.size() > 0) {
      std::vector<int64_t> copies_in(n, 0);
      for (Vertex hv : mr.cut.vertices()) copies_in[red.back[hact.to_parent[hv]]] += 1;
      std::vector<Vertex> members;
      for (Vertex v = 0; v < n; ++v) {
        if (!g_rem[v] || copies_in[v] == 0) continue;
        if (2 * copies_in[v] >= static_cast<int64_t>(red.fwd[v].size())) members.push_back(v);
      }
      // The theorem cut can carry crumbs (single parked units) at this scale;
      // only cuts that are genuinely sparse in the remainder accumulate.
      if (!members.empty() && static_cast<int64_t>(members.size()) < rem_count &&
          sparse_in_remainder(g, g_rem, members, phi)) {
        remove_from_remainder(members);
        if (100 * acc_vol > m) {
          finalize(acc, false);
          return res;
        }
      }
    }
  }

  finalize(acc, true);
  return res;
}

}  // namespace expdecomp
