#include "expdecomp/report.hpp"

#include <json.hpp>

namespace expdecomp {

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["phi"] = r.phi;
  j["seed"] = r.seed;
  j["threads"] = r.threads;
  j["clusters"] = r.clusters;
  j["error_edges"] = r.error_edges;
  j["error_fraction"] = r.error_fraction;
  j["counters"]["cut_matching_rounds"] = r.counters.cut_matching_rounds;
  j["counters"]["trim_iterations"] = r.counters.trim_iterations;
  j["counters"]["unit_flow_sweeps"] = r.counters.unit_flow_sweeps;
  j["counters"]["fast_forward_levels"] = r.counters.fast_forward_levels;
  j["counters"]["trapped_settles"] = r.counters.trapped_settles;
  j["counters"]["exact_cut_player_calls"] = r.counters.exact_cut_player_calls;
  j["counters"]["sweep_cut_hits"] = r.counters.sweep_cut_hits;
  j["counters"]["anomalies"] = r.counters.anomalies;
  j["wall_ms"] = r.wall_ms;
  return j.dump(2) + "\n";
}

}  // namespace expdecomp
