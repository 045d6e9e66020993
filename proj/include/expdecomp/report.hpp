#pragma once

#include <cstdint>
#include <string>

#include "expdecomp/util.hpp"

namespace expdecomp {

// Everything here is stable for a fixed seed except wall_ms.
struct RunReport {
  int64_t n = 0;
  int64_t m = 0;
  double phi = 0.0;
  uint64_t seed = 0;
  int threads = 1;
  int64_t clusters = 0;
  int64_t error_edges = 0;
  double error_fraction = 0.0;
  Counters counters;
  double wall_ms = 0.0;
};

std::string report_to_json(const RunReport& r);

}  // namespace expdecomp
