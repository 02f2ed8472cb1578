#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iav/trace.hpp"

namespace iav {

struct VehicleMetrics {
  std::uint64_t collisions = 0;
  std::uint64_t full_stops = 0;   // stops outside an intersection handshake
  std::uint64_t wait_steps = 0;   // stationary steps while requesting or waiting
  std::uint64_t goals_reached = 0;
  std::uint64_t cycles_completed = 0;
  std::array<std::uint64_t, 5> sent{};  // indexed by message id - 1
  std::uint64_t intersection_passes = 0;
  std::uint64_t intersection_wait_total = 0;  // steps from request to grant, summed

  double mean_intersection_wait() const;
  friend bool operator==(const VehicleMetrics&, const VehicleMetrics&) = default;
};

struct Metrics {
  std::map<StationId, VehicleMetrics> vehicles;
  VehicleMetrics fleet;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Derived from the trace alone, so a replayed trace reproduces it exactly.
Metrics compute_metrics(const std::vector<TraceEvent>& events);

void write_metrics_csv(std::ostream& os, const Metrics& m);
std::string metrics_csv(const Metrics& m);

}  // namespace iav
