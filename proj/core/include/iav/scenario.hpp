#pragma once

// Scenario files: INI-like sections with `key = value` lines and `#` comments.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iav/agent.hpp"
#include "iav/perception.hpp"
#include "iav/trace.hpp"
#include "iav/traffic_plan.hpp"

namespace iav {

struct BusConfig {
  std::uint32_t latency = 0;  // steps between send and delivery
  double loss = 0.0;          // per-receiver drop probability
  friend bool operator==(const BusConfig&, const BusConfig&) = default;
};

struct VehicleSpec {
  StationId station_id = 0;
  // Route mission: loop forever on a route, starting from a spawn point.
  std::optional<RouteRole> route;
  std::size_t spawn = 0;
  // Goal mission: drive start -> goals in order, then leave the world.
  std::optional<Vec2> start;
  std::vector<Vec2> goals;
  double arrival_tolerance = 0.2;
  std::uint8_t priority = 0;
  std::uint8_t urgency = 0;
  double cruise_speed = 1.0;
  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

struct ObstacleSpec {
  std::uint32_t label = 0;
  Step step = 0;
  std::optional<Step> remove_step;
  std::optional<Vec2> position;  // nullopt: random point on a lane away from vehicles
  double radius = 0.2;
  ObstacleKind kind = ObstacleKind::Static;
  std::vector<Vec2> path;  // closed loop followed by moving obstacles
  double speed = 0.8;
  friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

struct Scenario {
  bool builtin_plan = true;
  TrafficPlan plan;
  SensorConfig sensor;
  ProtocolParams protocol;
  BusConfig bus;
  std::vector<VehicleSpec> vehicles;
  std::vector<ObstacleSpec> obstacles;
};

bool operator==(const Scenario& a, const Scenario& b);

enum class ScenarioErrc { SyntaxError, UnknownKey, DuplicateStationId, InvalidScenario };

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(ScenarioErrc code, std::size_t line, const std::string& what);
  ScenarioErrc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ScenarioErrc code_;
  std::size_t line_;
};

const char* to_string(ScenarioErrc c);

/// Parses and validates. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

/// Throws ScenarioError(InvalidScenario) or ScenarioError(DuplicateStationId).
void validate_scenario(const Scenario& s);

/// The fleet's task table, shared by all stations.
TaskTable task_table(const Scenario& s);

/// Ten vehicles on the benchmark plan with three random static obstacles.
Scenario benchmark_scenario();

}  // namespace iav
