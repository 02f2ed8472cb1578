#pragma once

// Discrete-time world: scheduled obstacles, snapshot-isolated agent steps, a
// latency/loss broadcast bus carrying encoded frames, and a collision oracle.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "iav/agent.hpp"
#include "iav/perception.hpp"
#include "iav/rng.hpp"
#include "iav/scenario.hpp"
#include "iav/trace.hpp"
#include "iav/wire_codec.hpp"

namespace iav {

struct Frame {
  Step send_step = 0;
  StationId sender = 0;
  Bytes bytes;
};

struct Delivery {
  StationId receiver = 0;
  StationId sender = 0;
  Step send_step = 0;
  Message message;
};

/// Broadcast medium; every frame reaches every other station.
class Bus {
 public:
  Bus(BusConfig config, std::uint64_t seed);

  void send(Step now, StationId sender, Bytes frame);
  /// Frames due at `now` for every receiver except the sender, ordered by
  /// (receiver, send step, sender, message id). Lost frames are dropped per receiver.
  std::vector<Delivery> deliver(Step now, const std::vector<StationId>& receivers);
  std::size_t in_flight() const { return queue_.size(); }
  std::uint64_t undecodable() const { return undecodable_; }

 private:
  BusConfig config_;
  Rng rng_;
  std::vector<Frame> queue_;
  std::uint64_t undecodable_ = 0;
};

struct Contact {
  EntityRef a;
  EntityRef b;
  double distance = 0.0;
  friend bool operator==(const Contact&, const Contact&) = default;
};

/// Every pair of strictly overlapping bodies with at least one vehicle, a < b.
std::vector<Contact> collision_oracle(const WorldSnapshot& world);

struct ObstacleState {
  EntityRef entity;
  Vec2 position;
  Vec2 velocity;
  double radius = 0.2;
  ObstacleKind kind = ObstacleKind::Static;
  std::shared_ptr<const Polyline> path;
  double arc = 0.0;
  double speed = 0.0;
  std::optional<Step> remove_step;
};

struct VehicleState {
  AgentState agent;
  Vec2 velocity;
};

struct EngineOptions {
  std::optional<std::uint64_t> shuffle_order_seed;  // permute agent iteration order each step
  std::function<void(const TraceEvent&)> sink;      // receives events instead of the in-memory log
};

class Simulation {
 public:
  Simulation(Scenario scenario, std::uint64_t seed, EngineOptions options = {});

  void step();
  /// Steps until `steps` have run or every vehicle has finished its mission.
  void run(Step steps);

  Step now() const { return now_; }
  const Scenario& scenario() const { return scenario_; }
  const ProtocolParams& params() const { return params_; }
  const std::map<StationId, VehicleState>& vehicles() const { return vehicles_; }
  const std::vector<ObstacleState>& obstacles() const { return obstacles_; }
  const std::vector<TraceEvent>& events() const { return events_; }
  WorldSnapshot snapshot() const;

  /// Places an obstacle now. A spec without position draws a random point on a
  /// lane centreline that is farther than the observation distance from every vehicle.
  /// Throws PlanError(OffLane) for an explicit position outside every lane.
  EntityRef inject_obstacle(const ObstacleSpec& spec);
  bool remove_obstacle(EntityRef entity);

  std::uint64_t collisions() const { return collisions_; }

 private:
  void emit(std::vector<TraceEvent>& step_events);
  Vec2 random_lane_point();
  void apply_motion(VehicleState& v, const Motion& m);

  Scenario scenario_;
  ProtocolParams params_;
  TaskTable tasks_;
  EngineOptions options_;
  Rng injection_rng_;
  Rng order_rng_;
  Bus bus_;
  Step now_ = 0;
  std::map<StationId, VehicleState> vehicles_;
  std::vector<ObstacleState> obstacles_;
  std::uint32_t next_obstacle_id_ = 1;
  std::vector<Delivery> pending_inbox_;
  std::set<std::pair<EntityRef, EntityRef>> touching_;
  std::vector<TraceEvent> events_;
  std::vector<TraceEvent> scheduled_events_;
  std::uint64_t collisions_ = 0;
};

/// Builds the initial state of one vehicle from its scenario entry.
AgentState spawn_vehicle(const VehicleSpec& spec, const Scenario& scenario, const ProtocolParams& params);

/// Protocol parameters a scenario actually runs with: the grant delay is raised
/// to cover one request/answer round trip over the bus.
ProtocolParams effective_params(const Scenario& scenario);

}  // namespace iav
