#pragma once

// Per-vehicle cooperative driving logic: mission following, CAM beaconing,
// CPM/DENM emission from radar returns, obstacle avoidance, and the MCM/ACK_MCM
// intersection handshake with a deterministic priority tie-break.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "iav/geometry.hpp"
#include "iav/messages.hpp"
#include "iav/perception.hpp"
#include "iav/traffic_plan.hpp"

namespace iav {

using Step = std::uint64_t;

enum class Phase : std::uint8_t { Cruising, Following, Requesting, Waiting, Crossing, Avoiding, Blocked };

const char* to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view s);
inline bool is_intersection_phase(Phase p) {
  return p == Phase::Requesting || p == Phase::Waiting || p == Phase::Crossing;
}

struct PositionGoal {
  double x = 0.0;
  double y = 0.0;
  double arrival_tolerance = 0.2;
  friend bool operator==(const PositionGoal&, const PositionGoal&) = default;
};

struct Mission {
  std::vector<PositionGoal> goals;
  std::size_t cursor = 0;  // index of the head goal; wraps modulo goals.size() when cyclic
  bool cyclic = false;
  std::uint8_t task_priority = 0;
  std::uint8_t task_urgency = 0;

  bool exhausted() const { return !cyclic && cursor >= goals.size(); }
  const PositionGoal& head() const { return goals[cyclic ? cursor % goals.size() : cursor]; }
};

/// The ordering key every station uses to arbitrate an intersection.
struct TaskRank {
  StationId station = 0;
  std::uint8_t priority = 0;
  std::uint8_t urgency = 0;
  friend bool operator==(const TaskRank&, const TaskRank&) = default;
};

/// True when a goes before b: higher priority, then higher urgency, then lower station id.
bool outranks(const TaskRank& a, const TaskRank& b);

/// The station that crosses first. requests must be non-empty.
StationId resolve_conflict(std::span<const TaskRank> requests);

/// Task priorities of the fleet, known to every station.
using TaskTable = std::map<StationId, TaskRank>;

struct ProtocolParams {
  double dt = 0.1;              // seconds per step
  std::uint32_t cam_period = 5;  // steps
  std::uint32_t ack_timeout = 10;
  double ack_scope_factor = 2.0;  // peers within factor * approach_radius must answer
  std::uint32_t grant_delay = 2;  // minimum steps between MCM and entering the core
  std::uint32_t cpm_period = 10;
  std::uint32_t cpm_expiry = 50;
  std::uint32_t peer_timeout = 20;
  double update_epsilon = 0.25;  // metres of change before a DENM UPDATE
  std::uint32_t block_timeout = 50;
  std::uint32_t denm_validity = 5;  // seconds
  std::uint8_t denm_quality = 4;
  double clearance = 0.3;
  double vehicle_radius = 0.2;
  double stop_margin = 0.4;   // gap kept between a waiting vehicle's body and the core zone
  double lateral_rate = 0.05;  // metres of lateral shift per step
  double default_lane_width = 2.0;
  bool intersection_protocol = true;
  bool avoidance = true;
  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

struct PeerInfo {
  Vec2 position;
  Step last_seen = 0;
  std::optional<double> heading;  // estimated from successive reports
};

/// One cell of the local dynamic map.
struct ObstacleMark {
  Vec2 position;
  ObjectClass object_class = ObjectClass::Object;
  Step expiry = 0;
  StationId source = 0;
  std::uint16_t source_key = 0;  // (cause << 8 | sub_cause) for DENM, 0 for CPM
  bool remote = true;
};

struct AlertKey {
  CauseCode cause = CauseCode::CollisionRisk;
  std::uint8_t sub_cause = 0;
  friend auto operator<=>(const AlertKey&, const AlertKey&) = default;
};

/// A DENM this station has triggered and not yet terminated.
struct ActiveAlert {
  double emitted_distance = 0.0;
  std::optional<double> current_distance;  // nullopt once the condition no longer holds
  std::uint8_t quality = 0;
};

struct AgentState {
  StationId station_id = 0;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double cruise_speed = 1.0;
  Phase phase = Phase::Cruising;
  std::optional<IntersectionId> phase_intersection;
  Mission mission;
  std::set<StationId> pending_acks;
  std::map<StationId, PeerInfo> known_peers;
  std::vector<ObstacleMark> obstacle_map;
  std::map<AlertKey, ActiveAlert> active_alerts;

  // Path following. The path is shared and immutable; odometer is unwrapped.
  std::shared_ptr<const Polyline> path;
  std::shared_ptr<const std::vector<PathCrossing>> crossings;
  double odometer = 0.0;
  double lateral_offset = 0.0;

  // Handshake bookkeeping for the current intersection.
  bool request_sent = false;
  bool denied = false;
  std::optional<Step> last_request_step;
  double crossing_exit = 0.0;  // unwrapped odometer at which the held core is released
  Direction requested_direction = Direction::Straight;

  std::optional<EntityRef> avoiding;
  double avoid_target = 0.0;
  std::uint32_t stopped_steps = 0;
  std::map<EntityRef, Step> cpm_last_sent;

  std::uint64_t cycles_completed = 0;
  std::uint64_t malformed_dropped = 0;
  bool done = false;
};

struct Motion {
  double speed_command = 0.0;   // along-path speed, m/s
  double lateral_offset = 0.0;  // target offset from the path centreline, metres (left positive)
};

enum class AgentNoteKind : std::uint8_t { GoalReached, CycleCompleted, MissionDone };

struct AgentNote {
  AgentNoteKind kind = AgentNoteKind::GoalReached;
  std::uint64_t index = 0;  // goal index or completed cycle count
  Vec2 where;
};

struct StepOutput {
  AgentState state;
  std::vector<Message> outbox;  // CAM, CPM, DENM, MCM, ACK_MCM order
  Motion motion;
  std::vector<AgentNote> notes;
};

struct AgentContext {
  const TrafficPlan& plan;
  const ProtocolParams& params;
  const SensorConfig& sensor;
  const TaskTable& tasks;
};

/// Pure transition of one vehicle over one step.
StepOutput step_agent(const AgentState& state, std::span<const Message> inbox,
                      std::span<const PerceivedObject> scan_result, const AgentContext& ctx, Step now);

/// Reply to a maneuver request. Throws PlanError(UnknownIntersection).
AckMcmMessage answer_mcm(const AgentState& state, const McmMessage& mcm, const AgentContext& ctx, Step now);

struct Offset {
  double lateral_offset = 0.0;
  friend bool operator==(const Offset&, const Offset&) = default;
};
struct Stop {
  friend bool operator==(const Stop&, const Stop&) = default;
};
using AvoidanceDecision = std::variant<Offset, Stop>;

/// Smallest lateral shift that passes `obstacle` with the clearance margin, if
/// it stays inside the lane, the corridor is free, and the pass ends before the
/// current path segment does.
AvoidanceDecision avoidance_maneuver(const AgentState& state, const PerceivedObject& obstacle, double lane_width,
                                     const ProtocolParams& params, std::span<const PerceivedObject> scan_result);

struct GoalHead {
  PositionGoal goal;
};
struct MissionDone {};
using NextGoal = std::variant<GoalHead, MissionDone>;

NextGoal next_goal(const Mission& mission, Vec2 position);

/// UPDATE/TERMINATE messages for the state's active alerts; terminated alerts
/// are removed and emitted distances refreshed in `state`.
std::vector<DenmMessage> denm_lifecycle(AgentState& state, const ProtocolParams& params, Step now);

/// Rank of `station` in the fleet table, or (0, 0) when unknown.
TaskRank rank_of(const TaskTable& tasks, StationId station);

/// Generation time field: simulated milliseconds modulo 65536.
std::uint16_t generation_time(Step now, double dt);

}  // namespace iav
