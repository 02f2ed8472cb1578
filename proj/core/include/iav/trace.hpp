#pragma once

// Line-oriented event log: step|entity|Event|field|field...

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "iav/agent.hpp"
#include "iav/wire_codec.hpp"

namespace iav {

enum class ObstacleKind : std::uint8_t { Static, Dynamic, Pedestrian };

const char* to_string(ObstacleKind k);
std::optional<ObstacleKind> parse_obstacle_kind(std::string_view s);

enum class EventKind : std::uint8_t {
  Moved = 0,
  Sent,
  Delivered,
  PhaseChanged,
  CollisionDetected,
  GoalReached,
  ObstacleInjected,
  ObstacleRemoved,
  CycleCompleted,
  MissionDone,
};

const char* to_string(EventKind k);

namespace ev {
struct Moved {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  friend bool operator==(const Moved&, const Moved&) = default;
};
struct Sent {
  MessageId id = MessageId::Cam;
  Bytes frame;
  friend bool operator==(const Sent&, const Sent&) = default;
};
struct Delivered {
  StationId from = 0;
  MessageId id = MessageId::Cam;
  Step send_step = 0;
  friend bool operator==(const Delivered&, const Delivered&) = default;
};
struct PhaseChanged {
  Phase from = Phase::Cruising;
  Phase to = Phase::Cruising;
  std::optional<IntersectionId> intersection;
  friend bool operator==(const PhaseChanged&, const PhaseChanged&) = default;
};
struct CollisionDetected {
  EntityRef other;
  double distance = 0.0;
  friend bool operator==(const CollisionDetected&, const CollisionDetected&) = default;
};
struct GoalReached {
  std::uint64_t index = 0;
  Vec2 position;
  friend bool operator==(const GoalReached&, const GoalReached&) = default;
};
struct ObstacleInjected {
  Vec2 position;
  double radius = 0.0;
  ObstacleKind kind = ObstacleKind::Static;
  friend bool operator==(const ObstacleInjected&, const ObstacleInjected&) = default;
};
struct ObstacleRemoved {
  friend bool operator==(const ObstacleRemoved&, const ObstacleRemoved&) = default;
};
struct CycleCompleted {
  std::uint64_t count = 0;
  friend bool operator==(const CycleCompleted&, const CycleCompleted&) = default;
};
struct MissionDone {
  friend bool operator==(const MissionDone&, const MissionDone&) = default;
};
}  // namespace ev

using EventData = std::variant<ev::Moved, ev::Sent, ev::Delivered, ev::PhaseChanged, ev::CollisionDetected,
                               ev::GoalReached, ev::ObstacleInjected, ev::ObstacleRemoved, ev::CycleCompleted,
                               ev::MissionDone>;

struct TraceEvent {
  Step step = 0;
  EntityRef entity;
  EventData data;

  EventKind kind() const { return static_cast<EventKind>(data.index()); }
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string format_event(const TraceEvent& e);
/// Throws TraceError with the given line number.
TraceEvent parse_event(std::string_view line, std::size_t line_no = 0);

void write_trace(std::ostream& os, const std::vector<TraceEvent>& events);
std::vector<TraceEvent> read_trace(std::istream& is);

}  // namespace iav
