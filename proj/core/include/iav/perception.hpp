#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iav/geometry.hpp"
#include "iav/messages.hpp"

namespace iav {

enum class EntityKind : std::uint8_t { Vehicle = 0, Obstacle = 1, Pedestrian = 2 };

/// Identity of anything with a body in the world. Vehicles use their station id.
struct EntityRef {
  EntityKind kind = EntityKind::Vehicle;
  std::uint32_t id = 0;
  friend auto operator<=>(const EntityRef&, const EntityRef&) = default;
};

std::string to_string(EntityRef e);
/// Inverse of to_string ("v7", "o2", "p1"). Throws std::invalid_argument.
EntityRef parse_entity(const std::string& s);

enum class ObjectClass : std::uint8_t { Pedestrian, Iav, Object };

ObjectClassCode to_wire(ObjectClass c);
const char* to_string(ObjectClass c);

/// Ground truth for one body at the start of a step.
struct Body {
  EntityRef entity;
  ObjectClass object_class = ObjectClass::Object;
  Vec2 position;
  Vec2 velocity;         // m/s, from the previous step's motion
  double heading = 0.0;  // degrees; meaningful for vehicles
  double radius = 0.2;
};

using WorldSnapshot = std::vector<Body>;

struct SensorConfig {
  double observation_distance = 3.0;
  double safety_distance = 1.0;
  double field_of_view = 360.0;
  double longitudinal_cone = 45.0;

  /// Throws std::invalid_argument unless 0 < safety < observation and cone == 45.
  void validate() const;
  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

struct PerceivedObject {
  ObjectClass object_class = ObjectClass::Object;
  double distance = 0.0;
  double bearing = 0.0;         // degrees in (-180, 180], relative to own heading
  double relative_speed = 0.0;  // closing speed, positive when approaching
  EntityRef source_entity_id;   // tracking identity, never transmitted
  double radius = 0.0;          // body radius, never transmitted

  /// Position in the sensing vehicle's frame: x ahead, y to the left.
  double along() const;
  double lateral() const;
};

class UnknownVehicle : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Every other body within observation distance, nearest first (ties by entity).
std::vector<PerceivedObject> scan(const WorldSnapshot& world, StationId vehicle_id, const SensorConfig& config);

enum class RiskLevel : std::uint8_t { None, Observe, Alert };

struct Risk {
  RiskLevel level = RiskLevel::None;
  CollisionRiskSubCause sub_cause = CollisionRiskSubCause::Unavailable;  // set for Alert only
  friend bool operator==(const Risk&, const Risk&) = default;
};

Risk classify_risk(const PerceivedObject& obj, const SensorConfig& config);

}  // namespace iav
