#include "iav/perception.hpp"

#include <algorithm>

namespace iav {

std::string to_string(EntityRef e) {
  const char prefix = e.kind == EntityKind::Vehicle ? 'v' : e.kind == EntityKind::Obstacle ? 'o' : 'p';
  return prefix + std::to_string(e.id);
}

EntityRef parse_entity(const std::string& s) {
  if (s.size() < 2) throw std::invalid_argument("bad entity '" + s + "'");
  EntityRef e;
  switch (s[0]) {
    case 'v': e.kind = EntityKind::Vehicle; break;
    case 'o': e.kind = EntityKind::Obstacle; break;
    case 'p': e.kind = EntityKind::Pedestrian; break;
    default: throw std::invalid_argument("bad entity '" + s + "'");
  }
  std::size_t used = 0;
  const unsigned long v = std::stoul(s.substr(1), &used);
  if (used != s.size() - 1 || v > 0xffffffffUL) throw std::invalid_argument("bad entity '" + s + "'");
  e.id = static_cast<std::uint32_t>(v);
  return e;
}

ObjectClassCode to_wire(ObjectClass c) {
  switch (c) {
    case ObjectClass::Pedestrian: return ObjectClassCode::Pedestrian;
    case ObjectClass::Iav: return ObjectClassCode::Iav;
    case ObjectClass::Object: return ObjectClassCode::Object;
  }
  return ObjectClassCode::Unknown;
}

const char* to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Pedestrian: return "pedestrian";
    case ObjectClass::Iav: return "iav";
    case ObjectClass::Object: return "object";
  }
  return "?";
}

void SensorConfig::validate() const {
  if (!(safety_distance > 0.0 && safety_distance < observation_distance))
    throw std::invalid_argument("sensor: need 0 < safety_distance < observation_distance");
  if (longitudinal_cone != 45.0) throw std::invalid_argument("sensor: longitudinal_cone must be 45");
  if (!(field_of_view > 0.0 && field_of_view <= 360.0)) throw std::invalid_argument("sensor: field_of_view in (0, 360]");
}

double PerceivedObject::along() const { return distance * std::cos(deg_to_rad(bearing)); }
double PerceivedObject::lateral() const { return distance * std::sin(deg_to_rad(bearing)); }

std::vector<PerceivedObject> scan(const WorldSnapshot& world, StationId vehicle_id, const SensorConfig& config) {
  const EntityRef self{EntityKind::Vehicle, vehicle_id};
  auto me = std::find_if(world.begin(), world.end(), [&](const Body& b) { return b.entity == self; });
  if (me == world.end()) throw UnknownVehicle("scan: no vehicle " + std::to_string(vehicle_id));

  std::vector<PerceivedObject> out;
  for (const Body& b : world) {
    if (b.entity == self) continue;
    const Vec2 rel = b.position - me->position;
    const double d = norm(rel);
    if (d > config.observation_distance) continue;
    const double bearing = d > 0.0 ? wrap_degrees(heading_of(rel) - me->heading) : 0.0;
    if (config.field_of_view < 360.0 && std::abs(bearing) > config.field_of_view / 2.0) continue;
    PerceivedObject o;
    o.object_class = b.object_class;
    o.distance = d;
    o.bearing = bearing;
    o.relative_speed = d > 0.0 ? dot(me->velocity - b.velocity, rel * (1.0 / d)) : 0.0;
    o.source_entity_id = b.entity;
    o.radius = b.radius;
    out.push_back(o);
  }
  std::sort(out.begin(), out.end(), [](const PerceivedObject& a, const PerceivedObject& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.source_entity_id < b.source_entity_id;
  });
  return out;
}

Risk classify_risk(const PerceivedObject& obj, const SensorConfig& config) {
  if (obj.distance > config.observation_distance) return {RiskLevel::None, CollisionRiskSubCause::Unavailable};
  if (obj.distance > config.safety_distance) return {RiskLevel::Observe, CollisionRiskSubCause::Unavailable};
  const double b = std::abs(obj.bearing);
  CollisionRiskSubCause sub;
  if (obj.object_class == ObjectClass::Pedestrian)
    sub = CollisionRiskSubCause::VulnerableUser;
  else if (b < config.longitudinal_cone)
    sub = CollisionRiskSubCause::Longitudinal;
  else if (b < 135.0)
    sub = CollisionRiskSubCause::Lateral;
  else
    sub = CollisionRiskSubCause::Crossing;
  return {RiskLevel::Alert, sub};
}

}  // namespace iav
