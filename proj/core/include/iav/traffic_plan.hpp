#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iav/geometry.hpp"
#include "iav/messages.hpp"

namespace iav {

using WaypointId = std::uint32_t;
using IntersectionId = std::uint8_t;

enum class PlanErrc { UnknownIntersection, UnknownWaypoint, UnknownRoute, OffRoute, OffLane, InvalidPlan };

class PlanError : public std::runtime_error {
 public:
  PlanError(PlanErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  PlanErrc code() const noexcept { return code_; }

 private:
  PlanErrc code_;
};

struct Waypoint {
  WaypointId id = 0;
  Vec2 pos;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Lane {
  WaypointId from = 0;
  WaypointId to = 0;
  double width = 2.0;
  friend bool operator==(const Lane&, const Lane&) = default;
};

struct Intersection {
  IntersectionId id = 0;
  Vec2 center;
  double core_radius = 2.0;      // held exclusively by one vehicle
  double approach_radius = 6.0;  // entering it starts the maneuver handshake
  friend bool operator==(const Intersection&, const Intersection&) = default;
};

enum class RouteRole : std::uint8_t { Red, Blue, Yellow };

const char* to_string(RouteRole r);
std::optional<RouteRole> parse_route_role(std::string_view s);

struct Route {
  RouteRole role = RouteRole::Red;
  std::vector<WaypointId> waypoint_ids;  // cyclic: the last connects back to the first
  friend bool operator==(const Route&, const Route&) = default;
};

enum class Zone { Outside, Approach, Core };

/// Arc-length parameterised polyline. Cyclic polylines wrap at length().
class Polyline {
 public:
  Polyline() = default;
  Polyline(std::vector<Vec2> points, bool cyclic);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  bool cyclic() const { return cyclic_; }
  const std::vector<Vec2>& points() const { return points_; }
  std::size_t segment_count() const { return cumulative_.empty() ? 0 : cumulative_.size() - 1; }

  /// Normalises an arc position into [0, length()) for cyclic paths, clamps otherwise.
  double wrap(double s) const;
  std::size_t segment_at(double s) const;
  Vec2 segment_start(std::size_t i) const { return points_[i]; }
  Vec2 segment_end(std::size_t i) const { return points_[(i + 1) % points_.size()]; }
  double segment_start_arc(std::size_t i) const { return cumulative_[i]; }
  double segment_end_arc(std::size_t i) const { return cumulative_[i + 1]; }
  Vec2 point_at(double s) const;
  /// Unit direction of the segment containing s (the following segment at a vertex).
  Vec2 direction_at(double s) const;

  struct Projection {
    double arc = 0.0;
    double offset = 0.0;  // signed distance, positive to the left of travel
    std::size_t segment = 0;
  };
  /// Closest point on the polyline; ties go to the segment best aligned with heading_hint.
  Projection project(Vec2 p, std::optional<double> heading_hint = std::nullopt) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
  bool cyclic_ = false;
};

/// One pass of a path through an intersection, in path arc length. exit_arc may
/// exceed the path length for cyclic paths whose start lies inside the zone.
struct PathCrossing {
  IntersectionId intersection = 0;
  double stop_arc = 0.0;     // last point a vehicle without a grant may reach
  double center_arc = 0.0;
  double exit_arc = 0.0;     // vehicle body fully clear of the core zone
  Direction direction = Direction::Straight;
};

class TrafficPlan {
 public:
  std::vector<Waypoint> waypoints;
  std::vector<Lane> lanes;
  std::vector<Intersection> intersections;
  std::vector<Route> routes;
  std::vector<WaypointId> spawn_points;

  friend bool operator==(const TrafficPlan&, const TrafficPlan&) = default;

  const Waypoint& waypoint(WaypointId id) const;
  const Intersection& intersection(IntersectionId id) const;
  const Route& route(RouteRole role) const;
  bool has_route(RouteRole role) const;
  const Lane* find_lane(WaypointId from, WaypointId to) const;

  /// Closed polyline through a route's waypoints.
  Polyline route_path(RouteRole role) const;

  /// Throws PlanError(InvalidPlan) describing the first violated invariant.
  void validate() const;

  /// Closest lane centreline to p, or nullopt if p is outside every lane corridor.
  struct LaneHit {
    std::size_t lane_index = 0;
    double offset = 0.0;
  };
  std::optional<LaneHit> lane_at(Vec2 p) const;
};

/// Warehouse benchmark: 50 m x 30 m, 10 m aisle grid, central aisle at y = 10,
/// three one-way loops that leave the aisle eastbound (red, blue, yellow), four intersections
/// and ten spawn points on the left part of the central aisle.
TrafficPlan build_benchmark_plan();

Zone zone_of(const TrafficPlan& plan, IntersectionId id, Vec2 position);

struct Pose {
  Vec2 position;
  double heading = 0.0;  // degrees
};

/// Moves `distance` metres along a route's centreline from the projection of
/// `position`. Throws PlanError(OffRoute) if position is farther than half a
/// lane width from the route.
Pose advance_along(const Route& route, const TrafficPlan& plan, Vec2 position, double heading, double distance);

/// Every pass of `path` through an intersection core, ordered by stop_arc.
/// A vehicle of radius body_radius stops stop_margin short of touching the
/// core, and has released it once its body is entirely outside.
std::vector<PathCrossing> crossings_along(const Polyline& path, const TrafficPlan& plan, double body_radius,
                                          double stop_margin);

}  // namespace iav
