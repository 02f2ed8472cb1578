#include "iav/traffic_plan.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace iav {

const char* to_string(RouteRole r) {
  switch (r) {
    case RouteRole::Red: return "red";
    case RouteRole::Blue: return "blue";
    case RouteRole::Yellow: return "yellow";
  }
  return "?";
}

std::optional<RouteRole> parse_route_role(std::string_view s) {
  if (s == "red") return RouteRole::Red;
  if (s == "blue") return RouteRole::Blue;
  if (s == "yellow") return RouteRole::Yellow;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polyline

Polyline::Polyline(std::vector<Vec2> points, bool cyclic) : points_(std::move(points)), cyclic_(cyclic) {
  if (points_.size() < 2) throw PlanError(PlanErrc::InvalidPlan, "polyline needs at least two points");
  const std::size_t segs = cyclic_ ? points_.size() : points_.size() - 1;
  cumulative_.reserve(segs + 1);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < segs; ++i) {
    const double len = distance(points_[i], points_[(i + 1) % points_.size()]);
    if (len <= 0.0) throw PlanError(PlanErrc::InvalidPlan, "polyline has a zero-length segment");
    cumulative_.push_back(cumulative_.back() + len);
  }
}

double Polyline::wrap(double s) const {
  const double len = length();
  if (cyclic_) {
    double w = std::fmod(s, len);
    if (w < 0.0) w += len;
    if (w >= len) w = 0.0;
    return w;
  }
  return std::clamp(s, 0.0, len);
}

std::size_t Polyline::segment_at(double s) const {
  const double w = wrap(s);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), w);
  std::size_t idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, segment_count() - 1);
}

Vec2 Polyline::point_at(double s) const {
  const double w = wrap(s);
  const std::size_t i = segment_at(w);
  const Vec2 a = segment_start(i);
  const Vec2 b = segment_end(i);
  const double seg_len = cumulative_[i + 1] - cumulative_[i];
  const double t = (w - cumulative_[i]) / seg_len;
  return a + (b - a) * t;
}

Vec2 Polyline::direction_at(double s) const {
  const std::size_t i = segment_at(s);
  const Vec2 d = segment_end(i) - segment_start(i);
  return d * (1.0 / norm(d));
}

Polyline::Projection Polyline::project(Vec2 p, std::optional<double> heading_hint) const {
  Projection best;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_align = -2.0;
  const Vec2 hint = heading_hint ? unit_from_heading(*heading_hint) : Vec2{};
  for (std::size_t i = 0; i < segment_count(); ++i) {
    const Vec2 a = segment_start(i);
    const Vec2 b = segment_end(i);
    const Vec2 d = b - a;
    const double len = cumulative_[i + 1] - cumulative_[i];
    const Vec2 u = d * (1.0 / len);
    const double t = std::clamp(dot(p - a, u), 0.0, len);
    const Vec2 q = a + u * t;
    const double dist = distance(p, q);
    const double align = heading_hint ? dot(u, hint) : 0.0;
    constexpr double kTie = 1e-12;
    if (dist < best_dist - kTie || (dist <= best_dist + kTie && align > best_align)) {
      best_dist = dist;
      best_align = align;
      best.arc = cumulative_[i] + t;
      best.offset = cross(u, p - q) >= 0.0 ? dist : -dist;
      best.segment = i;
    }
  }
  if (cyclic_ && best.arc >= length()) best.arc = 0.0;
  return best;
}

// ---------------------------------------------------------------------------
// TrafficPlan

const Waypoint& TrafficPlan::waypoint(WaypointId id) const {
  for (const auto& w : waypoints)
    if (w.id == id) return w;
  throw PlanError(PlanErrc::UnknownWaypoint, "unknown waypoint " + std::to_string(id));
}

const Intersection& TrafficPlan::intersection(IntersectionId id) const {
  for (const auto& i : intersections)
    if (i.id == id) return i;
  throw PlanError(PlanErrc::UnknownIntersection, "unknown intersection " + std::to_string(id));
}

const Route& TrafficPlan::route(RouteRole role) const {
  for (const auto& r : routes)
    if (r.role == role) return r;
  throw PlanError(PlanErrc::UnknownRoute, std::string("unknown route ") + to_string(role));
}

bool TrafficPlan::has_route(RouteRole role) const {
  return std::any_of(routes.begin(), routes.end(), [role](const Route& r) { return r.role == role; });
}

const Lane* TrafficPlan::find_lane(WaypointId from, WaypointId to) const {
  for (const auto& l : lanes)
    if (l.from == from && l.to == to) return &l;
  return nullptr;
}

Polyline TrafficPlan::route_path(RouteRole role) const {
  const Route& r = route(role);
  std::vector<Vec2> pts;
  pts.reserve(r.waypoint_ids.size());
  for (WaypointId id : r.waypoint_ids) pts.push_back(waypoint(id).pos);
  return Polyline(std::move(pts), true);
}

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + d * t);
}

[[noreturn]] void invalid(const std::string& what) { throw PlanError(PlanErrc::InvalidPlan, what); }

}  // namespace

void TrafficPlan::validate() const {
  std::set<WaypointId> ids;
  for (const auto& w : waypoints)
    if (!ids.insert(w.id).second) invalid("duplicate waypoint id " + std::to_string(w.id));

  for (const auto& l : lanes) {
    if (!ids.count(l.from) || !ids.count(l.to))
      invalid("lane " + std::to_string(l.from) + "->" + std::to_string(l.to) + " references an unknown waypoint");
    if (!(l.width > 0.0)) invalid("lane width must be positive");
    if (l.from == l.to) invalid("lane must join two distinct waypoints");
  }

  std::set<IntersectionId> iids;
  for (const auto& in : intersections) {
    if (!iids.insert(in.id).second) invalid("duplicate intersection id " + std::to_string(in.id));
    if (!(in.core_radius > 0.0 && in.core_radius < in.approach_radius))
      invalid("intersection " + std::to_string(in.id) + " needs 0 < core_radius < approach_radius");
    int crossing = 0;
    for (const auto& l : lanes)
      if (segment_distance(in.center, waypoint(l.from).pos, waypoint(l.to).pos) <= in.core_radius) ++crossing;
    if (crossing < 2) invalid("intersection " + std::to_string(in.id) + " has fewer than two lanes through its core");
  }

  std::set<RouteRole> roles;
  std::set<WaypointId> referenced;
  for (const auto& r : routes) {
    if (!roles.insert(r.role).second) invalid(std::string("duplicate route ") + to_string(r.role));
    if (r.waypoint_ids.size() < 2) invalid(std::string("route ") + to_string(r.role) + " needs two waypoints");
    for (std::size_t i = 0; i < r.waypoint_ids.size(); ++i) {
      const WaypointId a = r.waypoint_ids[i];
      const WaypointId b = r.waypoint_ids[(i + 1) % r.waypoint_ids.size()];
      if (!find_lane(a, b))
        invalid(std::string("route ") + to_string(r.role) + " has no lane " + std::to_string(a) + "->" +
                std::to_string(b));
      referenced.insert(a);
    }
  }

  if (!referenced.empty()) {
    std::map<WaypointId, std::vector<WaypointId>> adj;
    for (const auto& l : lanes) {
      adj[l.from].push_back(l.to);
      adj[l.to].push_back(l.from);
    }
    std::set<WaypointId> seen{*referenced.begin()};
    std::queue<WaypointId> q;
    q.push(*referenced.begin());
    while (!q.empty()) {
      const WaypointId cur = q.front();
      q.pop();
      for (WaypointId n : adj[cur])
        if (seen.insert(n).second) q.push(n);
    }
    for (WaypointId w : referenced)
      if (!seen.count(w)) invalid("lane graph is disconnected at waypoint " + std::to_string(w));
  }

  for (WaypointId s : spawn_points)
    if (!ids.count(s)) invalid("spawn point references unknown waypoint " + std::to_string(s));
}

std::optional<TrafficPlan::LaneHit> TrafficPlan::lane_at(Vec2 p) const {
  std::optional<LaneHit> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const Vec2 a = waypoint(lanes[i].from).pos;
    const Vec2 b = waypoint(lanes[i].to).pos;
    const double d = segment_distance(p, a, b);
    if (d <= lanes[i].width / 2.0 && d < best_dist) {
      best_dist = d;
      best = LaneHit{i, cross(b - a, p - a) >= 0.0 ? d : -d};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

TrafficPlan build_benchmark_plan() {
  TrafficPlan p;
  enum : WaypointId { A = 0, B, C, D, E, K, F, G, L, X, M, T1, T3 };
  p.waypoints = {
      {A, {0, 0}},   {B, {30, 0}},  {C, {50, 0}},  {D, {0, 10}},   {E, {10, 10}},
      {K, {20, 10}}, {F, {30, 10}}, {G, {50, 10}}, {L, {0, 20}},   {X, {10, 20}},
      {M, {20, 20}}, {T1, {10, 30}}, {T3, {30, 30}},
  };
  constexpr double kWidth = 2.0;
  const std::pair<WaypointId, WaypointId> lanes[] = {
      {D, E}, {E, K}, {K, F}, {F, G}, {G, C}, {C, B},  {B, A},  {A, D},  {E, X},
      {X, T1}, {T1, T3}, {T3, F}, {F, B}, {K, M}, {M, X}, {X, L}, {L, D},
  };
  for (auto [from, to] : lanes) p.lanes.push_back({from, to, kWidth});

  p.intersections = {
      {0, {0, 10}, 2.0, 6.0},   // west end of the central aisle: red and blue/yellow merge
      {1, {10, 20}, 2.0, 6.0},  // red westbound crosses blue northbound
      {2, {30, 10}, 2.0, 6.0},  // yellow eastbound crosses blue southbound
      {3, {30, 0}, 2.0, 6.0},   // blue and yellow merge onto the bottom aisle
  };

  p.routes = {
      {RouteRole::Red, {D, E, K, M, X, L}},
      {RouteRole::Blue, {D, E, X, T1, T3, F, B, A}},
      {RouteRole::Yellow, {D, E, K, F, G, C, B, A}},
  };

  for (WaypointId k = 0; k < 10; ++k) {
    const WaypointId id = 100 + k;
    p.waypoints.push_back({id, {2.8 + 1.3 * static_cast<double>(k), 10.0}});
    p.spawn_points.push_back(id);
  }
  return p;
}

Zone zone_of(const TrafficPlan& plan, IntersectionId id, Vec2 position) {
  const Intersection& in = plan.intersection(id);
  const double d = distance(position, in.center);
  if (d <= in.core_radius) return Zone::Core;
  if (d <= in.approach_radius) return Zone::Approach;
  return Zone::Outside;
}

Pose advance_along(const Route& route, const TrafficPlan& plan, Vec2 position, double heading, double distance_m) {
  std::vector<Vec2> pts;
  for (WaypointId id : route.waypoint_ids) pts.push_back(plan.waypoint(id).pos);
  const Polyline path(std::move(pts), true);
  const auto proj = path.project(position, heading);
  const std::size_t n = route.waypoint_ids.size();
  const Lane* lane = plan.find_lane(route.waypoint_ids[proj.segment], route.waypoint_ids[(proj.segment + 1) % n]);
  const double half_width = lane ? lane->width / 2.0 : 0.0;
  if (std::abs(proj.offset) > half_width)
    throw PlanError(PlanErrc::OffRoute, "position is " + std::to_string(std::abs(proj.offset)) +
                                            " m from the route centreline");
  if (distance_m == 0.0) return {position, heading};
  const double s = proj.arc + distance_m;
  return {path.point_at(s), heading_of(path.direction_at(s))};
}

namespace {

struct ArcInterval {
  double lo;
  double hi;
};

std::vector<ArcInterval> disk_intervals(const Polyline& path, Vec2 center, double radius) {
  std::vector<ArcInterval> out;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Vec2 a = path.segment_start(i);
    const Vec2 b = path.segment_end(i);
    const double len = path.segment_end_arc(i) - path.segment_start_arc(i);
    const Vec2 u = (b - a) * (1.0 / len);
    const Vec2 w = a - center;
    const double half_b = dot(w, u);
    const double disc = half_b * half_b - (dot(w, w) - radius * radius);
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const double t0 = std::max(0.0, -half_b - root);
    const double t1 = std::min(len, -half_b + root);
    if (t0 > t1) continue;
    out.push_back({path.segment_start_arc(i) + t0, path.segment_start_arc(i) + t1});
  }
  std::sort(out.begin(), out.end(), [](const ArcInterval& x, const ArcInterval& y) { return x.lo < y.lo; });
  std::vector<ArcInterval> merged;
  constexpr double kEps = 1e-9;
  for (const auto& iv : out) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kEps)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  if (path.cyclic() && merged.size() >= 2 && merged.front().lo <= kEps &&
      merged.back().hi >= path.length() - kEps) {
    merged.back().hi = path.length() + merged.front().hi;
    merged.erase(merged.begin());
  }
  return merged;
}

Direction turn_direction(Vec2 in, Vec2 out) {
  const double turn = rad_to_deg(std::atan2(cross(in, out), dot(in, out)));
  if (std::abs(turn) < 30.0) return Direction::Straight;
  return turn > 0.0 ? Direction::Left : Direction::Right;
}

}  // namespace

std::vector<PathCrossing> crossings_along(const Polyline& path, const TrafficPlan& plan, double body_radius,
                                          double stop_margin) {
  std::vector<PathCrossing> out;
  for (const auto& in : plan.intersections) {
    const auto stops = disk_intervals(path, in.center, in.core_radius + body_radius + stop_margin);
    const auto releases = disk_intervals(path, in.center, in.core_radius + body_radius);
    const auto cores = disk_intervals(path, in.center, in.core_radius);
    for (const auto& s : stops) {
      constexpr double kEps = 1e-9;
      auto inside = [&](const ArcInterval& iv) { return iv.lo >= s.lo - kEps && iv.hi <= s.hi + kEps; };
      auto core = std::find_if(cores.begin(), cores.end(), inside);
      if (core == cores.end()) continue;
      double exit = s.hi;
      for (const auto& r : releases)
        if (inside(r)) exit = r.hi;
      PathCrossing c;
      c.intersection = in.id;
      c.stop_arc = s.lo;
      c.center_arc = (core->lo + core->hi) / 2.0;
      c.exit_arc = exit;
      c.direction = turn_direction(path.direction_at(s.lo), path.direction_at(exit));
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const PathCrossing& a, const PathCrossing& b) { return a.stop_arc < b.stop_arc; });
  return out;
}

}  // namespace iav
