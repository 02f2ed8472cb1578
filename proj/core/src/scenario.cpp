#include "iav/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <variant>

namespace iav {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

[[noreturn]] void syntax(std::size_t line, const std::string& what) {
  throw ScenarioError(ScenarioErrc::SyntaxError, line, what);
}

[[noreturn]] void invalid(const std::string& what) { throw ScenarioError(ScenarioErrc::InvalidScenario, 0, what); }

template <class T>
T number(std::string_view t, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) syntax(line, "bad number '" + std::string(t) + "'");
  return v;
}

double real(std::string_view t, std::size_t line) { return number<double>(t, line); }

bool boolean(std::string_view t, std::size_t line) {
  if (t == "true") return true;
  if (t == "false") return false;
  syntax(line, "expected true or false, got '" + std::string(t) + "'");
}

std::vector<std::string_view> expect_words(std::string_view v, std::size_t n, std::size_t line) {
  auto w = words(v);
  if (w.size() != n) syntax(line, "expected " + std::to_string(n) + " values");
  return w;
}

Vec2 point(std::string_view v, std::size_t line) {
  auto w = expect_words(v, 2, line);
  return {real(w[0], line), real(w[1], line)};
}

std::vector<Vec2> points(std::string_view v, std::size_t line) {
  std::vector<Vec2> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = v.find(';', start);
    const auto piece = trim(v.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (!piece.empty()) out.push_back(point(piece, line));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(Vec2 p) { return fmt(p.x) + " " + fmt(p.y); }
std::string fmt(const std::vector<Vec2>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "; " : "") + fmt(ps[i]);
  return s;
}

using ParamField = std::variant<double ProtocolParams::*, std::uint32_t ProtocolParams::*,
                                std::uint8_t ProtocolParams::*, bool ProtocolParams::*>;

const std::vector<std::pair<std::string_view, ParamField>>& protocol_fields() {
  static const std::vector<std::pair<std::string_view, ParamField>> fields{
      {"dt", &ProtocolParams::dt},
      {"cam_period", &ProtocolParams::cam_period},
      {"ack_timeout", &ProtocolParams::ack_timeout},
      {"ack_scope_factor", &ProtocolParams::ack_scope_factor},
      {"grant_delay", &ProtocolParams::grant_delay},
      {"cpm_period", &ProtocolParams::cpm_period},
      {"cpm_expiry", &ProtocolParams::cpm_expiry},
      {"peer_timeout", &ProtocolParams::peer_timeout},
      {"update_epsilon", &ProtocolParams::update_epsilon},
      {"block_timeout", &ProtocolParams::block_timeout},
      {"denm_validity", &ProtocolParams::denm_validity},
      {"denm_quality", &ProtocolParams::denm_quality},
      {"clearance", &ProtocolParams::clearance},
      {"vehicle_radius", &ProtocolParams::vehicle_radius},
      {"stop_margin", &ProtocolParams::stop_margin},
      {"lateral_rate", &ProtocolParams::lateral_rate},
      {"default_lane_width", &ProtocolParams::default_lane_width},
      {"intersection_protocol", &ProtocolParams::intersection_protocol},
      {"avoidance", &ProtocolParams::avoidance},
  };
  return fields;
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::optional<std::uint32_t> index;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') syntax(line_no, "unterminated section header");
      const auto w = words(line.substr(1, line.size() - 2));
      if (w.empty() || w.size() > 2) syntax(line_no, "bad section header");
      Section s{std::string(w[0]), std::nullopt, line_no, {}};
      if (w.size() == 2) s.index = number<std::uint32_t>(w[1], line_no);
      out.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) syntax(line_no, "expected key = value");
    if (out.empty()) syntax(line_no, "key outside of any section");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) syntax(line_no, "empty key");
    out.back().entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return out;
}

class KeyGuard {
 public:
  explicit KeyGuard(const Section& s) : section_(s) {}
  void once(const Entry& e) {
    if (!seen_.insert(e.key).second) syntax(e.line, "duplicate key '" + e.key + "'");
  }
  [[noreturn]] void unknown(const Entry& e) const {
    throw ScenarioError(ScenarioErrc::UnknownKey, e.line, "unknown key '" + e.key + "' in [" + section_.name + "]");
  }

 private:
  const Section& section_;
  std::set<std::string> seen_;
};

void parse_plan(const Section& sec, Scenario& sc) {
  KeyGuard g(sec);
  bool inline_keys = false;
  std::optional<std::size_t> builtin_line;
  TrafficPlan plan;
  for (const Entry& e : sec.entries) {
    const std::size_t ln = e.line;
    if (e.key == "builtin") {
      g.once(e);
      if (e.value != "benchmark") syntax(ln, "unknown builtin plan '" + e.value + "'");
      builtin_line = ln;
    } else if (e.key == "waypoint") {
      auto w = expect_words(e.value, 3, ln);
      plan.waypoints.push_back({number<WaypointId>(w[0], ln), {real(w[1], ln), real(w[2], ln)}});
      inline_keys = true;
    } else if (e.key == "lane") {
      auto w = words(e.value);
      if (w.size() != 2 && w.size() != 3) syntax(ln, "lane = from to [width]");
      Lane l{number<WaypointId>(w[0], ln), number<WaypointId>(w[1], ln), 2.0};
      if (w.size() == 3) l.width = real(w[2], ln);
      plan.lanes.push_back(l);
      inline_keys = true;
    } else if (e.key == "intersection") {
      auto w = expect_words(e.value, 5, ln);
      const auto id = number<unsigned>(w[0], ln);
      if (id > 255) syntax(ln, "intersection id out of range");
      plan.intersections.push_back({static_cast<IntersectionId>(id),
                                    {real(w[1], ln), real(w[2], ln)},
                                    real(w[3], ln),
                                    real(w[4], ln)});
      inline_keys = true;
    } else if (e.key == "route") {
      auto w = words(e.value);
      if (w.size() < 3) syntax(ln, "route = role wp wp ...");
      const auto role = parse_route_role(w[0]);
      if (!role) syntax(ln, "unknown route role '" + std::string(w[0]) + "'");
      Route r{*role, {}};
      for (std::size_t i = 1; i < w.size(); ++i) r.waypoint_ids.push_back(number<WaypointId>(w[i], ln));
      plan.routes.push_back(std::move(r));
      inline_keys = true;
    } else if (e.key == "spawn") {
      for (auto w : words(e.value)) plan.spawn_points.push_back(number<WaypointId>(w, ln));
      inline_keys = true;
    } else {
      g.unknown(e);
    }
  }
  if (builtin_line && inline_keys) syntax(*builtin_line, "builtin plan cannot be combined with inline keys");
  if (inline_keys) {
    sc.builtin_plan = false;
    sc.plan = std::move(plan);
  }
}

void parse_sensor(const Section& sec, Scenario& sc) {
  KeyGuard g(sec);
  for (const Entry& e : sec.entries) {
    g.once(e);
    if (e.key == "observation_distance")
      sc.sensor.observation_distance = real(e.value, e.line);
    else if (e.key == "safety_distance")
      sc.sensor.safety_distance = real(e.value, e.line);
    else if (e.key == "field_of_view")
      sc.sensor.field_of_view = real(e.value, e.line);
    else if (e.key == "longitudinal_cone")
      sc.sensor.longitudinal_cone = real(e.value, e.line);
    else
      g.unknown(e);
  }
}

void parse_protocol(const Section& sec, Scenario& sc) {
  KeyGuard g(sec);
  for (const Entry& e : sec.entries) {
    g.once(e);
    const auto& fields = protocol_fields();
    auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == e.key; });
    if (it == fields.end()) g.unknown(e);
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(sc.protocol.*member)>;
          if constexpr (std::is_same_v<T, bool>) {
            sc.protocol.*member = boolean(e.value, e.line);
          } else if constexpr (std::is_same_v<T, std::uint8_t>) {
            const auto v = number<unsigned>(e.value, e.line);
            if (v > 255) syntax(e.line, e.key + " out of range");
            sc.protocol.*member = static_cast<std::uint8_t>(v);
          } else {
            sc.protocol.*member = number<T>(e.value, e.line);
          }
        },
        it->second);
  }
}

void parse_bus(const Section& sec, Scenario& sc) {
  KeyGuard g(sec);
  for (const Entry& e : sec.entries) {
    g.once(e);
    if (e.key == "latency")
      sc.bus.latency = number<std::uint32_t>(e.value, e.line);
    else if (e.key == "loss")
      sc.bus.loss = real(e.value, e.line);
    else
      g.unknown(e);
  }
}

std::uint8_t byte_value(const Entry& e) {
  const auto v = number<unsigned>(e.value, e.line);
  if (v > 255) syntax(e.line, e.key + " must be 0..255");
  return static_cast<std::uint8_t>(v);
}

VehicleSpec parse_vehicle(const Section& sec) {
  KeyGuard g(sec);
  VehicleSpec v;
  v.station_id = *sec.index;
  bool has_spawn = false;
  for (const Entry& e : sec.entries) {
    g.once(e);
    if (e.key == "route") {
      const auto role = parse_route_role(e.value);
      if (!role) syntax(e.line, "unknown route role '" + e.value + "'");
      v.route = *role;
    } else if (e.key == "spawn") {
      v.spawn = number<std::size_t>(e.value, e.line);
      has_spawn = true;
    } else if (e.key == "start") {
      v.start = point(e.value, e.line);
    } else if (e.key == "goals") {
      v.goals = points(e.value, e.line);
    } else if (e.key == "arrival_tolerance") {
      v.arrival_tolerance = real(e.value, e.line);
    } else if (e.key == "priority") {
      v.priority = byte_value(e);
    } else if (e.key == "urgency") {
      v.urgency = byte_value(e);
    } else if (e.key == "cruise_speed") {
      v.cruise_speed = real(e.value, e.line);
    } else {
      g.unknown(e);
    }
  }
  if (has_spawn && !v.route) syntax(sec.line, "spawn requires route");
  return v;
}

ObstacleSpec parse_obstacle(const Section& sec) {
  KeyGuard g(sec);
  ObstacleSpec o;
  o.label = *sec.index;
  for (const Entry& e : sec.entries) {
    g.once(e);
    if (e.key == "step") {
      o.step = number<Step>(e.value, e.line);
    } else if (e.key == "remove_step") {
      o.remove_step = number<Step>(e.value, e.line);
    } else if (e.key == "position") {
      if (e.value == "random")
        o.position.reset();
      else
        o.position = point(e.value, e.line);
    } else if (e.key == "radius") {
      o.radius = real(e.value, e.line);
    } else if (e.key == "kind") {
      const auto k = parse_obstacle_kind(e.value);
      if (!k) syntax(e.line, "unknown obstacle kind '" + e.value + "'");
      o.kind = *k;
    } else if (e.key == "path") {
      o.path = points(e.value, e.line);
    } else if (e.key == "speed") {
      o.speed = real(e.value, e.line);
    } else {
      g.unknown(e);
    }
  }
  return o;
}

}  // namespace

ScenarioError::ScenarioError(ScenarioErrc code, std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), code_(code), line_(line) {}

const char* to_string(ScenarioErrc c) {
  switch (c) {
    case ScenarioErrc::SyntaxError: return "SyntaxError";
    case ScenarioErrc::UnknownKey: return "UnknownKey";
    case ScenarioErrc::DuplicateStationId: return "DuplicateStationId";
    case ScenarioErrc::InvalidScenario: return "InvalidScenario";
  }
  return "?";
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.builtin_plan == b.builtin_plan && a.plan == b.plan && a.sensor == b.sensor && a.protocol == b.protocol &&
         a.bus == b.bus && a.vehicles == b.vehicles && a.obstacles == b.obstacles;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  sc.plan = build_benchmark_plan();
  std::set<std::string> singletons;
  std::set<std::uint32_t> stations;
  std::set<std::uint32_t> labels;
  for (const Section& sec : split_sections(text)) {
    const bool indexed = sec.name == "vehicle" || sec.name == "obstacle";
    if (indexed != sec.index.has_value()) {
      if (sec.name != "plan" && sec.name != "sensor" && sec.name != "protocol" && sec.name != "bus" && !indexed)
        throw ScenarioError(ScenarioErrc::UnknownKey, sec.line, "unknown section [" + sec.name + "]");
      syntax(sec.line, indexed ? "[" + sec.name + " N] needs an id" : "[" + sec.name + "] takes no id");
    }
    if (!indexed && !singletons.insert(sec.name).second) syntax(sec.line, "repeated section [" + sec.name + "]");

    if (sec.name == "plan") {
      parse_plan(sec, sc);
    } else if (sec.name == "sensor") {
      parse_sensor(sec, sc);
    } else if (sec.name == "protocol") {
      parse_protocol(sec, sc);
    } else if (sec.name == "bus") {
      parse_bus(sec, sc);
    } else if (sec.name == "vehicle") {
      if (!stations.insert(*sec.index).second)
        throw ScenarioError(ScenarioErrc::DuplicateStationId, sec.line,
                            "station id " + std::to_string(*sec.index) + " used twice");
      sc.vehicles.push_back(parse_vehicle(sec));
    } else if (sec.name == "obstacle") {
      if (!labels.insert(*sec.index).second) syntax(sec.line, "repeated [obstacle " + std::to_string(*sec.index) + "]");
      sc.obstacles.push_back(parse_obstacle(sec));
    } else {
      throw ScenarioError(ScenarioErrc::UnknownKey, sec.line, "unknown section [" + sec.name + "]");
    }
  }
  std::sort(sc.vehicles.begin(), sc.vehicles.end(),
            [](const VehicleSpec& a, const VehicleSpec& b) { return a.station_id < b.station_id; });
  std::sort(sc.obstacles.begin(), sc.obstacles.end(),
            [](const ObstacleSpec& a, const ObstacleSpec& b) { return a.label < b.label; });
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ScenarioErrc::InvalidScenario, 0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "[plan]\n";
  if (s.builtin_plan) {
    o << "builtin = benchmark\n";
  } else {
    for (const auto& w : s.plan.waypoints) o << "waypoint = " << w.id << ' ' << fmt(w.pos) << '\n';
    for (const auto& l : s.plan.lanes) o << "lane = " << l.from << ' ' << l.to << ' ' << fmt(l.width) << '\n';
    for (const auto& i : s.plan.intersections)
      o << "intersection = " << unsigned{i.id} << ' ' << fmt(i.center) << ' ' << fmt(i.core_radius) << ' '
        << fmt(i.approach_radius) << '\n';
    for (const auto& r : s.plan.routes) {
      o << "route = " << to_string(r.role);
      for (auto id : r.waypoint_ids) o << ' ' << id;
      o << '\n';
    }
    if (!s.plan.spawn_points.empty()) {
      o << "spawn =";
      for (auto id : s.plan.spawn_points) o << ' ' << id;
      o << '\n';
    }
  }

  o << "\n[sensor]\n"
    << "observation_distance = " << fmt(s.sensor.observation_distance) << '\n'
    << "safety_distance = " << fmt(s.sensor.safety_distance) << '\n'
    << "field_of_view = " << fmt(s.sensor.field_of_view) << '\n'
    << "longitudinal_cone = " << fmt(s.sensor.longitudinal_cone) << '\n';

  o << "\n[protocol]\n";
  for (const auto& [name, field] : protocol_fields()) {
    o << name << " = ";
    std::visit(
        [&](auto member) {
          const auto& v = s.protocol.*member;
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>)
            o << (v ? "true" : "false");
          else if constexpr (std::is_same_v<T, double>)
            o << fmt(v);
          else
            o << static_cast<std::uint64_t>(v);
        },
        field);
    o << '\n';
  }

  o << "\n[bus]\nlatency = " << s.bus.latency << "\nloss = " << fmt(s.bus.loss) << '\n';

  for (const auto& v : s.vehicles) {
    o << "\n[vehicle " << v.station_id << "]\n";
    if (v.route) o << "route = " << to_string(*v.route) << "\nspawn = " << v.spawn << '\n';
    if (v.start) o << "start = " << fmt(*v.start) << '\n';
    if (!v.goals.empty()) o << "goals = " << fmt(v.goals) << '\n';
    o << "arrival_tolerance = " << fmt(v.arrival_tolerance) << '\n'
      << "priority = " << unsigned{v.priority} << '\n'
      << "urgency = " << unsigned{v.urgency} << '\n'
      << "cruise_speed = " << fmt(v.cruise_speed) << '\n';
  }
  for (const auto& ob : s.obstacles) {
    o << "\n[obstacle " << ob.label << "]\nstep = " << ob.step << '\n';
    if (ob.remove_step) o << "remove_step = " << *ob.remove_step << '\n';
    o << "position = " << (ob.position ? fmt(*ob.position) : std::string("random")) << '\n'
      << "radius = " << fmt(ob.radius) << '\n'
      << "kind = " << to_string(ob.kind) << '\n';
    if (!ob.path.empty()) o << "path = " << fmt(ob.path) << '\n';
    o << "speed = " << fmt(ob.speed) << '\n';
  }
  return o.str();
}

void validate_scenario(const Scenario& s) {
  try {
    s.plan.validate();
  } catch (const PlanError& e) {
    invalid(e.what());
  }
  try {
    s.sensor.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  const ProtocolParams& p = s.protocol;
  if (!(p.dt > 0.0)) invalid("protocol: dt must be positive");
  if (p.cam_period == 0 || p.ack_timeout == 0 || p.cpm_period == 0)
    invalid("protocol: periods and timeouts must be positive");
  if (!(p.vehicle_radius > 0.0) || !(p.lateral_rate > 0.0) || p.clearance < 0.0 || p.stop_margin < 0.0)
    invalid("protocol: radius and rates must be positive");
  if (!(s.bus.loss >= 0.0 && s.bus.loss <= 1.0)) invalid("bus: loss must lie in [0, 1]");

  std::set<StationId> ids;
  std::set<std::pair<int, std::size_t>> spawns_used;
  for (const VehicleSpec& v : s.vehicles) {
    const std::string who = "vehicle " + std::to_string(v.station_id);
    if (!ids.insert(v.station_id).second)
      throw ScenarioError(ScenarioErrc::DuplicateStationId, 0, "station id " + std::to_string(v.station_id) + " used twice");
    if (!(v.cruise_speed > 0.0)) invalid(who + ": cruise_speed must be positive");
    if (!(v.arrival_tolerance > 0.0)) invalid(who + ": arrival_tolerance must be positive");
    if (v.route.has_value() == v.start.has_value()) invalid(who + ": give either route or start");
    if (v.route) {
      if (!s.plan.has_route(*v.route)) invalid(who + ": plan has no " + to_string(*v.route) + " route");
      if (!v.goals.empty()) invalid(who + ": route vehicles take no goals");
      if (v.spawn >= s.plan.spawn_points.size()) invalid(who + ": spawn index out of range");
      const Vec2 at = s.plan.waypoint(s.plan.spawn_points[v.spawn]).pos;
      const Polyline path = s.plan.route_path(*v.route);
      if (std::abs(path.project(at).offset) > 1e-6) invalid(who + ": spawn point is not on its route");
      if (!spawns_used.insert({0, v.spawn}).second) invalid(who + ": spawn point already taken");
    } else {
      if (v.goals.empty()) invalid(who + ": goals required");
      Vec2 prev = *v.start;
      for (const Vec2& g : v.goals) {
        if (distance(prev, g) <= 0.0) invalid(who + ": consecutive goals coincide");
        prev = g;
      }
    }
  }
  std::set<std::uint32_t> labels;
  for (const ObstacleSpec& o : s.obstacles) {
    const std::string who = "obstacle " + std::to_string(o.label);
    if (!labels.insert(o.label).second) invalid(who + ": label used twice");
    if (!(o.radius > 0.0)) invalid(who + ": radius must be positive");
    if (o.remove_step && *o.remove_step <= o.step) invalid(who + ": remove_step must follow step");
    if (o.kind != ObstacleKind::Static) {
      if (o.path.size() < 2) invalid(who + ": moving obstacles need a path of at least two points");
      if (!(o.speed > 0.0)) invalid(who + ": speed must be positive");
    } else if (!o.path.empty()) {
      invalid(who + ": static obstacles take no path");
    }
    if (o.kind != ObstacleKind::Static && !o.position) invalid(who + ": moving obstacles need a position");
    if (o.position && !s.plan.lane_at(*o.position)) invalid(who + ": position is outside every lane");
  }
}

TaskTable task_table(const Scenario& s) {
  TaskTable t;
  for (const VehicleSpec& v : s.vehicles) t[v.station_id] = TaskRank{v.station_id, v.priority, v.urgency};
  return t;
}

Scenario benchmark_scenario() {
  Scenario sc;
  sc.plan = build_benchmark_plan();
  // Spawn points 6..9 lie on E-K, off the blue route.
  const RouteRole roles[10] = {RouteRole::Blue, RouteRole::Yellow, RouteRole::Blue,  RouteRole::Red,
                               RouteRole::Yellow, RouteRole::Blue, RouteRole::Red,  RouteRole::Yellow,
                               RouteRole::Red,  RouteRole::Yellow};
  for (std::size_t k = 0; k < 10; ++k) {
    VehicleSpec v;
    v.station_id = static_cast<StationId>(k + 1);
    v.route = roles[k];
    v.spawn = k;
    v.priority = static_cast<std::uint8_t>((k * 7) % 4);
    v.urgency = static_cast<std::uint8_t>((k * 3) % 5);
    sc.vehicles.push_back(v);
  }
  const Step inject_at[3] = {100, 3000, 8000};
  for (std::uint32_t i = 0; i < 3; ++i) {
    ObstacleSpec o;
    o.label = i + 1;
    o.step = inject_at[i];
    o.radius = 0.2;
    sc.obstacles.push_back(o);
  }
  return sc;
}

}  // namespace iav
