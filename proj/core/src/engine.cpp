#include "iav/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace iav {

namespace {

constexpr double kEps = 1e-9;

EntityRef vehicle_ref(StationId id) { return {EntityKind::Vehicle, id}; }

ObjectClass class_of(ObstacleKind k) {
  return k == ObstacleKind::Pedestrian ? ObjectClass::Pedestrian : ObjectClass::Object;
}

}  // namespace

Bus::Bus(BusConfig config, std::uint64_t seed) : config_(config), rng_(derive_seed(seed, "bus")) {}

void Bus::send(Step now, StationId sender, Bytes frame) { queue_.push_back({now, sender, std::move(frame)}); }

std::vector<Delivery> Bus::deliver(Step now, const std::vector<StationId>& receivers) {
  std::vector<Delivery> out;
  std::vector<Frame> keep;
  for (Frame& f : queue_) {
    if (f.send_step + config_.latency > now) {
      keep.push_back(std::move(f));
      continue;
    }
    Message msg;
    try {
      msg = decode(f.bytes);
    } catch (const DecodeError&) {
      ++undecodable_;
      continue;
    }
    for (StationId r : receivers) {
      if (r == f.sender) continue;
      if (config_.loss > 0.0 && uniform01(rng_) < config_.loss) continue;
      out.push_back({r, f.sender, f.send_step, msg});
    }
  }
  queue_ = std::move(keep);
  std::stable_sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) {
    return std::tuple(a.receiver, a.send_step, a.sender, message_id_of(a.message)) <
           std::tuple(b.receiver, b.send_step, b.sender, message_id_of(b.message));
  });
  return out;
}

std::vector<Contact> collision_oracle(const WorldSnapshot& world) {
  std::vector<Contact> out;
  for (std::size_t i = 0; i < world.size(); ++i)
    for (std::size_t j = i + 1; j < world.size(); ++j) {
      const Body& a = world[i];
      const Body& b = world[j];
      if (a.entity.kind != EntityKind::Vehicle && b.entity.kind != EntityKind::Vehicle) continue;
      const double d = distance(a.position, b.position);
      if (d < a.radius + b.radius) {
        if (a.entity < b.entity)
          out.push_back({a.entity, b.entity, d});
        else
          out.push_back({b.entity, a.entity, d});
      }
    }
  std::sort(out.begin(), out.end(), [](const Contact& x, const Contact& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

ProtocolParams effective_params(const Scenario& scenario) {
  ProtocolParams p = scenario.protocol;
  p.grant_delay = std::max<std::uint32_t>(p.grant_delay, 2 * (scenario.bus.latency + 1));
  return p;
}

AgentState spawn_vehicle(const VehicleSpec& spec, const Scenario& scenario, const ProtocolParams& params) {
  AgentState s;
  s.station_id = spec.station_id;
  s.cruise_speed = spec.cruise_speed;
  s.mission.task_priority = spec.priority;
  s.mission.task_urgency = spec.urgency;
  const TrafficPlan& plan = scenario.plan;

  if (spec.route) {
    auto path = std::make_shared<const Polyline>(plan.route_path(*spec.route));
    const Vec2 at = plan.waypoint(plan.spawn_points.at(spec.spawn)).pos;
    const auto proj = path->project(at);
    s.odometer = proj.arc;
    s.position = path->point_at(proj.arc);
    const Route& route = plan.route(*spec.route);
    s.mission.cyclic = true;
    for (std::size_t i = 0; i < route.waypoint_ids.size(); ++i) {
      const Vec2 p = plan.waypoint(route.waypoint_ids[i]).pos;
      s.mission.goals.push_back({p.x, p.y, spec.arrival_tolerance});
    }
    s.mission.cursor = 0;
    for (std::size_t i = 0; i < route.waypoint_ids.size(); ++i)
      if (path->segment_start_arc(i) > proj.arc + kEps) {
        s.mission.cursor = i;
        break;
      }
    s.path = std::move(path);
  } else {
    std::vector<Vec2> pts{*spec.start};
    pts.insert(pts.end(), spec.goals.begin(), spec.goals.end());
    s.path = std::make_shared<const Polyline>(std::move(pts), false);
    s.position = *spec.start;
    for (const Vec2& g : spec.goals) s.mission.goals.push_back({g.x, g.y, spec.arrival_tolerance});
  }
  s.heading = heading_of(s.path->direction_at(s.odometer));
  s.crossings = std::make_shared<const std::vector<PathCrossing>>(
      crossings_along(*s.path, plan, params.vehicle_radius, params.stop_margin));
  return s;
}

Simulation::Simulation(Scenario scenario, std::uint64_t seed, EngineOptions options)
    : scenario_(std::move(scenario)),
      params_(effective_params(scenario_)),
      tasks_(task_table(scenario_)),
      options_(std::move(options)),
      injection_rng_(derive_seed(seed, "injection")),
      order_rng_(derive_seed(options_.shuffle_order_seed.value_or(0), "order")),
      bus_(scenario_.bus, seed) {
  for (const VehicleSpec& v : scenario_.vehicles) vehicles_[v.station_id] = {spawn_vehicle(v, scenario_, params_), {}};
}

WorldSnapshot Simulation::snapshot() const {
  WorldSnapshot w;
  w.reserve(vehicles_.size() + obstacles_.size());
  for (const auto& [id, v] : vehicles_)
    w.push_back({vehicle_ref(id), ObjectClass::Iav, v.agent.position, v.velocity, v.agent.heading,
                 params_.vehicle_radius});
  for (const ObstacleState& o : obstacles_)
    w.push_back({o.entity, class_of(o.kind), o.position, o.velocity, 0.0, o.radius});
  return w;
}

Vec2 Simulation::random_lane_point() {
  const TrafficPlan& plan = scenario_.plan;
  double total = 0.0;
  for (const Lane& l : plan.lanes) total += distance(plan.waypoint(l.from).pos, plan.waypoint(l.to).pos);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double u = uniform01(injection_rng_) * total;
    Vec2 p = plan.waypoint(plan.lanes.back().to).pos;
    for (const Lane& l : plan.lanes) {
      const Vec2 a = plan.waypoint(l.from).pos;
      const Vec2 b = plan.waypoint(l.to).pos;
      const double len = distance(a, b);
      if (u < len) {
        p = a + (b - a) * (u / len);
        break;
      }
      u -= len;
    }
    const bool clear = std::all_of(vehicles_.begin(), vehicles_.end(), [&](const auto& kv) {
      return distance(kv.second.agent.position, p) > scenario_.sensor.observation_distance;
    });
    if (clear) return p;
  }
  throw std::runtime_error("no lane point clear of vehicles");
}

EntityRef Simulation::inject_obstacle(const ObstacleSpec& spec) {
  ObstacleState o;
  o.entity = {spec.kind == ObstacleKind::Pedestrian ? EntityKind::Pedestrian : EntityKind::Obstacle,
              next_obstacle_id_++};
  o.radius = spec.radius;
  o.kind = spec.kind;
  o.remove_step = spec.remove_step;
  if (spec.position && !scenario_.plan.lane_at(*spec.position))
    throw PlanError(PlanErrc::OffLane, "obstacle position is outside every lane");
  o.position = spec.position ? *spec.position : random_lane_point();
  if (spec.kind != ObstacleKind::Static) {
    o.path = std::make_shared<const Polyline>(spec.path, true);
    o.arc = o.path->project(o.position).arc;
    o.position = o.path->point_at(o.arc);
    o.speed = spec.speed;
  }
  obstacles_.push_back(o);
  scheduled_events_.push_back({now_, o.entity, ev::ObstacleInjected{o.position, o.radius, o.kind}});
  return o.entity;
}

bool Simulation::remove_obstacle(EntityRef entity) {
  auto it = std::find_if(obstacles_.begin(), obstacles_.end(), [&](const ObstacleState& o) { return o.entity == entity; });
  if (it == obstacles_.end()) return false;
  obstacles_.erase(it);
  scheduled_events_.push_back({now_, entity, ev::ObstacleRemoved{}});
  return true;
}

void Simulation::apply_motion(VehicleState& v, const Motion& m) {
  AgentState& s = v.agent;
  const Polyline& path = *s.path;
  const double budget = s.cruise_speed * params_.dt;
  double dl = std::clamp(m.lateral_offset - s.lateral_offset, -params_.lateral_rate, params_.lateral_rate);
  dl = std::clamp(dl, -budget, budget);
  const double ds_max = std::sqrt(std::max(0.0, budget * budget - dl * dl));
  double ds = std::min(std::clamp(m.speed_command, 0.0, s.cruise_speed) * params_.dt, ds_max);
  if (ds < 1e-9) ds = 0.0;
  const double lateral = s.lateral_offset + dl;
  if (std::abs(lateral) > kEps) {
    const double w = path.wrap(s.odometer);
    const double remaining = path.segment_end_arc(path.segment_at(w)) - w;
    ds = std::min(ds, std::max(0.0, remaining - 1e-6));
  }
  if (!path.cyclic()) ds = std::min(ds, std::max(0.0, path.length() - s.odometer));

  const Vec2 before = s.position;
  s.odometer += ds;
  s.lateral_offset = std::abs(lateral) > kEps ? lateral : 0.0;
  const Vec2 dir = path.direction_at(s.odometer);
  s.position = path.point_at(s.odometer) + left_normal(dir) * s.lateral_offset;
  s.heading = heading_of(dir);
  s.speed = ds / params_.dt;
  v.velocity = (s.position - before) * (1.0 / params_.dt);
}

void Simulation::emit(std::vector<TraceEvent>& step_events) {
  std::stable_sort(step_events.begin(), step_events.end(), [](const TraceEvent& a, const TraceEvent& b) {
    if (a.entity != b.entity) return a.entity < b.entity;
    return a.kind() < b.kind();
  });
  for (TraceEvent& e : step_events) {
    if (options_.sink)
      options_.sink(e);
    else
      events_.push_back(std::move(e));
  }
}

void Simulation::step() {
  const Step t = now_;
  std::vector<TraceEvent> out;

  // Scheduled injections and removals.
  for (const ObstacleSpec& spec : scenario_.obstacles)
    if (spec.step == t) inject_obstacle(spec);
  std::vector<EntityRef> expired;
  for (const ObstacleState& o : obstacles_)
    if (o.remove_step && *o.remove_step == t) expired.push_back(o.entity);
  for (EntityRef e : expired) remove_obstacle(e);
  out.insert(out.end(), std::make_move_iterator(scheduled_events_.begin()),
             std::make_move_iterator(scheduled_events_.end()));
  scheduled_events_.clear();

  // Inboxes from the previous step's deliveries.
  std::map<StationId, std::vector<Message>> inbox;
  for (Delivery& d : pending_inbox_) inbox[d.receiver].push_back(std::move(d.message));
  pending_inbox_.clear();

  // Every agent sees the same snapshot.
  const WorldSnapshot world = snapshot();
  std::vector<StationId> order;
  for (const auto& [id, v] : vehicles_) order.push_back(id);
  if (options_.shuffle_order_seed) std::shuffle(order.begin(), order.end(), order_rng_);

  const SensorConfig& sensor = scenario_.sensor;
  const AgentContext ctx{scenario_.plan, params_, sensor, tasks_};
  std::map<StationId, StepOutput> results;
  for (StationId id : order) {
    const auto seen = scan(world, id, sensor);
    const auto& msgs = inbox[id];
    results.emplace(id, step_agent(vehicles_.at(id).agent, msgs, seen, ctx, t));
  }

  std::vector<StationId> departed;
  for (auto& [id, r] : results) {
    VehicleState& v = vehicles_.at(id);
    const EntityRef me = vehicle_ref(id);
    const AgentState& before = v.agent;
    if (before.phase != r.state.phase || before.phase_intersection != r.state.phase_intersection) {
      std::optional<IntersectionId> at = r.state.phase_intersection;
      if (!at && is_intersection_phase(before.phase)) at = before.phase_intersection;
      out.push_back({t, me, ev::PhaseChanged{before.phase, r.state.phase, at}});
    }
    for (const AgentNote& n : r.notes) {
      switch (n.kind) {
        case AgentNoteKind::GoalReached: out.push_back({t, me, ev::GoalReached{n.index, n.where}}); break;
        case AgentNoteKind::CycleCompleted: out.push_back({t, me, ev::CycleCompleted{n.index}}); break;
        case AgentNoteKind::MissionDone: out.push_back({t, me, ev::MissionDone{}}); break;
      }
    }
    for (const Message& m : r.outbox) {
      Bytes frame = encode(m);
      out.push_back({t, me, ev::Sent{message_id_of(m), frame}});
      bus_.send(t, id, std::move(frame));
    }
    v.agent = std::move(r.state);
    apply_motion(v, r.motion);
    out.push_back({t, me, ev::Moved{v.agent.position, v.agent.heading, v.agent.speed}});
    if (v.agent.done) departed.push_back(id);
  }
  for (StationId id : departed) vehicles_.erase(id);

  for (ObstacleState& o : obstacles_) {
    if (o.kind == ObstacleKind::Static) continue;
    const Vec2 before = o.position;
    const double next_arc = o.path->wrap(o.arc + o.speed * params_.dt);
    const Vec2 next = o.path->point_at(next_arc);
    // walkers wait at the edge of a vehicle's lane corridor instead of stepping in front of it
    bool hold = false;
    for (const auto& [id, v] : vehicles_) {
      const double contact = o.radius + params_.vehicle_radius;
      const double reach = v.agent.speed > 0.0 ? scenario_.sensor.observation_distance : contact + 0.05;
      const Vec2 fwd = unit_from_heading(v.agent.heading);
      auto inside = [&](Vec2 p) {
        const Vec2 rel = p - v.agent.position;
        const double along = dot(rel, fwd);
        return along > -contact && along <= reach && std::abs(cross(fwd, rel)) < contact + params_.clearance;
      };
      const double d = distance(next, v.agent.position);
      if ((inside(next) && !inside(before)) || (d < contact + 0.05 && d < distance(before, v.agent.position)))
        hold = true;
    }
    if (!hold) {
      o.arc = next_arc;
      o.position = next;
    }
    o.velocity = (o.position - before) * (1.0 / params_.dt);
    out.push_back({t, o.entity, ev::Moved{o.position, heading_of(o.path->direction_at(o.arc)), hold ? 0.0 : o.speed}});
  }

  std::set<std::pair<EntityRef, EntityRef>> touching;
  for (const Contact& c : collision_oracle(snapshot())) {
    touching.insert({c.a, c.b});
    if (touching_.contains({c.a, c.b})) continue;
    ++collisions_;
    if (c.a.kind == EntityKind::Vehicle) out.push_back({t, c.a, ev::CollisionDetected{c.b, c.distance}});
    if (c.b.kind == EntityKind::Vehicle) out.push_back({t, c.b, ev::CollisionDetected{c.a, c.distance}});
  }
  touching_ = std::move(touching);

  std::vector<StationId> receivers;
  for (const auto& [id, v] : vehicles_) receivers.push_back(id);
  pending_inbox_ = bus_.deliver(t, receivers);
  for (const Delivery& d : pending_inbox_)
    out.push_back({t, vehicle_ref(d.receiver), ev::Delivered{d.sender, message_id_of(d.message), d.send_step}});

  emit(out);
  ++now_;
}

void Simulation::run(Step steps) {
  for (Step i = 0; i < steps; ++i) {
    if (vehicles_.empty() && !scenario_.vehicles.empty()) break;
    step();
  }
}

}  // namespace iav
