#include "iav/agent.hpp"

#include <algorithm>
#include <cmath>

namespace iav {

namespace {

constexpr double kEps = 1e-9;
constexpr double kAssociationRadius = 1.0;
constexpr double kOncomingSpeed = 0.05;
constexpr double kStationarySpeed = 0.05;

Vec2 to_vec(const Position2& p) { return {p[0], p[1]}; }
Position2 to_pos(Vec2 v) { return {v.x, v.y}; }

template <class M>
M stamped(M m, const AgentState& s, Step now, double dt) {
  m.header.station_id = s.station_id;
  m.generation_time = generation_time(now, dt);
  m.station_type = StationType::Iav;
  m.current_position = to_pos(s.position);
  return m;
}

DenmMessage make_denm(const AgentState& s, DenmType type, AlertKey key, double dist, std::uint8_t quality,
                      const ProtocolParams& params, Step now) {
  DenmMessage d;
  d.header.station_id = s.station_id;
  d.message_type = type;
  d.station_type = StationType::Iav;
  d.management.detection_time = now;
  d.management.distance = dist;
  d.management.validity_duration = params.denm_validity;
  d.situation.cause_code = key.cause;
  d.situation.sub_cause_code = key.sub_cause;
  d.situation.information_quality = quality;
  return d;
}

struct Target {
  const PathCrossing* crossing = nullptr;
  double base = 0.0;
  double stop() const { return crossing->stop_arc + base; }
  double exit() const { return crossing->exit_arc + base; }
};

std::optional<Target> next_crossing(const AgentState& s) {
  if (!s.path || !s.crossings || s.crossings->empty()) return std::nullopt;
  std::optional<Target> best;
  auto consider = [&](const PathCrossing& c, double base) {
    if (c.exit_arc + base <= s.odometer + kEps) return;
    if (!best || c.stop_arc + base < best->stop()) best = Target{&c, base};
  };
  if (!s.path->cyclic()) {
    for (const auto& c : *s.crossings) consider(c, 0.0);
    return best;
  }
  const double len = s.path->length();
  const double k0 = std::floor(s.odometer / len) - 1.0;
  for (int k = 0; k < 3; ++k)
    for (const auto& c : *s.crossings) consider(c, (k0 + k) * len);
  return best;
}

void note_peer(AgentState& s, StationId id, Vec2 pos, Step now) {
  auto [it, fresh] = s.known_peers.try_emplace(id);
  PeerInfo& p = it->second;
  if (!fresh) {
    const Vec2 d = pos - p.position;
    if (norm(d) > 1e-6) p.heading = heading_of(d);
  }
  p.position = pos;
  p.last_seen = now;
}

void put_mark(AgentState& s, ObstacleMark m) {
  s.obstacle_map.push_back(m);
}

Vec2 project_from(Vec2 origin, std::optional<double> heading, double bearing, double dist) {
  if (!heading) return origin;
  return origin + unit_from_heading(*heading + bearing) * dist;
}

bool is_stationary(const AgentState& s, const PerceivedObject& o) {
  const double my_along = s.speed * std::cos(deg_to_rad(o.bearing));
  return std::abs(my_along - o.relative_speed) < kStationarySpeed;
}

bool is_cooperative(const AgentState& s, const PerceivedObject& o) {
  if (o.object_class != ObjectClass::Iav) return false;
  const Vec2 est = project_from(s.position, s.heading, o.bearing, o.distance);
  return std::any_of(s.known_peers.begin(), s.known_peers.end(),
                     [&](const auto& kv) { return distance(kv.second.position, est) <= kAssociationRadius; });
}

double segment_remaining(const AgentState& s) {
  if (!s.path || s.path->segment_count() == 0) return 0.0;
  const double w = s.path->wrap(s.odometer);
  return s.path->segment_end_arc(s.path->segment_at(w)) - w;
}

/// Arc distance ahead on the own path at which `p` comes within `half_width` of the centreline.
std::optional<double> ahead_on_path(const AgentState& s, Vec2 p, double horizon, double half_width) {
  if (!s.path) return std::nullopt;
  constexpr double kSample = 0.1;
  for (double d = 0.0; d <= horizon + kEps; d += kSample) {
    double at = s.odometer + d;
    if (!s.path->cyclic() && at > s.path->length()) break;
    if (distance(s.path->point_at(at), p) < half_width) return d;
  }
  return std::nullopt;
}

double ramp_length(double lateral, const ProtocolParams& params, double cruise) {
  const double steps = std::ceil(std::abs(lateral) / params.lateral_rate - kEps);
  return steps * cruise * params.dt;
}

}  // namespace

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Cruising: return "CRUISING";
    case Phase::Following: return "FOLLOWING";
    case Phase::Requesting: return "REQUESTING";
    case Phase::Waiting: return "WAITING";
    case Phase::Crossing: return "CROSSING";
    case Phase::Avoiding: return "AVOIDING";
    case Phase::Blocked: return "BLOCKED";
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Phase::Blocked); ++i) {
    const auto p = static_cast<Phase>(i);
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

bool outranks(const TaskRank& a, const TaskRank& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.urgency != b.urgency) return a.urgency > b.urgency;
  return a.station < b.station;
}

StationId resolve_conflict(std::span<const TaskRank> requests) {
  if (requests.empty()) throw std::invalid_argument("resolve_conflict: no requests");
  const TaskRank* best = &requests.front();
  for (const TaskRank& r : requests)
    if (outranks(r, *best)) best = &r;
  return best->station;
}

TaskRank rank_of(const TaskTable& tasks, StationId station) {
  auto it = tasks.find(station);
  if (it == tasks.end()) return TaskRank{station, 0, 0};
  TaskRank r = it->second;
  r.station = station;
  return r;
}

std::uint16_t generation_time(Step now, double dt) {
  const auto ms_per_step = static_cast<std::uint64_t>(std::llround(dt * 1000.0));
  return static_cast<std::uint16_t>((now * ms_per_step) % 65536u);
}

NextGoal next_goal(const Mission& mission, Vec2 position) {
  if (mission.goals.empty() || mission.exhausted()) return MissionDone{};
  Mission m = mission;
  const std::size_t limit = m.goals.size();
  for (std::size_t i = 0; i < limit && !m.exhausted(); ++i) {
    const PositionGoal& g = m.head();
    if (distance(position, Vec2{g.x, g.y}) > g.arrival_tolerance) return GoalHead{g};
    ++m.cursor;
  }
  if (m.exhausted()) return MissionDone{};
  return GoalHead{m.head()};
}

AckMcmMessage answer_mcm(const AgentState& state, const McmMessage& mcm, const AgentContext& ctx, Step now) {
  const IntersectionId id = mcm.maneuver.id_intersection;
  ctx.plan.intersection(id);

  bool response = true;
  const bool on_it = state.phase_intersection == id;
  if (on_it && state.phase == Phase::Crossing) {
    response = false;
  } else if (on_it && ((state.phase == Phase::Requesting && state.request_sent) || state.phase == Phase::Waiting)) {
    const TaskRank mine{state.station_id, state.mission.task_priority, state.mission.task_urgency};
    const TaskRank theirs = rank_of(ctx.tasks, mcm.header.station_id);
    const std::array<TaskRank, 2> both{mine, theirs};
    response = resolve_conflict(both) != state.station_id;
  }

  AckMcmMessage ack = stamped(AckMcmMessage{}, state, now, ctx.params.dt);
  ack.station_type_destinator = mcm.station_type;
  ack.station_id_destinator = mcm.header.station_id;
  ack.maneuver = mcm.maneuver;
  ack.ack_mcm_response = response;
  return ack;
}

AvoidanceDecision avoidance_maneuver(const AgentState& state, const PerceivedObject& obstacle, double lane_width,
                                     const ProtocolParams& params, std::span<const PerceivedObject> scan_result) {
  const double vr = params.vehicle_radius;
  const double e_obs = state.lateral_offset + obstacle.lateral();
  const double need = obstacle.radius + params.clearance;
  std::array<double, 2> candidates{e_obs + need, e_obs - need};
  if (std::abs(candidates[1]) < std::abs(candidates[0]) - kEps) std::swap(candidates[0], candidates[1]);

  const double half = lane_width / 2.0;
  for (double offset : candidates) {
    if (std::abs(offset) > half + kEps) continue;
    const double ramp = ramp_length(offset, params, state.cruise_speed);
    const double pass_end = obstacle.along() + need + vr;
    if (state.path && pass_end + ramp > segment_remaining(state) + kEps) continue;

    bool free = true;
    for (const PerceivedObject& o : scan_result) {
      if (o.source_entity_id == obstacle.source_entity_id) continue;
      const double along = o.along();
      if (along <= -(vr + o.radius) || along >= pass_end + ramp) continue;
      const double e_o = state.lateral_offset + o.lateral();
      if (std::abs(e_o - offset) < vr + o.radius + params.clearance) {
        free = false;
        break;
      }
    }
    if (free) return Offset{offset};
  }
  return Stop{};
}

std::vector<DenmMessage> denm_lifecycle(AgentState& state, const ProtocolParams& params, Step now) {
  std::vector<DenmMessage> out;
  for (auto it = state.active_alerts.begin(); it != state.active_alerts.end();) {
    ActiveAlert& a = it->second;
    if (!a.current_distance) {
      out.push_back(make_denm(state, DenmType::Terminate, it->first, a.emitted_distance, a.quality, params, now));
      it = state.active_alerts.erase(it);
      continue;
    }
    if (std::abs(*a.current_distance - a.emitted_distance) > params.update_epsilon) {
      a.emitted_distance = *a.current_distance;
      out.push_back(make_denm(state, DenmType::Update, it->first, a.emitted_distance, a.quality, params, now));
    }
    ++it;
  }
  return out;
}

StepOutput step_agent(const AgentState& in, std::span<const Message> inbox,
                      std::span<const PerceivedObject> scan_result, const AgentContext& ctx, Step now) {
  const ProtocolParams& P = ctx.params;
  const SensorConfig& sensor = ctx.sensor;
  StepOutput out;
  out.state = in;
  AgentState& s = out.state;
  if (s.done) return out;

  std::vector<Message> cpms, denms, mcms, acks;

  // Ingest.
  std::erase_if(s.known_peers, [&](const auto& kv) { return now > kv.second.last_seen + P.peer_timeout; });
  std::erase_if(s.obstacle_map, [&](const ObstacleMark& m) { return m.expiry <= now; });

  std::vector<const McmMessage*> requests;
  for (const Message& msg : inbox) {
    const StationId from = sender_of(msg);
    if (from == s.station_id) {
      ++s.malformed_dropped;
      continue;
    }
    if (const auto* cam = std::get_if<CamMessage>(&msg)) {
      note_peer(s, from, to_vec(cam->current_position), now);
    } else if (const auto* cpm = std::get_if<CpmMessage>(&msg)) {
      note_peer(s, from, to_vec(cpm->current_position), now);
      const auto heading = s.known_peers[from].heading;
      std::erase_if(s.obstacle_map, [&](const ObstacleMark& m) { return m.source == from && m.source_key == 0; });
      for (const auto& rec : cpm->perceived_objects) {
        ObstacleMark m;
        m.position = project_from(to_vec(cpm->current_position), heading, rec.yaw_angle, rec.distance);
        m.object_class = rec.object_id == ObjectClassCode::Pedestrian ? ObjectClass::Pedestrian
                         : rec.object_id == ObjectClassCode::Iav      ? ObjectClass::Iav
                                                                       : ObjectClass::Object;
        m.expiry = now + P.cpm_expiry;
        m.source = from;
        put_mark(s, m);
      }
    } else if (const auto* denm = std::get_if<DenmMessage>(&msg)) {
      const auto key = static_cast<std::uint16_t>(static_cast<unsigned>(denm->situation.cause_code) << 8 |
                                                  denm->situation.sub_cause_code);
      std::erase_if(s.obstacle_map, [&](const ObstacleMark& m) { return m.source == from && m.source_key == key; });
      if (denm->message_type == DenmType::Terminate) continue;
      auto peer = s.known_peers.find(from);
      if (peer == s.known_peers.end()) continue;
      ObstacleMark m;
      m.position = project_from(peer->second.position, peer->second.heading, 0.0, denm->management.distance);
      m.expiry = now + static_cast<Step>(std::llround(denm->management.validity_duration / P.dt));
      m.source = from;
      m.source_key = key;
      put_mark(s, m);
    } else if (const auto* mcm = std::get_if<McmMessage>(&msg)) {
      note_peer(s, from, to_vec(mcm->current_position), now);
      bool known = std::any_of(ctx.plan.intersections.begin(), ctx.plan.intersections.end(),
                               [&](const Intersection& i) { return i.id == mcm->maneuver.id_intersection; });
      if (!known) {
        ++s.malformed_dropped;
        continue;
      }
      requests.push_back(mcm);
    } else if (const auto* ack = std::get_if<AckMcmMessage>(&msg)) {
      note_peer(s, from, to_vec(ack->current_position), now);
      if (ack->station_id_destinator != s.station_id) continue;
      if (s.phase != Phase::Requesting || !s.request_sent) continue;
      if (ack->maneuver.id_intersection != s.phase_intersection) continue;
      s.pending_acks.erase(from);
      if (!ack->ack_mcm_response) s.denied = true;
    }
  }

  if (s.phase == Phase::Requesting && s.request_sent) {
    if (s.denied) {
      s.request_sent = false;
      s.pending_acks.clear();
    } else if (s.pending_acks.empty() && s.last_request_step && now >= *s.last_request_step + P.grant_delay) {
      s.phase = Phase::Crossing;
      s.request_sent = false;
    }
  }

  for (const McmMessage* mcm : requests) {
    const AckMcmMessage ack = answer_mcm(s, *mcm, ctx, now);
    acks.emplace_back(ack);
    const bool competing = s.phase_intersection == mcm->maneuver.id_intersection &&
                           ((s.phase == Phase::Requesting && s.request_sent) || s.phase == Phase::Waiting);
    if (competing && ack.ack_mcm_response) {
      s.request_sent = false;
      s.denied = true;
      s.pending_acks.clear();
    }
  }

  // Perception.
  std::map<AlertKey, double> alert_now;
  const PerceivedObject* blocker = nullptr;
  bool cpm_due = false;
  std::vector<const PerceivedObject*> reportable;
  double follow_cap = s.cruise_speed;
  bool following = false;
  bool lead = true;

  if (s.avoiding) {
    auto it = std::find_if(scan_result.begin(), scan_result.end(),
                           [&](const PerceivedObject& o) { return o.source_entity_id == *s.avoiding; });
    if (it == scan_result.end() || it->along() < -(it->radius + P.vehicle_radius + P.clearance)) {
      s.avoiding.reset();
      s.avoid_target = 0.0;
    }
  }

  for (const PerceivedObject& o : scan_result) {
    const Risk risk = classify_risk(o, sensor);
    if (risk.level == RiskLevel::None) continue;
    const bool ahead = std::abs(o.bearing) < sensor.longitudinal_cone;

    if (!is_cooperative(s, o)) {
      reportable.push_back(&o);
      if (risk.level == RiskLevel::Observe) {
        auto last = s.cpm_last_sent.find(o.source_entity_id);
        if (last == s.cpm_last_sent.end() || now >= last->second + P.cpm_period) cpm_due = true;
      }
    }

    if (risk.level == RiskLevel::Alert) {
      const AlertKey key{CauseCode::CollisionRisk, static_cast<std::uint8_t>(risk.sub_cause)};
      auto [it, fresh] = alert_now.try_emplace(key, o.distance);
      if (!fresh) it->second = std::min(it->second, o.distance);

      const bool walker = o.object_class == ObjectClass::Pedestrian;
      const bool in_corridor = o.along() > 0.0 && std::abs(o.lateral()) < o.radius + P.vehicle_radius + P.clearance;
      const bool cleared = s.avoiding == o.source_entity_id &&
                           std::abs(o.lateral()) >= o.radius + P.vehicle_radius - kEps;
      if ((walker ? in_corridor : ahead) && !cleared && !blocker) blocker = &o;
    }

    const Vec2 seen_at = project_from(s.position, s.heading, o.bearing, o.distance);
    const bool in_path = s.path ? ahead_on_path(s, seen_at, sensor.observation_distance,
                                                o.radius + P.vehicle_radius + P.clearance)
                                      .has_value()
                                : ahead && o.along() > 0.0;
    if (o.object_class == ObjectClass::Iav && in_path && o.along() > 0.0) {
      lead = false;
      const double other_along = s.speed * std::cos(deg_to_rad(o.bearing)) - o.relative_speed;
      if (other_along >= -kOncomingSpeed) {
        follow_cap = std::min(follow_cap, other_along > 1e-6 ? other_along : 0.0);
        following = true;
      }
    }
  }

  if (cpm_due) {
    CpmMessage cpm = stamped(CpmMessage{}, s, now, P.dt);
    cpm.sensor_information = {SensorType::Lidar, SensorConfidence::High};
    for (const PerceivedObject* o : reportable) {
      if (cpm.perceived_objects.size() >= kMaxPerceivedObjects) break;
      cpm.perceived_objects.push_back({to_wire(o->object_class), o->distance, 0.0, o->bearing});
      s.cpm_last_sent[o->source_entity_id] = now;
    }
    cpms.emplace_back(std::move(cpm));
  }
  for (const PerceivedObject* o : reportable) {
    ObstacleMark m;
    m.position = project_from(s.position, s.heading, o->bearing, o->distance);
    m.object_class = o->object_class;
    m.expiry = now + 1;
    m.source = s.station_id;
    m.remote = false;
    put_mark(s, m);
  }

  // Avoidance.
  if (P.avoidance && !s.avoiding) {
    for (const PerceivedObject& o : scan_result) {
      if (o.object_class != ObjectClass::Object || o.along() <= 0.0) continue;
      if (std::abs(o.bearing) >= sensor.longitudinal_cone) continue;
      if (std::abs(o.lateral()) >= o.radius + P.vehicle_radius + P.clearance) continue;
      if (!is_stationary(s, o)) continue;
      double lane_width = P.default_lane_width;
      if (s.path) {
        const Vec2 centre = s.path->point_at(s.odometer);
        if (auto hit = ctx.plan.lane_at(centre)) lane_width = ctx.plan.lanes[hit->lane_index].width;
      }
      const AvoidanceDecision d = avoidance_maneuver(s, o, lane_width, P, scan_result);
      if (const auto* off = std::get_if<Offset>(&d)) {
        s.avoiding = o.source_entity_id;
        s.avoid_target = off->lateral_offset;
      }
      break;
    }
  }
  double lateral_target = s.avoiding ? s.avoid_target : 0.0;
  if (s.path && std::abs(s.lateral_offset) > kEps &&
      segment_remaining(s) <= ramp_length(s.lateral_offset, P, s.cruise_speed) + s.cruise_speed * P.dt) {
    lateral_target = 0.0;
  }

  // Speed.
  double v = s.cruise_speed;
  for (const ObstacleMark& m : s.obstacle_map)
    if (m.remote && distance(m.position, s.position) <= sensor.observation_distance) {
      v = s.cruise_speed / 2.0;
      break;
    }
  v = std::min(v, follow_cap);
  if (blocker) v = 0.0;

  const bool obstacle_stop = blocker && blocker->object_class == ObjectClass::Object;
  s.stopped_steps = obstacle_stop ? s.stopped_steps + 1 : 0;
  const bool blocked = s.stopped_steps >= P.block_timeout;
  if (blocked) alert_now[AlertKey{CauseCode::TrafficCondition, 0}] = blocker->distance;

  // Intersection handshake.
  if (P.intersection_protocol) {
    if (s.phase == Phase::Crossing && s.odometer + kEps >= s.crossing_exit) {
      s.phase = Phase::Cruising;
      s.phase_intersection.reset();
    }
    const auto target = next_crossing(s);
    if (target) {
      const IntersectionId id = target->crossing->intersection;
      const bool engaged = is_intersection_phase(s.phase) && s.phase_intersection == id &&
                           std::abs(target->exit() - s.crossing_exit) < 1e-6;
      if (!engaged && (zone_of(ctx.plan, id, s.position) != Zone::Outside || s.odometer + kEps >= target->stop())) {
        s.phase = Phase::Requesting;
        s.phase_intersection = id;
        s.request_sent = false;
        s.denied = false;
        s.pending_acks.clear();
        s.last_request_step.reset();
        s.crossing_exit = target->exit();
        s.requested_direction = target->crossing->direction;
      }
      if (s.phase == Phase::Requesting || s.phase == Phase::Waiting) {
        const double horizon = target->exit() - s.odometer;
        const double corridor = 2.0 * P.vehicle_radius + P.clearance;
        for (const auto& [peer, info] : s.known_peers)
          if (lead && ahead_on_path(s, info.position, horizon, corridor).value_or(0.0) > 0.0) lead = false;
        const bool due = !s.last_request_step || now >= *s.last_request_step + P.ack_timeout;
        const bool resend = s.request_sent && !s.pending_acks.empty() && due;
        if ((!s.request_sent && lead && due) || resend) {
          const Intersection& inter = ctx.plan.intersection(id);
          s.pending_acks.clear();
          for (const auto& [peer, info] : s.known_peers)
            if (distance(info.position, inter.center) <= P.ack_scope_factor * inter.approach_radius)
              s.pending_acks.insert(peer);
          s.request_sent = true;
          s.denied = false;
          s.last_request_step = now;
          s.phase = Phase::Requesting;
          McmMessage mcm = stamped(McmMessage{}, s, now, P.dt);
          mcm.maneuver = {id, s.requested_direction};
          mcms.emplace_back(mcm);
        }
        const double to_stop = target->stop() - s.odometer;
        v = std::min(v, std::max(0.0, to_stop / P.dt));
        if (!s.request_sent && to_stop <= kEps) s.phase = Phase::Waiting;
        if (s.request_sent) s.phase = Phase::Requesting;
      }
    }
  }

  if (s.path && !s.path->cyclic()) v = std::min(v, std::max(0.0, (s.path->length() - s.odometer) / P.dt));

  // Mission progress.
  const std::size_t n = s.mission.goals.size();
  for (std::size_t i = 0; i < std::max<std::size_t>(n, 1) && n > 0 && !s.mission.exhausted(); ++i) {
    const PositionGoal g = s.mission.head();
    if (distance(s.position, Vec2{g.x, g.y}) > g.arrival_tolerance) break;
    const std::size_t index = s.mission.cyclic ? s.mission.cursor % n : s.mission.cursor;
    out.notes.push_back({AgentNoteKind::GoalReached, index, s.position});
    ++s.mission.cursor;
    if (s.mission.cyclic) {
      if (index == 0) {
        ++s.cycles_completed;
        out.notes.push_back({AgentNoteKind::CycleCompleted, s.cycles_completed, s.position});
      }
      break;
    }
  }
  if (n > 0 && s.mission.exhausted()) {
    s.done = true;
    out.notes.push_back({AgentNoteKind::MissionDone, n, s.position});
    alert_now.clear();
    v = 0.0;
    lateral_target = s.lateral_offset;
  }

  // DENM lifecycle.
  for (auto& [key, alert] : s.active_alerts) {
    auto it = alert_now.find(key);
    alert.current_distance = it == alert_now.end() ? std::nullopt : std::optional<double>(it->second);
  }
  for (DenmMessage& d : denm_lifecycle(s, P, now)) denms.emplace_back(d);
  for (const auto& [key, dist] : alert_now) {
    if (s.active_alerts.contains(key)) continue;
    const std::uint8_t quality = key.cause == CauseCode::TrafficCondition ? kQualityHighest : P.denm_quality;
    s.active_alerts[key] = ActiveAlert{dist, dist, quality};
    denms.emplace_back(make_denm(s, DenmType::Trigger, key, dist, quality, P, now));
  }

  // Phase.
  if (!is_intersection_phase(s.phase)) {
    s.phase_intersection.reset();
    if (blocked)
      s.phase = Phase::Blocked;
    else if (s.avoiding || std::abs(s.lateral_offset) > kEps)
      s.phase = Phase::Avoiding;
    else if (following && follow_cap < s.cruise_speed)
      s.phase = Phase::Following;
    else
      s.phase = Phase::Cruising;
  }
  if (s.phase == Phase::Waiting || s.phase == Phase::Blocked) v = 0.0;

  if (now % P.cam_period == 0) out.outbox.emplace_back(stamped(CamMessage{}, s, now, P.dt));
  for (auto* group : {&cpms, &denms, &mcms, &acks})
    for (Message& m : *group) out.outbox.push_back(std::move(m));

  out.motion = {v, lateral_target};
  return out;
}

}  // namespace iav
