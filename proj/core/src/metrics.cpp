#include "iav/metrics.hpp"

#include <ostream>
#include <sstream>

namespace iav {

namespace {

struct Tracker {
  Phase phase = Phase::Cruising;
  bool stopped = false;
  std::optional<Step> request_start;
};

bool waiting_phase(Phase p) { return p == Phase::Requesting || p == Phase::Waiting; }

void add(VehicleMetrics& into, const VehicleMetrics& m) {
  into.full_stops += m.full_stops;
  into.wait_steps += m.wait_steps;
  into.goals_reached += m.goals_reached;
  into.cycles_completed += m.cycles_completed;
  for (std::size_t i = 0; i < m.sent.size(); ++i) into.sent[i] += m.sent[i];
  into.intersection_passes += m.intersection_passes;
  into.intersection_wait_total += m.intersection_wait_total;
}

}  // namespace

double VehicleMetrics::mean_intersection_wait() const {
  return intersection_passes ? static_cast<double>(intersection_wait_total) / static_cast<double>(intersection_passes)
                             : 0.0;
}

Metrics compute_metrics(const std::vector<TraceEvent>& events) {
  Metrics out;
  std::map<StationId, Tracker> track;

  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i;
    while (j < events.size() && events[j].step == events[i].step && events[j].entity == events[i].entity) ++j;
    const EntityRef who = events[i].entity;
    if (who.kind != EntityKind::Vehicle) {
      i = j;
      continue;
    }
    VehicleMetrics& m = out.vehicles[who.id];
    Tracker& tr = track[who.id];
    const ev::Moved* moved = nullptr;
    for (std::size_t k = i; k < j; ++k) {
      const TraceEvent& e = events[k];
      if (const auto* pc = std::get_if<ev::PhaseChanged>(&e.data)) {
        if (pc->to == Phase::Requesting && !is_intersection_phase(pc->from)) tr.request_start = e.step;
        if (pc->to == Phase::Crossing && tr.request_start) {
          ++m.intersection_passes;
          m.intersection_wait_total += e.step - *tr.request_start;
          tr.request_start.reset();
        }
        if (!is_intersection_phase(pc->to)) tr.request_start.reset();
        tr.phase = pc->to;
      } else if (const auto* s = std::get_if<ev::Sent>(&e.data)) {
        ++m.sent[static_cast<std::size_t>(s->id) - 1];
      } else if (const auto* c = std::get_if<ev::CollisionDetected>(&e.data)) {
        ++m.collisions;
        if (c->other.kind != EntityKind::Vehicle || who < c->other) ++out.fleet.collisions;
      } else if (std::holds_alternative<ev::GoalReached>(e.data)) {
        ++m.goals_reached;
      } else if (std::holds_alternative<ev::CycleCompleted>(e.data)) {
        ++m.cycles_completed;
      } else if (const auto* mv = std::get_if<ev::Moved>(&e.data)) {
        moved = mv;
      }
    }
    if (moved) {
      const bool still = moved->speed == 0.0;
      if (still && waiting_phase(tr.phase)) {
        ++m.wait_steps;
        tr.stopped = false;
      } else if (still) {
        if (!tr.stopped) ++m.full_stops;
        tr.stopped = true;
      } else {
        tr.stopped = false;
      }
    }
    i = j;
  }
  for (const auto& [id, m] : out.vehicles) add(out.fleet, m);
  return out;
}

void write_metrics_csv(std::ostream& os, const Metrics& m) {
  os << "vehicle,collisions,full_stops,wait_steps,goals_reached,cycles_completed,cam,denm,cpm,mcm,ack_mcm,"
        "mean_intersection_wait\n";
  auto row = [&os](const std::string& name, const VehicleMetrics& v) {
    os << name << ',' << v.collisions << ',' << v.full_stops << ',' << v.wait_steps << ',' << v.goals_reached << ','
       << v.cycles_completed;
    for (auto n : v.sent) os << ',' << n;
    os << ',' << format_double(v.mean_intersection_wait()) << '\n';
  };
  for (const auto& [id, v] : m.vehicles) row(to_string(EntityRef{EntityKind::Vehicle, id}), v);
  row("fleet", m.fleet);
}

std::string metrics_csv(const Metrics& m) {
  std::ostringstream ss;
  write_metrics_csv(ss, m);
  return ss.str();
}

}  // namespace iav
