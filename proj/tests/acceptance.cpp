// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "iav/engine.hpp"
#include "iav/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/golden_messages.hpp"
#include "support/message_gen.hpp"

using namespace iav;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string trace_text(const std::vector<TraceEvent>& events) {
  std::ostringstream os;
  write_trace(os, events);
  return os.str();
}

std::vector<std::pair<TraceEvent, DenmMessage>> sent_denms(const std::vector<TraceEvent>& events) {
  std::vector<std::pair<TraceEvent, DenmMessage>> out;
  for (const auto& e : events)
    if (const auto* s = std::get_if<ev::Sent>(&e.data); s && s->id == MessageId::Denm)
      out.emplace_back(e, std::get<DenmMessage>(decode(s->frame)));
  return out;
}

// DENM lifecycle per (station, cause, sub-cause): TERMINATE/UPDATE only while open, TRIGGER only while closed.
struct DenmAudit {
  std::size_t triggers = 0;
  std::size_t open_at_end = 0;
  std::string violation;
};

DenmAudit audit_denms(const std::vector<TraceEvent>& events) {
  DenmAudit a;
  std::map<std::tuple<StationId, int, int>, bool> open;
  for (const auto& [e, d] : sent_denms(events)) {
    const auto key = std::tuple(d.header.station_id, int(d.situation.cause_code), int(d.situation.sub_cause_code));
    bool& is_open = open[key];
    if (d.message_type == DenmType::Trigger) {
      ++a.triggers;
      if (is_open && a.violation.empty()) a.violation = "TRIGGER while open at step " + std::to_string(e.step);
      is_open = true;
    } else {
      if (!is_open && a.violation.empty())
        a.violation = std::string(d.message_type == DenmType::Terminate ? "TERMINATE" : "UPDATE") +
                      " without TRIGGER at step " + std::to_string(e.step);
      if (d.message_type == DenmType::Terminate) is_open = false;
    }
  }
  for (const auto& [k, o] : open) a.open_at_end += o;
  return a;
}

// Every trace produced during the run is audited for DENM pairing at the end.
std::vector<std::string> g_corpus_failures;
std::size_t g_corpus_traces = 0;

void add_to_corpus(const std::string& name, const std::vector<TraceEvent>& events) {
  ++g_corpus_traces;
  const DenmAudit a = audit_denms(events);
  if (!a.violation.empty()) g_corpus_failures.push_back(name + ": " + a.violation);
}

// 1. Benchmark safety and speed.
Verdict benchmark_safety() {
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    Simulation sim(benchmark_scenario(), seed);
    sim.run(20000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst = std::max(worst, secs);
    if (sim.collisions() != 0) v.fail("seed " + std::to_string(seed) + ": " + std::to_string(sim.collisions()) + " collisions");
    if (secs >= 10.0) v.fail("seed " + std::to_string(seed) + " took " + std::to_string(secs) + " s");
    std::size_t injected = 0;
    for (const auto& e : sim.events()) injected += e.kind() == EventKind::ObstacleInjected;
    if (injected != 3) v.fail("seed " + std::to_string(seed) + ": " + std::to_string(injected) + " obstacles injected");
    add_to_corpus("benchmark seed " + std::to_string(seed), sim.events());
  }
  if (v.pass) v.detail = "5 seeds x 20000 steps, 0 collisions, slowest run " + std::to_string(worst).substr(0, 4) + " s";
  return v;
}

// 2. Four-vehicle intersection message pattern.
Verdict four_robot_pattern() {
  Verdict v;
  Simulation sim(load_scenario(test::scenario_path("four_robots.scn")), 1);
  sim.run(3000);
  add_to_corpus("four_robots", sim.events());
  if (sim.collisions()) v.fail(std::to_string(sim.collisions()) + " collisions");

  struct Seen {
    std::optional<Step> first_cpm;
    std::optional<Step> first_longitudinal_denm;
    std::optional<Step> first_denm;
    bool stopped_after_denm = false;
  };
  std::map<StationId, Seen> seen;
  for (const auto& e : sim.events()) {
    if (e.entity.kind != EntityKind::Vehicle) continue;
    Seen& s = seen[e.entity.id];
    if (const auto* snt = std::get_if<ev::Sent>(&e.data)) {
      if (snt->id == MessageId::Cpm && !s.first_cpm) s.first_cpm = e.step;
      if (snt->id == MessageId::Denm) {
        const auto d = std::get<DenmMessage>(decode(snt->frame));
        if (d.message_type != DenmType::Trigger) continue;
        if (!s.first_denm) s.first_denm = e.step;
        if (d.situation.cause_code == CauseCode::CollisionRisk && d.situation.sub_cause_code == 1 &&
            !s.first_longitudinal_denm)
          s.first_longitudinal_denm = e.step;
      }
    } else if (const auto* m = std::get_if<ev::Moved>(&e.data)) {
      if (s.first_denm && e.step >= *s.first_denm && m->speed == 0.0) s.stopped_after_denm = true;
    }
  }
  const Seen& r2 = seen[2];
  if (!r2.first_cpm || !r2.first_longitudinal_denm || *r2.first_cpm >= *r2.first_longitudinal_denm)
    v.fail("robot2 did not send a CPM before its longitudinal DENM");
  for (StationId id : {3u, 4u}) {
    const Seen& r = seen[id];
    if (!r.first_denm) v.fail("robot" + std::to_string(id) + " sent no DENM");
    else if (r.first_cpm && *r.first_cpm < *r.first_denm) v.fail("robot" + std::to_string(id) + " sent a CPM before its DENM");
    if (!r.stopped_after_denm) v.fail("robot" + std::to_string(id) + " did not stop");
  }
  if (v.pass)
    v.detail = "robot2 CPM@" + std::to_string(*r2.first_cpm) + " DENM@" + std::to_string(*r2.first_longitudinal_denm) +
               ", robot3 DENM@" + std::to_string(*seen[3].first_denm) + ", robot4 DENM@" +
               std::to_string(*seen[4].first_denm) + ", no CPM before them, 0 collisions";
  return v;
}

Scenario two_vehicle_crossing(double angle_deg, StationId a, StationId b, TaskRank ra, TaskRank rb) {
  Scenario s;
  s.builtin_plan = false;
  const double r = 10.0;
  const Vec2 dir_b = unit_from_heading(angle_deg);
  s.plan.waypoints = {{1, {-r, 0}}, {2, {r, 0}}, {3, dir_b * -r}, {4, dir_b * r}, {5, {0, 0}}};
  s.plan.lanes = {{1, 5, 2.0}, {5, 2, 2.0}, {3, 5, 2.0}, {5, 4, 2.0}};
  s.plan.intersections = {{0, {0, 0}, 2.0, 6.0}};
  VehicleSpec va, vb;
  va.station_id = a;
  va.start = Vec2{-8, 0};
  va.goals = {{8, 0}};
  va.priority = ra.priority;
  va.urgency = ra.urgency;
  vb.station_id = b;
  vb.start = dir_b * -8.0;
  vb.goals = {dir_b * 8.0};
  vb.priority = rb.priority;
  vb.urgency = rb.urgency;
  s.vehicles = {va, vb};
  return s;
}

// 3. Mutual exclusion with simultaneous arrival.
Verdict mutual_exclusion() {
  Verdict v;
  std::mt19937_64 rng(derive_seed(3, "acceptance.mutex"));
  int agreed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const StationId a = 1 + static_cast<StationId>(rng() % 1000);
    StationId b = a;
    while (b == a) b = 1 + static_cast<StationId>(rng() % 1000);
    const TaskRank ra{a, static_cast<std::uint8_t>(rng() % 4), static_cast<std::uint8_t>(rng() % 4)};
    const TaskRank rb{b, static_cast<std::uint8_t>(rng() % 4), static_cast<std::uint8_t>(rng() % 4)};
    const double angle = 45.0 + static_cast<double>(rng() % 91);
    const Scenario sc = two_vehicle_crossing(angle, a, b, ra, rb);
    validate_scenario(sc);
    Simulation sim(sc, trial);

    std::set<StationId> crossed;
    std::optional<StationId> first;
    std::string tag = "trial " + std::to_string(trial) + ": ";
    for (Step t = 0; t < 2000 && !sim.vehicles().empty(); ++t) {
      sim.step();
      int crossing = 0;
      for (const auto& [id, vs] : sim.vehicles())
        if (vs.agent.phase == Phase::Crossing) {
          ++crossing;
          crossed.insert(id);
          if (!first) first = id;
        }
      if (crossing > 1) v.fail(tag + "two vehicles crossing at step " + std::to_string(sim.now()));
    }
    add_to_corpus("mutex " + tag, sim.events());
    // despawned vehicles that crossed appear in the trace
    for (const auto& e : sim.events())
      if (const auto* p = std::get_if<ev::PhaseChanged>(&e.data); p && p->to == Phase::Crossing) {
        crossed.insert(e.entity.id);
        if (!first) first = e.entity.id;
      }
    const TaskRank expected = std::min({ra, rb}, [](const TaskRank& x, const TaskRank& y) {
      return std::tuple(-int(x.priority), -int(x.urgency), x.station) <
             std::tuple(-int(y.priority), -int(y.urgency), y.station);
    });
    if (crossed.size() != 2) v.fail(tag + "only " + std::to_string(crossed.size()) + " vehicle(s) crossed in 2000 steps");
    if (!sim.vehicles().empty()) v.fail(tag + "missions not finished within 2000 steps");
    if (!first || *first != expected.station)
      v.fail(tag + "winner " + (first ? std::to_string(*first) : "none") + ", comparator says " +
             std::to_string(expected.station));
    else
      ++agreed;
    if (sim.collisions()) v.fail(tag + "collision");
  }
  if (v.pass) v.detail = "100 trials, winner matched comparator in " + std::to_string(agreed) + ", both crossed every time";
  return v;
}

// 4. Tie-break determinism.
Verdict conflict_determinism() {
  Verdict v;
  std::mt19937_64 rng(derive_seed(4, "acceptance.conflict"));
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<TaskRank> rs;
    std::set<StationId> ids;
    while (rs.size() < n) {
      const StationId id = static_cast<StationId>(rng() % 64);
      if (!ids.insert(id).second) continue;
      rs.push_back({id, static_cast<std::uint8_t>(rng() % 3), static_cast<std::uint8_t>(rng() % 3)});
    }
    const StationId w = resolve_conflict(rs);
    if (!ids.count(w)) v.fail("winner outside the request set");
    const TaskRank brute = *std::min_element(rs.begin(), rs.end(), [](const TaskRank& x, const TaskRank& y) {
      return std::tuple(-int(x.priority), -int(x.urgency), x.station) <
             std::tuple(-int(y.priority), -int(y.urgency), y.station);
    });
    if (brute.station != w) v.fail("disagrees with the brute-force comparator");
    // every participant evaluates its own arrival order
    for (std::size_t agent = 0; agent < n; ++agent) {
      std::vector<TaskRank> local = rs;
      std::shuffle(local.begin(), local.end(), rng);
      if (resolve_conflict(local) != w) v.fail("agents disagree on a permuted request set");
    }
  }
  if (v.pass) v.detail = "10000 random sets: membership, comparator agreement, permutation invariance";
  return v;
}

// 5. Codec fuzz and golden fixtures.
Verdict codec() {
  Verdict v;
  test::MessageGen gen(derive_seed(5, "acceptance.codec"));
  std::array<int, 5> per_type{};
  for (int i = 0; i < 100000; ++i) {
    const Message m = gen.any();
    ++per_type[m.index()];
    const Bytes b = encode(m);
    const Message back = decode(b);
    if (!(back == m) || encode(back) != b) {
      v.fail("round trip failed on " + to_hex(b));
      break;
    }
  }
  std::size_t goldens = 0;
  for (const auto& c : test::golden_cases()) {
    ++goldens;
    const Bytes fixture = test::golden(c.file);
    if (encode(c.message) != fixture) v.fail(std::string("encoding differs from fixture ") + c.file);
    if (!(decode(fixture) == c.message)) v.fail(std::string("decoding differs for fixture ") + c.file);
  }
  const bool codes = static_cast<int>(MessageId::Cam) == 1 && static_cast<int>(MessageId::AckMcm) == 5 &&
                     static_cast<int>(DenmType::Trigger) == 1 && static_cast<int>(DenmType::Terminate) == 3 &&
                     static_cast<int>(CauseCode::CollisionRisk) == 97 && static_cast<int>(Direction::Straight) == 0 &&
                     static_cast<int>(Direction::Left) == 1 && static_cast<int>(Direction::Right) == 2 &&
                     static_cast<int>(StationType::Iav) == 2 && static_cast<int>(StationType::Beacon) == 3;
  if (!codes) v.fail("enum codes differ from the message models");
  if (v.pass)
    v.detail = "100000 fuzzed messages (" + std::to_string(per_type[0]) + "/" + std::to_string(per_type[1]) + "/" +
               std::to_string(per_type[2]) + "/" + std::to_string(per_type[3]) + "/" + std::to_string(per_type[4]) +
               " per type) and " + std::to_string(goldens) + " golden fixtures";
  return v;
}

// 6. Determinism of trace files and agent order.
Verdict determinism() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "iav_acceptance";
  std::filesystem::create_directories(dir);
  struct Case {
    std::string name;
    Scenario scenario;
    std::uint64_t seed;
    Step steps;
  };
  Scenario lossy = benchmark_scenario();
  lossy.bus = {2, 0.2};
  const std::vector<Case> cases{{"benchmark", benchmark_scenario(), 7, 6000},
                                {"lossy", lossy, 8, 4000},
                                {"four_robots", load_scenario(test::scenario_path("four_robots.scn")), 1, 2000},
                                {"crossing60", load_scenario(test::scenario_path("crossing60.scn")), 2, 2000}};
  for (const auto& c : cases) {
    std::string bytes[2];
    for (int run = 0; run < 2; ++run) {
      const auto file = dir / (c.name + std::to_string(run) + ".trace");
      {
        std::ofstream out(file, std::ios::binary);
        EngineOptions opt;
        opt.sink = [&out](const TraceEvent& e) { out << format_event(e) << '\n'; };
        Simulation sim(c.scenario, c.seed, opt);
        sim.run(c.steps);
      }
      bytes[run] = test::read_file(file.string());
    }
    if (bytes[0] != bytes[1]) v.fail(c.name + ": trace files differ");
    for (std::uint64_t perm : {11ull, 12ull}) {
      EngineOptions opt;
      opt.shuffle_order_seed = perm;
      Simulation sim(c.scenario, c.seed, opt);
      sim.run(c.steps);
      if (trace_text(sim.events()) != bytes[0]) v.fail(c.name + ": permuted agent order changed the trace");
    }
  }
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = "4 scenarios: identical trace files, identical under 2 agent-order permutations";
  return v;
}

int run_cli(const std::string& scenario) {
#ifdef IAV_IAVSIM
  const std::string cmd = std::string("\"") + IAV_IAVSIM + "\" run --scenario \"" + scenario +
                          "\" --steps 2000 --metrics \"" +
                          (std::filesystem::temp_directory_path() / "iav_acceptance_metrics.csv").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  Simulation sim(load_scenario(scenario), 1);
  sim.run(2000);
  return sim.collisions() ? 2 : 0;
#endif
}

// 7. Negative control.
Verdict protocol_off() {
  Verdict v;
  const int off = run_cli(test::scenario_path("protocol_off.scn"));
  const int on = run_cli(test::scenario_path("crossing60.scn"));
  if (off != 2) v.fail("protocol off exited " + std::to_string(off) + ", expected 2");
  if (on != 0) v.fail("protocol on exited " + std::to_string(on) + ", expected 0");
  Simulation sim(load_scenario(test::scenario_path("protocol_off.scn")), 1);
  sim.run(2000);
  add_to_corpus("protocol_off", sim.events());
  if (v.pass) v.detail = "handshake off: exit 2 with " + std::to_string(sim.collisions()) + " collision(s); same geometry with handshake: exit 0";
  return v;
}

Scenario blocked_lane(bool avoidance, int vehicles) {
  Scenario s;
  s.builtin_plan = false;
  s.plan.waypoints = {{1, {0, 0}}, {2, {40, 0}}};
  s.plan.lanes = {{1, 2, 2.0}};
  s.protocol.avoidance = avoidance;
  for (int k = 0; k < vehicles; ++k) {
    VehicleSpec vs;
    vs.station_id = static_cast<StationId>(k + 1);
    vs.start = Vec2{8.0 - 1.5 * k, 0};
    vs.goals = {{35, 0}};
    s.vehicles.push_back(vs);
  }
  ObstacleSpec o;
  o.label = 1;
  o.step = 0;
  o.remove_step = 400;
  o.position = Vec2{14, 0};
  o.radius = avoidance ? 0.95 : 0.2;
  s.obstacles.push_back(o);
  return s;
}

// 8. DENM lifecycle after obstacle removal, and pairing across the corpus.
Verdict denm_lifecycle_check() {
  Verdict v;
  std::size_t triggers = 0;
  struct Case {
    std::string name;
    Scenario scenario;
  };
  const std::vector<Case> cases{{"single vehicle, narrow pass", blocked_lane(true, 1)},
                                {"queue of three, no avoidance", blocked_lane(false, 3)}};
  for (const auto& c : cases) {
    Simulation sim(c.scenario, 1);
    sim.run(5000);
    add_to_corpus("lifecycle " + c.name, sim.events());
    const DenmAudit a = audit_denms(sim.events());
    triggers += a.triggers;
    if (a.triggers == 0) v.fail(c.name + ": obstacle raised no DENM");
    if (a.open_at_end) v.fail(c.name + ": " + std::to_string(a.open_at_end) + " alert(s) never terminated");
    if (!a.violation.empty()) v.fail(c.name + ": " + a.violation);
    if (!sim.vehicles().empty()) v.fail(c.name + ": vehicles did not finish after the obstacle was removed");
  }
  if (!g_corpus_failures.empty()) v.fail("corpus: " + g_corpus_failures.front());
  if (v.pass)
    v.detail = std::to_string(triggers) + " TRIGGERs after removal all TERMINATEd; " + std::to_string(g_corpus_traces) +
               " corpus traces free of unmatched TERMINATE/UPDATE";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"benchmark safety", benchmark_safety},
      {"four-robot intersection message pattern", four_robot_pattern},
      {"intersection mutual exclusion", mutual_exclusion},
      {"conflict resolution determinism", conflict_determinism},
      {"codec round trip and golden fixtures", codec},
      {"trace determinism", determinism},
      {"protocol-off negative control", protocol_off},
      {"DENM lifecycle", denm_lifecycle_check},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << n << "] " << name << ": " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
