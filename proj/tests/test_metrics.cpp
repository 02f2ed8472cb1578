#include <gtest/gtest.h>

#include <sstream>

#include "iav/engine.hpp"
#include "iav/metrics.hpp"

namespace iav {
namespace {

const EntityRef v1{EntityKind::Vehicle, 1};
const EntityRef v2{EntityKind::Vehicle, 2};

TraceEvent moved(Step t, EntityRef e, double speed) { return {t, e, ev::Moved{{0, 0}, 0, speed}}; }
TraceEvent phase(Step t, EntityRef e, Phase from, Phase to) {
  return {t, e, ev::PhaseChanged{from, to, is_intersection_phase(to) ? std::optional<IntersectionId>(0) : std::nullopt}};
}

TEST(Metrics, EmptyTraceIsAllZero) {
  const Metrics m = compute_metrics({});
  EXPECT_TRUE(m.vehicles.empty());
  EXPECT_EQ(m.fleet, VehicleMetrics{});
  EXPECT_EQ(m.fleet.mean_intersection_wait(), 0.0);
  EXPECT_EQ(metrics_csv(m),
            "vehicle,collisions,full_stops,wait_steps,goals_reached,cycles_completed,cam,denm,cpm,mcm,ack_mcm,"
            "mean_intersection_wait\nfleet,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST(Metrics, CountsSentByType) {
  std::vector<TraceEvent> t;
  for (Step s = 0; s < 3; ++s) t.push_back({s, v1, ev::Sent{MessageId::Cam, {}}});
  t.push_back({3, v2, ev::Sent{MessageId::Denm, {}}});
  const Metrics m = compute_metrics(t);
  EXPECT_EQ(m.vehicles.at(1).sent[0], 3u);
  EXPECT_EQ(m.vehicles.at(2).sent[1], 1u);
  EXPECT_EQ(m.fleet.sent[0], 3u);
  EXPECT_EQ(m.fleet.sent[1], 1u);
}

TEST(Metrics, FullStopsAreMaximalStationaryIntervals) {
  const std::vector<TraceEvent> t{moved(0, v1, 1.0), moved(1, v1, 0.0), moved(2, v1, 0.0),
                                  moved(3, v1, 1.0), moved(4, v1, 0.0)};
  EXPECT_EQ(compute_metrics(t).vehicles.at(1).full_stops, 2u);
}

TEST(Metrics, IntersectionWaitIsNotAFullStop) {
  const std::vector<TraceEvent> t{
      moved(0, v1, 1.0),
      phase(1, v1, Phase::Cruising, Phase::Requesting),
      moved(1, v1, 0.0),
      phase(2, v1, Phase::Requesting, Phase::Waiting),
      moved(2, v1, 0.0),
      moved(3, v1, 0.0),
      phase(4, v1, Phase::Waiting, Phase::Crossing),
      moved(4, v1, 1.0),
  };
  const auto& m = compute_metrics(t).vehicles.at(1);
  EXPECT_EQ(m.full_stops, 0u);
  EXPECT_EQ(m.wait_steps, 3u);
  EXPECT_EQ(m.intersection_passes, 1u);
  EXPECT_EQ(m.intersection_wait_total, 3u);
  EXPECT_DOUBLE_EQ(m.mean_intersection_wait(), 3.0);
}

TEST(Metrics, CollisionPairsCountOnceInFleet) {
  const std::vector<TraceEvent> t{{5, v1, ev::CollisionDetected{v2, 0.3}}, {5, v2, ev::CollisionDetected{v1, 0.3}}};
  const Metrics m = compute_metrics(t);
  EXPECT_EQ(m.vehicles.at(1).collisions, 1u);
  EXPECT_EQ(m.vehicles.at(2).collisions, 1u);
  EXPECT_EQ(m.fleet.collisions, 1u);
}

TEST(Metrics, GoalsAndCycles) {
  const std::vector<TraceEvent> t{{1, v1, ev::GoalReached{0, {1, 1}}}, {2, v1, ev::GoalReached{1, {2, 2}}},
                                  {2, v1, ev::CycleCompleted{1}}};
  const auto& m = compute_metrics(t).vehicles.at(1);
  EXPECT_EQ(m.goals_reached, 2u);
  EXPECT_EQ(m.cycles_completed, 1u);
}

TEST(Metrics, ReplayedTraceGivesIdenticalReport) {
  Simulation sim(benchmark_scenario(), 8);
  sim.run(4000);
  std::ostringstream os;
  write_trace(os, sim.events());
  std::istringstream is(os.str());
  const auto replayed = read_trace(is);
  EXPECT_EQ(compute_metrics(replayed), compute_metrics(sim.events()));
  EXPECT_EQ(metrics_csv(compute_metrics(replayed)), metrics_csv(compute_metrics(sim.events())));
}

TEST(Metrics, MessageCountsEqualTraceSentCounts) {
  Simulation sim(benchmark_scenario(), 9);
  sim.run(3000);
  std::array<std::uint64_t, 5> counted{};
  for (const auto& e : sim.events())
    if (const auto* s = std::get_if<ev::Sent>(&e.data)) ++counted[static_cast<int>(s->id) - 1];
  const Metrics m = compute_metrics(sim.events());
  EXPECT_EQ(m.fleet.sent, counted);
  std::array<std::uint64_t, 5> summed{};
  for (const auto& [id, v] : m.vehicles)
    for (int k = 0; k < 5; ++k) summed[k] += v.sent[k];
  EXPECT_EQ(summed, counted);
}

}  // namespace
}  // namespace iav
