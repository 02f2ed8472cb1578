#include <gtest/gtest.h>

#include "iav/scenario.hpp"
#include "support/fixtures.hpp"

namespace iav {
namespace {

ScenarioErrc error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ScenarioErrc::SyntaxError;
}

std::size_t error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  return 0;
}

TEST(ParseScenario, MinimalFileFillsDefaults) {
  const auto s = parse_scenario("[plan]\nbuiltin = benchmark\n\n[vehicle 3]\nroute = red\nspawn = 0\n");
  EXPECT_TRUE(s.builtin_plan);
  EXPECT_EQ(s.plan, build_benchmark_plan());
  ASSERT_EQ(s.vehicles.size(), 1u);
  EXPECT_EQ(s.vehicles[0].station_id, 3u);
  EXPECT_EQ(s.vehicles[0].route, RouteRole::Red);
  EXPECT_DOUBLE_EQ(s.vehicles[0].cruise_speed, 1.0);
  EXPECT_EQ(s.sensor, SensorConfig{});
  EXPECT_EQ(s.protocol, ProtocolParams{});
  EXPECT_EQ(s.bus, BusConfig{});
}

TEST(ParseScenario, DuplicateStationId) {
  EXPECT_EQ(error_of("[vehicle 7]\nroute = red\nspawn = 0\n[vehicle 7]\nroute = blue\nspawn = 1\n"),
            ScenarioErrc::DuplicateStationId);
}

TEST(ParseScenario, TypoKeyIsUnknown) {
  EXPECT_EQ(error_of("[sensor]\nobseration_distance = 3\n"), ScenarioErrc::UnknownKey);
  EXPECT_EQ(error_line("[sensor]\nobseration_distance = 3\n"), 2u);
  EXPECT_EQ(error_of("[vehicle 1]\nroute = red\nspawn = 0\nspeed = 2\n"), ScenarioErrc::UnknownKey);
  EXPECT_EQ(error_of("[weather]\n"), ScenarioErrc::UnknownKey);
}

TEST(ParseScenario, SyntaxErrors) {
  EXPECT_EQ(error_of("key = 1\n"), ScenarioErrc::SyntaxError);
  EXPECT_EQ(error_of("[sensor]\nobservation_distance\n"), ScenarioErrc::SyntaxError);
  EXPECT_EQ(error_of("[sensor]\nobservation_distance = far\n"), ScenarioErrc::SyntaxError);
  EXPECT_EQ(error_of("[sensor\n"), ScenarioErrc::SyntaxError);
  EXPECT_EQ(error_of("[vehicle 1]\nroute = purple\nspawn = 0\n"), ScenarioErrc::SyntaxError);
  EXPECT_EQ(error_line("# c\n[bus]\nlatency = -1\n"), 3u);
}

TEST(ParseScenario, InvalidScenarios) {
  // route and explicit start together
  EXPECT_EQ(error_of("[vehicle 1]\nroute = red\nstart = 0 0\ngoals = 1 0\n"), ScenarioErrc::InvalidScenario);
  // two vehicles on one spawn point
  EXPECT_EQ(error_of("[vehicle 1]\nroute = red\nspawn = 0\n[vehicle 2]\nroute = blue\nspawn = 0\n"),
            ScenarioErrc::InvalidScenario);
  // safety distance beyond observation distance
  EXPECT_EQ(error_of("[sensor]\nsafety_distance = 5\n"), ScenarioErrc::InvalidScenario);
  // obstacle outside every lane
  EXPECT_EQ(error_of("[obstacle 1]\nposition = 25 5\n"), ScenarioErrc::InvalidScenario);
  // removal before injection
  EXPECT_EQ(error_of("[obstacle 1]\nstep = 10\nremove_step = 5\n"), ScenarioErrc::InvalidScenario);
  EXPECT_EQ(error_of("[bus]\nloss = 1.5\n"), ScenarioErrc::InvalidScenario);
}

TEST(ParseScenario, CommentsAndWhitespace) {
  const auto s = parse_scenario("  # leading comment\n[bus]   \n latency=2   # trailing\nloss = 0.25\n");
  EXPECT_EQ(s.bus.latency, 2u);
  EXPECT_DOUBLE_EQ(s.bus.loss, 0.25);
}

TEST(SerializeScenario, ParseSerializeParseIsAFixedPoint) {
  for (const char* name : {"benchmark.scn", "four_robots.scn", "crossing60.scn", "protocol_off.scn"}) {
    const auto s1 = load_scenario(test::scenario_path(name));
    const std::string text = serialize_scenario(s1);
    const auto s2 = parse_scenario(text);
    EXPECT_EQ(s1, s2) << name;
    EXPECT_EQ(serialize_scenario(s2), text) << name;
  }
}

TEST(SerializeScenario, CoversEveryField) {
  Scenario s = benchmark_scenario();
  s.sensor.observation_distance = 3.5;
  s.protocol.cam_period = 7;
  s.protocol.avoidance = false;
  s.protocol.clearance = 0.1 + 0.2;
  s.bus = {3, 0.125};
  s.vehicles[0].cruise_speed = 0.7;
  s.vehicles[0].arrival_tolerance = 0.3;
  ObstacleSpec walker;
  walker.label = 9;
  walker.step = 5;
  walker.remove_step = 50;
  walker.kind = ObstacleKind::Pedestrian;
  walker.position = Vec2{10, 10};
  walker.path = {{10, 10}, {20, 10}};
  walker.speed = 0.5;
  s.obstacles.push_back(walker);
  EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
}

TEST(BenchmarkScenario, MatchesShippedFile) {
  EXPECT_EQ(load_scenario(test::scenario_path("benchmark.scn")), benchmark_scenario());
  const auto s = benchmark_scenario();
  EXPECT_EQ(s.vehicles.size(), 10u);
  EXPECT_EQ(s.obstacles.size(), 3u);
  for (const auto& o : s.obstacles) {
    EXPECT_FALSE(o.position.has_value());
    EXPECT_EQ(o.kind, ObstacleKind::Static);
  }
}

TEST(TaskTable, FromVehicles) {
  const auto t = task_table(load_scenario(test::scenario_path("crossing60.scn")));
  EXPECT_EQ(t.at(1), (TaskRank{1, 1, 0}));
  EXPECT_EQ(t.at(2), (TaskRank{2, 2, 0}));
}

}  // namespace
}  // namespace iav
