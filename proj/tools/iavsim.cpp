// iavsim: run, replay and validate warehouse vehicle scenarios.
//
// Exit codes: 0 success, 1 scenario or input error, 2 a collision occurred.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "iav/engine.hpp"
#include "iav/metrics.hpp"
#include "iav/scenario.hpp"
#include "iav/trace.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kCollision = 2;

int finish(const iav::Metrics& m, const std::string& metrics_path) {
  if (metrics_path.empty() || metrics_path == "-") {
    iav::write_metrics_csv(std::cout, m);
  } else {
    std::ofstream out(metrics_path);
    if (!out) {
      std::cerr << "cannot write " << metrics_path << '\n';
      return kBadInput;
    }
    iav::write_metrics_csv(out, m);
  }
  return m.fleet.collisions > 0 ? kCollision : kOk;
}

int run(const std::string& scenario_path, std::uint64_t seed, iav::Step steps, const std::string& trace_path,
        const std::string& metrics_path) {
  const iav::Scenario sc = iav::load_scenario(scenario_path);
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) {
      std::cerr << "cannot write " << trace_path << '\n';
      return kBadInput;
    }
  }
  iav::Simulation sim(sc, seed);
  sim.run(steps);
  if (trace.is_open()) iav::write_trace(trace, sim.events());
  return finish(iav::compute_metrics(sim.events()), metrics_path);
}

int replay(const std::string& trace_path, const std::string& metrics_path) {
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "cannot read " << trace_path << '\n';
    return kBadInput;
  }
  return finish(iav::compute_metrics(iav::read_trace(in)), metrics_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative industrial vehicle simulator"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, metrics_path;
  std::uint64_t seed = 0;
  iav::Step steps = 1000;

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--seed", seed, "Random seed");
  run_cmd->add_option("--steps", steps, "Number of steps");
  run_cmd->add_option("--trace", trace_path, "Write the event trace here");
  run_cmd->add_option("--metrics", metrics_path, "Write metrics CSV here (default stdout)");

  auto* replay_cmd = app.add_subcommand("replay", "Recompute metrics from a trace");
  replay_cmd->add_option("--trace", trace_path, "Trace file")->required();
  replay_cmd->add_option("--metrics", metrics_path, "Write metrics CSV here (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*run_cmd) return run(scenario_path, seed, steps, trace_path, metrics_path);
    if (*replay_cmd) return replay(trace_path, metrics_path);
    if (*validate_cmd) {
      iav::load_scenario(scenario_path);
      std::cout << "ok\n";
      return kOk;
    }
  } catch (const iav::ScenarioError& e) {
    std::cerr << iav::to_string(e.code()) << ": " << e.what() << '\n';
    return kBadInput;
  } catch (const iav::TraceError& e) {
    std::cerr << "TraceError: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
