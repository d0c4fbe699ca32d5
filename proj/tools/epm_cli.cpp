#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "epm/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Extended-particle model simulator"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  double epsilon = 0.0;
  std::string orientation;
  bool seedless = false;

  for (const char* verb : {"simulate", "observables", "field", "bohm", "coupled", "converge", "verify"}) {
    CLI::App* sub = app.add_subcommand(verb, std::string("run the ") + verb + " pipeline");
    auto* c = sub->add_option("--config", config, "scenario JSON file")->check(CLI::ExistingFile);
    if (std::string(verb) != "verify") c->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--epsilon", epsilon, "override the time step")->check(CLI::PositiveNumber);
    sub->add_option("--orientation", orientation, "vertex orientation")->check(CLI::IsMember({"+", "-"}));
    sub->add_flag("--seedless", seedless, "no-op: every run is deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    epm::RunOptions options;
    if (!out.empty()) options.out = out;
    if (epsilon > 0.0) options.epsilon = epsilon;
    if (!orientation.empty()) options.orientation = epm::orientation_from_string(orientation);

    epm::Scenario scenario;
    if (config.empty()) {
      scenario.name = "acceptance";
    } else {
      scenario = epm::load_scenario(config);
    }
    const epm::RunReport report = epm::run_scenario(scenario, epm::pipeline_from_string(verb), options);
    for (const auto& c : report.checks)
      std::printf("%-4s %-40s measured=%.6g expected=%.6g tol=%.3g (%s)\n", c.passed ? "PASS" : "FAIL",
                  c.id.c_str(), c.measured, c.expected, c.tolerance, epm::to_string(c.comparison));
    std::printf("%s: %s\n", report.scenario.c_str(), report.passed() ? "passed" : "FAILED");
    return report.passed() ? 0 : 1;
  } catch (const epm::ScenarioError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
