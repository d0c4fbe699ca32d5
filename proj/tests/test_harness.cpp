#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "epm/harness.hpp"
#include "nlohmann/json.hpp"

using namespace epm;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = EPM_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "epm_test_harness";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("every bundled scenario parses") {
  int count = 0;
  for (const auto& e : fs::directory_iterator(kSource / "scenarios")) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_scenario(e.path()));
    ++count;
  }
  CHECK(count >= 10);
}

TEST_CASE("bad scenarios raise ScenarioError") {
  CHECK_THROWS_AS(load_scenario(kSource / "tests" / "data" / "broken.json"), ScenarioError);
  CHECK_THROWS_AS(load_scenario(kSource / "tests" / "data" / "missing.json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "modle": {}})"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "model": {"dimension": 3}})"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "physics": {"hbar": -1}})"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "sweeps": [1e-3, 1e-2, 1e-4]})"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"name": "x", "sweeps": [1e-2, 1e-3]})"), ScenarioError);
}

TEST_CASE("minimal scenario uses defaults") {
  const Scenario s = parse_scenario(R"({"name": "mini", "model": {"dimension": 1, "z0": [0.5, 0.1]}})");
  CHECK(s.model.dimension == 1);
  CHECK(s.model.z0[0] == cplx(0.5, 0.1));
  CHECK(s.physics.hbar == 1.0);
  CHECK_FALSE(s.field);
  CHECK(s.sweeps.empty());
  const ProcessConfig cfg = make_process_config(s);
  CHECK(cfg.frame.dimension() == 1);
  CHECK(cfg.steps == s.model.steps);
}

TEST_CASE("overrides replace epsilon, orientation and output directory") {
  Scenario s = load_scenario(kSource / "scenarios" / "spin-2d.json");
  RunOptions o;
  o.epsilon = 1e-3;
  o.orientation = Orientation::minus;
  o.out = scratch();
  s = apply_overrides(s, o);
  CHECK(s.physics.epsilon == 1e-3);
  CHECK(s.model.orientation == Orientation::minus);
  CHECK(s.outputs.directory == scratch());
}

TEST_CASE("simulate and observables write their artifacts") {
  const Scenario s = load_scenario(kSource / "scenarios" / "spin-2d.json");
  RunOptions o;
  o.out = scratch();
  const RunReport sim = run_scenario(s, Pipeline::simulate, o);
  CHECK(sim.passed());
  const RunReport obs = run_scenario(s, Pipeline::observables, o);
  CHECK(obs.passed());
  const fs::path dir = scratch() / "spin-2d";
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "observables.json"));
  CHECK(fs::exists(dir / "report.json"));
  const ObservablesRecord rec = read_observables_json(dir / "observables.json");
  CHECK(rec.spin_intrinsic == doctest::Approx(-0.5));
  const RunReport back = report_from_json(slurp(dir / "report.json"));
  CHECK(back.checks.size() == obs.checks.size());
}

TEST_CASE("a process-only scenario does not run field checks") {
  const Scenario s = parse_scenario(R"({"name": "process-only", "model": {"steps": 8}})");
  RunOptions o;
  o.out = scratch();
  const RunReport r = run_scenario(s, Pipeline::simulate, o);
  CHECK(r.passed());
  for (const CheckRecord& c : r.checks) CHECK(c.id.find("l2") == std::string::npos);
  CHECK_THROWS_AS(run_scenario(s, Pipeline::field, o), ScenarioError);
}

TEST_CASE("log-log fit and sweep validation") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3};
  std::vector<double> err;
  for (double e : eps) err.push_back(3.0 * std::pow(e, 1.5));
  const LogLogFit f = fit_loglog(eps, err);
  CHECK(f.slope == doctest::Approx(1.5));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_loglog({1e-1, 1e-2}, {1, 2}), DegenerateSweepError);
  CHECK_THROWS_AS(fit_loglog(eps, {1, 0, 1}), std::domain_error);
  CHECK_THROWS_AS(validate_sweep({1e-2, 1e-2, 1e-3}), DegenerateSweepError);
  CHECK_THROWS_AS(validate_sweep({1e-2, -1e-3, -1e-4}), DegenerateSweepError);
  CHECK(strictly_decreasing({3, 2, 1}));
  CHECK_FALSE(strictly_decreasing({3, 3, 1}));
}

TEST_CASE("process convergence is first order") {
  Scenario s = load_scenario(kSource / "scenarios" / "process-convergence.json");
  s.sweeps = {1e-2, 1e-3, 1e-4};
  const ConvergenceResult r = run_convergence(s, ConvergenceTarget::process);
  CHECK(r.fit.slope == doctest::Approx(0.5).epsilon(0.1));
  Scenario bad = s;
  bad.sweeps = {1e-2, 1e-3};
  CHECK_THROWS_AS(run_convergence(bad, ConvergenceTarget::process), DegenerateSweepError);
}

TEST_CASE("classical DP convergence writes its Bellman table") {
  const Scenario s = load_scenario(kSource / "scenarios" / "classical-dp.json");
  RunOptions o;
  o.out = scratch();
  CHECK(run_scenario(s, Pipeline::converge, o).passed());
  const GridAction a = read_grid_action_csv(scratch() / "classical-dp" / "action.csv");
  CHECK_NOTHROW(a.validate());
  CHECK(a.times.back() == doctest::Approx(0.6));
  const ConvergenceTable t =
      read_convergence(scratch() / "classical-dp" / "convergence.csv", scratch() / "classical-dp" / "convergence.json");
  CHECK(t.epsilon == s.sweeps);
}

TEST_CASE("named test functions carry consistent derivatives") {
  for (const char* name : {"z1^2", "z1^2+z2^2", "exp(0.5z1-0.3iz2)", "z1^3z2+tz1"}) {
    const TestFunction f = named_test_function(name);
    CHECK(derivative_mismatch(f, ComplexPoint(cplx(0.3, 0.2), cplx(-0.4, 0.1)), 0.7) < 1e-8);
  }
  CHECK_THROWS(named_test_function("nope"));
}

TEST_CASE("report JSON matches the golden schema") {
  RunReport r;
  r.scenario = "golden";
  r.add(make_check("spin_intrinsic", -0.5, -0.5, 1e-12, Comparison::relative, 0.25));
  r.add(make_check("slope", 0.75, 1.0, 0.05, Comparison::absolute, 1.5, "sweep 1e-2..1e-4"));
  r.add(make_check("residual", NAN, 1e-8, 0.0, Comparison::at_most));
  CHECK_THROWS(r.add(make_check("slope", 1, 1, 0, Comparison::absolute)));
  const auto got = nlohmann::json::parse(report_to_json(r));
  const auto want = nlohmann::json::parse(slurp(kSource / "tests" / "data" / "report_golden.json"));
  CHECK(got == want);
}

TEST_CASE("pipeline and target names") {
  for (Pipeline p : {Pipeline::simulate, Pipeline::observables, Pipeline::field, Pipeline::bohm,
                     Pipeline::coupled, Pipeline::converge, Pipeline::verify})
    CHECK(pipeline_from_string(to_string(p)) == p);
  for (ConvergenceTarget t :
       {ConvergenceTarget::process, ConvergenceTarget::irregularity, ConvergenceTarget::dynkin,
        ConvergenceTarget::hj_residual, ConvergenceTarget::least_action, ConvergenceTarget::classical_dp,
        ConvergenceTarget::coupled})
    CHECK(target_from_string(to_string(t)) == t);
  CHECK_THROWS(pipeline_from_string("bogus"));
}
