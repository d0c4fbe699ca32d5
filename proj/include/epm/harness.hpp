#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epm/fit.hpp"
#include "epm/io.hpp"
#include "epm/observables.hpp"
#include "epm/report.hpp"
#include "epm/scenario.hpp"

namespace epm {

enum class Pipeline { simulate, observables, field, bohm, coupled, converge, verify };
Pipeline pipeline_from_string(const std::string& s);
const char* to_string(Pipeline p);

struct RunOptions {
  /// Overrides the scenario's output directory.
  std::optional<std::filesystem::path> out;
  std::optional<double> epsilon;
  std::optional<Orientation> orientation;
};

/// Scenario with command-line overrides applied.
Scenario apply_overrides(Scenario s, const RunOptions& options);

/// Runs one pipeline and writes <out>/<scenario>/<artifact> files plus
/// report.json.
RunReport run_scenario(const Scenario& scenario, Pipeline pipeline, const RunOptions& options = {});

enum class ConvergenceTarget {
  process,       ///< sup |z^j - classical path|
  irregularity,  ///< RMS fluctuation velocity
  dynkin,        ///< four-point Dynkin residual
  hj_residual,   ///< complex HJ residual of the analytic Gaussian (sweep = grid spacing)
  least_action,  ///< one-step generalised least-action residual
  classical_dp,  ///< Bellman table error for a quadratic initial action
  coupled,       ///< |Re mean - Bohm path|
};
ConvergenceTarget target_from_string(const std::string& s);
const char* to_string(ConvergenceTarget t);

struct ConvergenceResult {
  ConvergenceTable table;
  LogLogFit fit;
};

/// Evaluates the target at every sweep value (in parallel) and fits the
/// log-log slope. Throws DegenerateSweepError for unusable sweeps.
ConvergenceResult run_convergence(const Scenario& scenario, ConvergenceTarget target);

/// sup over steps and vertices of |z^j - classical limit|.
double classical_deviation(const ProcessConfig& cfg);

/// sqrt of the mean over steps and vertices of |w / eps|^2, with w the
/// fluctuation increment of each step.
double fluctuation_velocity_rms(const ProcessTrajectory& traj);

/// Holomorphic test functions of (z1, z2, t) by name:
/// "z1^2", "z1^2+z2^2", "exp(0.5z1-0.3iz2)", "z1^3z2+tz1".
TestFunction named_test_function(const std::string& name);

/// Bellman table for S0 = p0 x + kappa x^2 / 2 on spec.domain with
/// dx = dt_ratio * eps, up to t_end.
GridAction classical_dp_table(const ConvergeSpec& spec, double mass, double epsilon);

/// Sup error of the Bellman table at t = steps * eps against the analytic
/// free-particle action for S0 = p0 x + kappa x^2 / 2, over |x| <= window.
double classical_dp_error(const ConvergeSpec& spec, double mass, double epsilon);

}  // namespace epm
