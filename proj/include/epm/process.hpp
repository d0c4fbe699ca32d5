#pragma once

#include <functional>
#include <string>
#include <vector>

#include "epm/core_model.hpp"

namespace epm {

enum class DriftKind { constant, closed_form, field_coupled };

/// Thrown when a drift cannot be evaluated at an instant a run needs.
class DriftError : public std::runtime_error {
 public:
  DriftError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// The complex velocity v(t) driving a process.
///
/// field_coupled drifts also see the current mean position; the process
/// engine treats them as an opaque callback.
class DriftSpec {
 public:
  using TimeFn = std::function<ComplexPoint(double t)>;
  using FieldFn = std::function<ComplexPoint(double t, const ComplexPoint& mean)>;

  static DriftSpec constant(ComplexPoint v);
  static DriftSpec closed_form(TimeFn f, std::string description);
  static DriftSpec field_coupled(FieldFn f, std::string description = "field");

  DriftKind kind() const { return kind_; }
  const std::string& description() const { return description_; }

  /// Throws DriftError if the callback fails or returns non-finite values.
  ComplexPoint evaluate(double t, const ComplexPoint& mean) const;
  /// Available for constant and closed_form drifts only.
  ComplexPoint evaluate(double t) const;

 private:
  DriftSpec() = default;

  DriftKind kind_ = DriftKind::constant;
  ComplexPoint value_;
  TimeFn time_fn_;
  FieldFn field_fn_;
  std::string description_;
};

struct ProcessConfig {
  PhysicalParams params;
  VertexFrame frame = VertexFrame::line();
  ComplexPoint z0;
  DriftSpec drift = DriftSpec::constant(ComplexPoint(cplx{}));
  long steps = 1;

  void validate() const;
};

/// Sampled paths of the extended particle.
///
/// points[j][n] is z^j(n eps); mean[n] is the mean process; drift[n] is the
/// velocity applied on step n (drift[0] repeats drift[1]).
struct ProcessTrajectory {
  PhysicalParams params;
  VertexFrame frame = VertexFrame::line();
  std::vector<double> times;
  std::vector<std::vector<ComplexPoint>> points;
  std::vector<ComplexPoint> mean;
  std::vector<ComplexPoint> drift;

  long steps() const { return static_cast<long>(times.size()) - 1; }
  int dimension() const { return frame.dimension(); }
  /// z^j - mean at step n.
  ComplexPoint deviation(int j, long n) const { return points[j][n] - mean[n]; }
};

struct ClassicalPath {
  std::vector<double> times;
  std::vector<ComplexPoint> positions;
};

/// Evolves every vertex process and the mean process for cfg.steps steps.
///
/// Step n (n >= 1) uses the drift sampled at the start of its period,
/// v(q P eps) with q = (n-1) / P and P the period (2 in 1D, 4 in 2D).
/// Vertex offsets are accumulated as exact integers so each point equals
/// mean + gamma * offset; at n = 0 (mod P) the points coincide with the
/// mean bit for bit.
ProcessTrajectory run_process(const ProcessConfig& cfg);

/// max |z^j(n eps) - (mean(n eps) + gamma (s^n u^j - u^j))| over n, j.
double recurrence_identity_residual(const ProcessTrajectory& traj);

/// max |z^j_n - z^j_{n-1} - drift_n eps - w^{n,j}| over n >= 1, j: how well
/// the stored samples satisfy the one-step process equation.
double step_equation_residual(const ProcessTrajectory& traj);

/// Largest magnitude appearing in the trajectory (>= 1); the natural
/// scale for rounding bounds.
double trajectory_scale(const ProcessTrajectory& traj);

struct IncrementMoments {
  /// E[dw^j] for each vertex j.
  std::vector<ComplexPoint> mean_increment;
  /// E[dw^i . dw^j] (bilinear dot in 2D), row-major size x size.
  std::vector<cplx> covariance;
  int size = 0;

  cplx cov(int i, int j) const { return covariance[static_cast<size_t>(i * size + j)]; }
};

/// Period averages of the fluctuation increments w^{n,j} over steps
/// n = qP+1 .. qP+P (1/P normalisation). Increments are recovered from the
/// trajectory as differences of deviations from the mean.
IncrementMoments increment_moments(const ProcessTrajectory& traj, long q);

/// Integrates dz/dt = v(t) from z0 with classical RK4 at step eps.
ClassicalPath classical_limit(const ProcessConfig& cfg);

}  // namespace epm
