#include "epm/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epm {

DriftSpec DriftSpec::constant(ComplexPoint v) {
  DriftSpec d;
  d.kind_ = DriftKind::constant;
  d.value_ = v;
  d.description_ = "constant";
  return d;
}

DriftSpec DriftSpec::closed_form(TimeFn f, std::string description) {
  if (!f) throw std::invalid_argument("closed_form drift needs a function");
  DriftSpec d;
  d.kind_ = DriftKind::closed_form;
  d.time_fn_ = std::move(f);
  d.description_ = std::move(description);
  return d;
}

DriftSpec DriftSpec::field_coupled(FieldFn f, std::string description) {
  if (!f) throw std::invalid_argument("field_coupled drift needs a callback");
  DriftSpec d;
  d.kind_ = DriftKind::field_coupled;
  d.field_fn_ = std::move(f);
  d.description_ = std::move(description);
  return d;
}

ComplexPoint DriftSpec::evaluate(double t, const ComplexPoint& mean) const {
  ComplexPoint v;
  try {
    switch (kind_) {
      case DriftKind::constant:
        v = value_;
        break;
      case DriftKind::closed_form:
        v = time_fn_(t);
        break;
      case DriftKind::field_coupled:
        v = field_fn_(t, mean);
        break;
    }
  } catch (const DriftError&) {
    throw;
  } catch (const std::exception& e) {
    throw DriftError(std::string("drift evaluation failed: ") + e.what(), t);
  }
  if (!v.finite()) throw DriftError("drift evaluation returned a non-finite value", t);
  return v;
}

ComplexPoint DriftSpec::evaluate(double t) const {
  if (kind_ == DriftKind::field_coupled)
    throw std::logic_error("field-coupled drift needs the current mean position");
  return evaluate(t, value_);
}

void ProcessConfig::validate() const {
  params.validate();
  if (steps < 1) throw std::invalid_argument("ProcessConfig: steps must be >= 1");
  if (z0.dimension() != frame.dimension())
    throw std::invalid_argument("ProcessConfig: z0 dimension does not match the frame");
  if (!z0.finite()) throw std::invalid_argument("ProcessConfig: z0 must be finite");
}

ProcessTrajectory run_process(const ProcessConfig& cfg) {
  cfg.validate();
  const int dim = cfg.frame.dimension();
  const int size = cfg.frame.size();
  const long period = cfg.frame.period();
  const long steps = cfg.steps;
  const double eps = cfg.params.epsilon;
  const cplx g = gamma(cfg.params, dim);

  ProcessTrajectory traj;
  traj.params = cfg.params;
  traj.frame = cfg.frame;
  traj.times.resize(static_cast<size_t>(steps + 1));
  traj.mean.resize(static_cast<size_t>(steps + 1));
  traj.drift.resize(static_cast<size_t>(steps + 1));
  traj.points.assign(static_cast<size_t>(size),
                     std::vector<ComplexPoint>(static_cast<size_t>(steps + 1)));

  std::vector<Vertex> offset(static_cast<size_t>(size), Vertex{0, 0});
  traj.times[0] = 0.0;
  traj.mean[0] = cfg.z0;
  for (int j = 0; j < size; ++j) traj.points[j][0] = cfg.z0;

  ComplexPoint v;
  for (long n = 1; n <= steps; ++n) {
    if ((n - 1) % period == 0) {
      const long start = n - 1;
      v = cfg.drift.evaluate(double(start) * eps, traj.mean[start]);
      if (v.dimension() != dim) throw DriftError("drift has the wrong dimension", start * eps);
    }
    traj.drift[n] = v;
    traj.times[n] = double(n) * eps;
    traj.mean[n] = traj.mean[n - 1] + v * eps;
    for (int j = 0; j < size; ++j) {
      const Vertex& now = cfg.frame.permuted(n, j);
      const Vertex& before = cfg.frame.permuted(n - 1, j);
      offset[j][0] += now[0] - before[0];
      offset[j][1] += now[1] - before[1];
      traj.points[j][n] = traj.mean[n] + scale(g, offset[j], dim);
    }
  }
  traj.drift[0] = traj.drift[1];
  return traj;
}

double recurrence_identity_residual(const ProcessTrajectory& traj) {
  const int dim = traj.dimension();
  const cplx g = gamma(traj.params, dim);
  double worst = 0.0;
  for (int j = 0; j < traj.frame.size(); ++j)
    for (long n = 0; n <= traj.steps(); ++n) {
      const ComplexPoint predicted = traj.mean[n] + scale(g, vertex_offset(traj.frame, n, j), dim);
      worst = std::max(worst, max_abs(traj.points[j][n] - predicted));
    }
  return worst;
}

double step_equation_residual(const ProcessTrajectory& traj) {
  const double eps = traj.params.epsilon;
  double worst = 0.0;
  for (int j = 0; j < traj.frame.size(); ++j)
    for (long n = 1; n <= traj.steps(); ++n) {
      const ComplexPoint rhs = traj.points[j][n - 1] + traj.drift[n] * eps +
                               step_increment(traj.frame, traj.params, n, j);
      worst = std::max(worst, max_abs(traj.points[j][n] - rhs));
    }
  return worst;
}

double trajectory_scale(const ProcessTrajectory& traj) {
  double s = 1.0;
  for (const auto& path : traj.points)
    for (const auto& z : path) s = std::max(s, max_abs(z));
  return s;
}

IncrementMoments increment_moments(const ProcessTrajectory& traj, long q) {
  const int size = traj.frame.size();
  const long period = traj.frame.period();
  const long first = q * period + 1;
  const long last = q * period + period;
  if (q < 0 || last > traj.steps())
    throw std::out_of_range("increment_moments: period not contained in the trajectory");

  IncrementMoments m;
  m.size = size;
  m.mean_increment.assign(static_cast<size_t>(size), ComplexPoint::zero(traj.dimension()));
  m.covariance.assign(static_cast<size_t>(size * size), cplx{});

  std::vector<ComplexPoint> w(static_cast<size_t>(size));
  const double norm = 1.0 / double(period);
  for (long n = first; n <= last; ++n) {
    for (int j = 0; j < size; ++j) w[j] = traj.deviation(j, n) - traj.deviation(j, n - 1);
    for (int i = 0; i < size; ++i) {
      m.mean_increment[i] += w[i];
      for (int j = 0; j < size; ++j) m.covariance[static_cast<size_t>(i * size + j)] += dot(w[i], w[j]);
    }
  }
  for (auto& x : m.mean_increment) x *= cplx(norm);
  for (auto& c : m.covariance) c *= norm;
  return m;
}

ClassicalPath classical_limit(const ProcessConfig& cfg) {
  cfg.validate();
  if (cfg.drift.kind() == DriftKind::field_coupled)
    throw std::invalid_argument("classical_limit: drift must be constant or closed_form");
  const double h = cfg.params.epsilon;
  ClassicalPath path;
  path.times.reserve(static_cast<size_t>(cfg.steps + 1));
  path.positions.reserve(static_cast<size_t>(cfg.steps + 1));
  ComplexPoint z = cfg.z0;
  path.times.push_back(0.0);
  path.positions.push_back(z);
  for (long n = 0; n < cfg.steps; ++n) {
    const double t = double(n) * h;
    // dz/dt depends on t only, so the RK4 stages collapse to Simpson's rule.
    const ComplexPoint k1 = cfg.drift.evaluate(t);
    const ComplexPoint k2 = cfg.drift.evaluate(t + 0.5 * h);
    const ComplexPoint k4 = cfg.drift.evaluate(t + h);
    z += (k1 + 4.0 * k2 + k4) * (h / 6.0);
    path.times.push_back(double(n + 1) * h);
    path.positions.push_back(z);
  }
  return path;
}

}  // namespace epm
