#include "epm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epm {

namespace {

struct PeriodRange {
  long first;
  long last;
  double norm;
};

PeriodRange period_range(const ProcessTrajectory& traj, long q) {
  if (q < 0) throw std::out_of_range("period index must be >= 0");
  if (traj.dimension() == 2) return {4 * q, 4 * q + 3, 1.0 / 16.0};
  return {2 * q + 1, 2 * q + 2, 1.0 / 4.0};
}

}  // namespace

PeriodStats uncertainty_stats(const ProcessTrajectory& traj, long q, MomentumForm form) {
  const PeriodRange r = period_range(traj, q);
  const long need = form == MomentumForm::increment ? r.last + 1 : r.last;
  if (need > traj.steps())
    throw std::out_of_range("uncertainty_stats: period not contained in the trajectory");

  const int dim = traj.dimension();
  const double m = traj.params.mass;
  const double eps = traj.params.epsilon;
  std::array<double, 2> sx{}, sp{};
  for (long n = r.first; n <= r.last; ++n)
    for (int j = 0; j < traj.frame.size(); ++j) {
      const auto dx = traj.deviation(j, n).real();
      std::array<double, 2> dp{};
      if (form == MomentumForm::increment) {
        // (p - p~) = m ((r_{n+1} - r~_{n+1}) - (r_n - r~_n)) / eps
        const auto next = traj.deviation(j, n + 1).real();
        for (int k = 0; k < dim; ++k) dp[k] = m * (next[k] - dx[k]) / eps;
      } else {
        for (int k = 0; k < dim; ++k) dp[k] = m * dx[k] / eps;
      }
      for (int k = 0; k < dim; ++k) {
        sx[k] += dx[k] * dx[k];
        sp[k] += dp[k] * dp[k];
      }
    }

  PeriodStats s;
  s.dimension = dim;
  for (int k = 0; k < dim; ++k) {
    s.delta_x[k] = std::sqrt(sx[k] * r.norm);
    s.delta_p[k] = std::sqrt(sp[k] * r.norm);
    s.product[k] = s.delta_x[k] * s.delta_p[k];
  }
  return s;
}

SpinReport spin_z(const ProcessTrajectory& traj, long q) {
  if (traj.dimension() != 2) throw std::invalid_argument("spin_z needs a 2D trajectory");
  const PeriodRange r = period_range(traj, q);
  if (r.last + 1 > traj.steps())
    throw std::out_of_range("spin_z: period not contained in the trajectory");

  const double m = traj.params.mass;
  const double eps = traj.params.epsilon;
  double total = 0.0;
  std::array<double, 2> mean_r{};
  for (long n = r.first; n <= r.last; ++n) {
    const auto c = traj.mean[n].real();
    mean_r[0] += 0.25 * c[0];
    mean_r[1] += 0.25 * c[1];
    for (int j = 0; j < 4; ++j) {
      const auto x = traj.points[j][n].real();
      const auto x1 = traj.points[j][n + 1].real();
      const double px = m * (x1[0] - x[0]) / eps;
      const double py = m * (x1[1] - x[1]) / eps;
      total += x[0] * py - x[1] * px;
    }
  }
  total *= r.norm;

  const auto v = traj.drift[r.first + 1].real();
  SpinReport s;
  s.total = total;
  s.orbital = m * (mean_r[0] * v[1] - mean_r[1] * v[0]);
  s.intrinsic = s.total - s.orbital;
  return s;
}

double derivative_mismatch(const TestFunction& f, const ComplexPoint& z, double t) {
  const int dim = f.dimension;
  const double h = 1e-3 * std::max(1.0, max_abs(z));
  auto at = [&](int k, double off) {
    ComplexPoint w = z;
    w[k] += off;
    return f.value(w, t);
  };
  auto rel = [](cplx approx, cplx exact) {
    return std::abs(approx - exact) / (1.0 + std::abs(exact));
  };

  double worst = 0.0;
  const ComplexPoint grad = f.gradient(z, t);
  cplx lap{};
  const cplx f0 = f.value(z, t);
  for (int k = 0; k < dim; ++k) {
    const cplx fm2 = at(k, -2 * h), fm1 = at(k, -h), fp1 = at(k, h), fp2 = at(k, 2 * h);
    const cplx d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    worst = std::max(worst, rel(d1, grad[k]));
    lap += (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  }
  worst = std::max(worst, rel(lap, f.laplacian(z, t)));

  const double ht = 1e-3 * std::max(1.0, std::abs(t));
  const cplx dt = (f.value(z, t - 2 * ht) - 8.0 * f.value(z, t - ht) + 8.0 * f.value(z, t + ht) -
                   f.value(z, t + 2 * ht)) /
                  (12.0 * ht);
  worst = std::max(worst, rel(dt, f.time_derivative(z, t)));
  return worst;
}

cplx dynkin_apply(const TestFunction& f, const ComplexPoint& z, double t, const ComplexPoint& v,
                  const PhysicalParams& params) {
  params.validate();
  if (z.dimension() != f.dimension || v.dimension() != f.dimension)
    throw std::invalid_argument("dynkin_apply: dimension mismatch");
  if (derivative_mismatch(f, z, t) > 1e-6)
    throw std::invalid_argument("dynkin_apply: supplied derivatives of '" + f.name +
                                "' are inconsistent with finite differences");
  const cplx i{0.0, 1.0};
  return f.time_derivative(z, t) + dot(v, f.gradient(z, t)) -
         i * (params.hbar / (2.0 * params.mass)) * f.laplacian(z, t);
}

double four_point_residual(const TestFunction& f, const ProcessConfig& cfg, long q) {
  if (cfg.frame.dimension() != 2 || f.dimension != 2)
    throw std::invalid_argument("four_point_residual needs the 2D four-point process");
  if (q < 1) throw std::invalid_argument("four_point_residual: q must be >= 1");
  ProcessConfig run = cfg;
  run.steps = 4 * q;
  const ProcessTrajectory traj = run_process(run);

  const long n = 4 * q;
  const double eps = cfg.params.epsilon;
  const double t = traj.times[n];
  const double t_prev = traj.times[n - 1];
  cplx y_now{}, y_prev{};
  for (int j = 0; j < 4; ++j) {
    y_now += 0.25 * f.value(traj.points[j][n], t);
    y_prev += 0.25 * f.value(traj.points[j][n - 1], t_prev);
  }
  const cplx d = dynkin_apply(f, traj.mean[n], t, traj.drift[n], cfg.params);
  return std::abs(y_now - y_prev - d * eps);
}

}  // namespace epm
