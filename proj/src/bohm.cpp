#include "epm/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

namespace epm {

FieldHistory::FieldHistory(const PhysicalParams& params, double rho_floor)
    : params_(params), rho_floor_(rho_floor) {
  params_.validate();
  if (!(rho_floor >= 0.0)) throw std::invalid_argument("FieldHistory: rho_floor must be >= 0");
}

FieldHistory FieldHistory::record(const WaveField& psi0, const Potential& potential,
                                  const PhysicalParams& params, double dt, int stride, long count,
                                  double rho_floor) {
  if (stride < 1 || count < 2) throw std::invalid_argument("FieldHistory: stride >= 1, count >= 2");
  FieldHistory h(params, rho_floor);
  SplitStepSolver solver(psi0.grid, potential, params, dt);
  WaveField psi = psi0;
  h.push(psi);
  for (long k = 1; k < count; ++k) {
    solver.advance(psi, stride);
    // Re-anchor the clock so accumulated dt rounding does not break the
    // equal-spacing check.
    psi.time = psi0.time + double(k) * stride * dt;
    h.push(psi);
  }
  return h;
}

void FieldHistory::push(const WaveField& psi) {
  if (!snapshots_.empty()) {
    if (!(psi.grid == snapshots_.front().grid))
      throw std::invalid_argument("FieldHistory: grid differs from earlier snapshots");
    const double step = psi.time - snapshots_.back().time;
    if (!(step > 0.0)) throw std::invalid_argument("FieldHistory: times must increase");
    if (snapshots_.size() >= 2 && std::abs(step - cadence()) > 1e-9 * cadence())
      throw std::invalid_argument("FieldHistory: snapshots must be equally spaced");
  }
  velocities_.push_back(velocity_fields(decompose(psi, params_, rho_floor_), params_));
  snapshots_.push_back(psi);
}

double FieldHistory::start() const { return snapshots_.at(0).time; }
double FieldHistory::end() const { return snapshots_.at(snapshots_.size() - 1).time; }

double FieldHistory::cadence() const {
  if (snapshots_.size() < 2) throw std::logic_error("FieldHistory: fewer than two snapshots");
  return (end() - start()) / double(snapshots_.size() - 1);
}

const Grid& FieldHistory::grid() const { return snapshots_.at(0).grid; }

FieldSample FieldHistory::sample_at(size_t k, const std::array<double, 2>& x, double t) const {
  const VelocityFields& f = velocities_[k];
  const Grid& g = f.grid;
  FieldSample out;
  auto locate = [&](int axis, double pos, int& i0, double& frac) {
    const Axis& a = g.axis(axis);
    double u = (pos - a.min) / a.spacing();
    const double n = a.nodes;
    u -= n * std::floor(u / n);
    i0 = static_cast<int>(std::floor(u));
    frac = u - i0;
    if (i0 >= a.nodes) i0 = 0, frac = 0.0;
  };
  auto accumulate = [&](size_t node, double w) {
    if (!f.valid[node]) throw MaskedRegionError("Bohm velocity requested in a masked region", t);
    for (int d = 0; d < g.dimension(); ++d) {
      out.bohm[d] += w * f.bohm[node][d];
      out.complex[d] += w * f.complex[node][d];
    }
  };

  int ix = 0;
  double fx = 0.0;
  locate(0, x[0], ix, fx);
  const size_t base = g.index(ix, 0);
  if (g.dimension() == 1) {
    const double f0 = fx;
    const std::array<double, 4> w{-f0 * (f0 - 1) * (f0 - 2) / 6, (f0 + 1) * (f0 - 1) * (f0 - 2) / 2,
                                  -(f0 + 1) * f0 * (f0 - 2) / 2, (f0 + 1) * f0 * (f0 - 1) / 6};
    for (int a = -1; a <= 2; ++a) accumulate(g.shifted(base, a), w[a + 1]);
    return out;
  }
  int iy = 0;
  double fy = 0.0;
  locate(1, x[1], iy, fy);
  const size_t c = g.index(ix, iy);
  accumulate(c, (1 - fx) * (1 - fy));
  accumulate(g.shifted(c, 1, 0), fx * (1 - fy));
  accumulate(g.shifted(c, 0, 1), (1 - fx) * fy);
  accumulate(g.shifted(c, 1, 1), fx * fy);
  return out;
}

FieldSample FieldHistory::sample(const std::array<double, 2>& x, double t) const {
  if (snapshots_.size() < 2) throw std::logic_error("FieldHistory: fewer than two snapshots");
  const double dt = cadence();
  const double slack = 1e-9 * dt;
  if (t < start() - slack || t > end() + slack)
    throw std::out_of_range("FieldHistory: time outside the stored span");
  double u = (t - start()) / dt;
  size_t k = static_cast<size_t>(std::clamp(std::floor(u), 0.0, double(snapshots_.size() - 2)));
  const double w = std::clamp(u - double(k), 0.0, 1.0);
  FieldSample a = sample_at(k, x, t);
  if (w == 0.0) return a;
  const FieldSample b = sample_at(k + 1, x, t);
  for (int d = 0; d < 2; ++d) {
    a.bohm[d] = (1 - w) * a.bohm[d] + w * b.bohm[d];
    a.complex[d] = (1 - w) * a.complex[d] + w * b.complex[d];
  }
  return a;
}

BohmPath integrate_bohm(const FieldHistory& history, const std::array<double, 2>& x0, double t_end,
                        const BohmOptions& options) {
  if (options.substeps < 1) throw std::invalid_argument("integrate_bohm: substeps must be >= 1");
  const double t0 = history.start();
  if (t_end < t0 || t_end > history.end() + 1e-9 * history.cadence())
    throw std::out_of_range("integrate_bohm: t_end outside the field history");
  const int dim = history.grid().dimension();
  const double h = history.cadence() / options.substeps;
  const long full = static_cast<long>(std::floor((t_end - t0) / h + 1e-9));

  BohmPath path;
  path.dimension = dim;
  path.times.push_back(t0);
  path.positions.push_back({x0[0], dim == 2 ? x0[1] : 0.0});

  auto vel = [&](const std::array<double, 2>& x, double t) { return history.sample(x, t).bohm; };
  auto stepped = [&](const std::array<double, 2>& x, double t, double dt) {
    auto add = [](std::array<double, 2> a, const std::array<double, 2>& b, double s) {
      a[0] += s * b[0];
      a[1] += s * b[1];
      return a;
    };
    const auto k1 = vel(x, t);
    const auto k2 = vel(add(x, k1, dt / 2), t + dt / 2);
    const auto k3 = vel(add(x, k2, dt / 2), t + dt / 2);
    const auto k4 = vel(add(x, k3, dt), t + dt);
    std::array<double, 2> out = x;
    for (int d = 0; d < 2; ++d) out[d] += dt / 6 * (k1[d] + 2 * k2[d] + 2 * k3[d] + k4[d]);
    return out;
  };

  for (long n = 1; n <= full; ++n) {
    const double t = t0 + double(n - 1) * h;
    path.positions.push_back(stepped(path.positions.back(), t, h));
    path.times.push_back(t0 + double(n) * h);
  }
  const double rest = t_end - path.times.back();
  if (rest > 1e-12 * h) {
    path.positions.push_back(stepped(path.positions.back(), path.times.back(), rest));
    path.times.push_back(t_end);
  }
  return path;
}

std::vector<BohmPath> integrate_bohm_many(const FieldHistory& history,
                                          const std::vector<std::array<double, 2>>& starts,
                                          double t_end, const BohmOptions& options) {
  std::vector<std::future<BohmPath>> jobs;
  for (const auto& x0 : starts)
    jobs.push_back(std::async(std::launch::async, [&history, x0, t_end, options] {
      return integrate_bohm(history, x0, t_end, options);
    }));
  std::vector<BohmPath> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

DriftSpec field_drift(std::shared_ptr<const FieldHistory> history) {
  if (!history) throw std::invalid_argument("field_drift: no history");
  return DriftSpec::field_coupled(
      [history](double t, const ComplexPoint& mean) {
        const int dim = history->grid().dimension();
        const std::array<double, 2> x{mean[0].real(), dim == 2 ? mean[1].real() : 0.0};
        const FieldSample s = history->sample(x, t);
        return dim == 2 ? ComplexPoint(s.complex[0], s.complex[1]) : ComplexPoint(s.complex[0]);
      },
      "grad(complex action)/m");
}

CoupledRun run_coupled(const ProcessConfig& cfg, std::shared_ptr<const FieldHistory> history,
                       const BohmOptions& options) {
  if (!history) throw std::invalid_argument("run_coupled: no history");
  if (cfg.drift.kind() != DriftKind::field_coupled)
    throw std::invalid_argument("run_coupled: drift must be field_coupled");
  if (cfg.frame.dimension() != history->grid().dimension())
    throw std::invalid_argument("run_coupled: process and field dimensions differ");
  if (std::abs(history->start()) > 1e-12)
    throw std::invalid_argument("run_coupled: field history must start at t = 0");

  CoupledRun run;
  try {
    run.process = run_process(cfg);
  } catch (const DriftError& e) {
    throw MaskedRegionError(e.what(), e.time());
  }
  const double eps = cfg.params.epsilon;
  const double t_end = double(cfg.steps) * eps;
  const std::array<double, 2> x0{cfg.z0[0].real(), cfg.z0.dimension() == 2 ? cfg.z0[1].real() : 0.0};
  run.bohm = integrate_bohm(*history, x0, t_end, options);

  const double cadence = history->cadence();
  const int dim = cfg.frame.dimension();
  for (size_t k = 0; k < history->size(); ++k) {
    const double t = history->start() + double(k) * cadence;
    if (t > t_end + 1e-9 * eps) break;
    const double nf = t / eps;
    const long n = std::lround(nf);
    const long b = std::lround(t / (cadence / options.substeps));
    if (std::abs(nf - double(n)) > 1e-6 || b >= static_cast<long>(run.bohm.positions.size()))
      continue;
    const ComplexPoint& m = run.process.mean[static_cast<size_t>(n)];
    const auto& x = run.bohm.positions[static_cast<size_t>(b)];
    double d = std::abs(m[0].real() - x[0]);
    if (dim == 2) d = std::hypot(d, m[1].real() - x[1]);
    run.sample_times.push_back(t);
    run.deviations.push_back(d);
    run.deviation = std::max(run.deviation, d);
  }
  return run;
}

double compton_timestep(const PhysicalParams& params, int dimension) {
  if (!params.light_speed) throw std::invalid_argument("compton_timestep: light speed missing");
  const double c = *params.light_speed;
  if (!(c > 0.0) || !(params.mass > 0.0) || !(params.hbar > 0.0))
    throw std::invalid_argument("compton_timestep: hbar, m and c must be > 0");
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("compton_timestep: dimension must be 1 or 2");
  const double h = 2.0 * std::numbers::pi * params.hbar;
  const double period_steps = dimension == 2 ? 4.0 : 2.0;
  return h / (period_steps * params.mass * c * c);
}

}  // namespace epm
