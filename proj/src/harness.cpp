#include "epm/harness.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <memory>

#include "epm/acceptance.hpp"
#include "epm/bohm.hpp"
#include "epm/reference.hpp"
#include "epm/variational.hpp"

namespace epm {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

long steps_for(double t_end, double eps, long period) {
  const long n = static_cast<long>(std::floor(t_end / eps + 1e-9));
  return std::max(period, n / period * period);
}

bool is_free_gaussian(const FieldSpec& f) {
  return f.initial.kind == InitialWaveSpec::Kind::gaussian &&
         f.potential.kind == PotentialSpec::Kind::free;
}

std::shared_ptr<const FieldHistory> build_history(const FieldSpec& f, const PhysicalParams& p) {
  const long count = f.steps / f.stride + 1;
  return std::make_shared<const FieldHistory>(FieldHistory::record(
      make_initial_wave(f, p), make_potential(f, p), p, f.dt, f.stride, count));
}

ProcessConfig process_config(const Scenario& s, std::shared_ptr<const FieldHistory>* history) {
  if (s.model.drift.kind != DriftConfig::Kind::field) return make_process_config(s);
  if (!s.field) throw ScenarioError("field-coupled drift needs a field section");
  std::shared_ptr<const FieldHistory> h = build_history(*s.field, s.physics);
  if (history) *history = h;
  ProcessConfig cfg;
  cfg.params = s.physics;
  cfg.frame = VertexFrame(s.model.dimension, s.model.orientation);
  cfg.z0 = s.model.z0;
  cfg.drift = field_drift(h);
  cfg.steps = s.model.steps;
  return cfg;
}

/// Runs `eval` on every sweep value concurrently, preserving order.
template <class F>
std::vector<double> parallel_sweep(const std::vector<double>& sweep, F eval) {
  std::vector<std::future<double>> jobs;
  for (double e : sweep) jobs.push_back(std::async(std::launch::async, eval, e));
  std::vector<double> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

double hj_error(const Scenario& s, double h) {
  if (!s.field || !is_free_gaussian(*s.field))
    throw ScenarioError("hj_residual needs a free Gaussian field section");
  const FieldSpec& f = *s.field;
  const ConvergeSpec& c = *s.converge;
  std::vector<Axis> axes = f.axes;
  for (Axis& a : axes) {
    a.nodes = static_cast<int>(std::lround(a.length() / h));
  }
  const Grid grid(axes);
  const double dt = c.dt_ratio * h;
  const auto g = packets(f.initial.first);
  auto at = [&](double t) {
    return grid.dimension() == 1 ? sample_gaussian(grid, g[0], t, s.physics)
                                 : sample_gaussian(grid, g[0], g[1], t, s.physics);
  };
  return complex_hj_residual(at(c.t_end - dt), at(c.t_end), at(c.t_end + dt), free_potential(),
                             s.physics);
}

double least_action_error(const Scenario& s, double eps) {
  if (!s.field || s.field->axes.size() != 2)
    throw ScenarioError("least_action needs a 2D field section");
  const ConvergeSpec& c = *s.converge;
  const long n = std::lround(c.t_end / (4 * eps)) * 4;
  if (n < 4 || std::abs(double(n) * eps - c.t_end) > 1e-9 * c.t_end)
    throw ScenarioError("least_action: converge.t_end must be a multiple of 4 eps");
  PhysicalParams p = s.physics;
  p.epsilon = eps;
  const Potential v = make_potential(*s.field, p);
  const WaveField psi0 = make_initial_wave(*s.field, p);
  SplitStepSolver solver(psi0.grid, v, p, eps);
  WaveField before = psi0;
  solver.advance(before, n - 1);
  WaveField after = before;
  solver.step(after);
  before.time = double(n - 1) * eps;
  after.time = double(n) * eps;
  ProcessConfig cfg;
  cfg.params = p;
  cfg.frame = VertexFrame(2, s.model.orientation);
  cfg.z0 = ComplexPoint::zero(2);
  return least_action_step_residual(before, after, v, cfg);
}

double coupled_error(const Scenario& s, std::shared_ptr<const FieldHistory> history, double eps) {
  PhysicalParams p = s.physics;
  p.epsilon = eps;
  ProcessConfig cfg;
  cfg.params = p;
  cfg.frame = VertexFrame(s.model.dimension, s.model.orientation);
  cfg.z0 = s.model.z0;
  cfg.drift = field_drift(history);
  cfg.steps = steps_for(s.converge->t_end, eps, cfg.frame.period());
  BohmOptions o;
  o.substeps = s.bohm ? s.bohm->substeps : 8;
  return run_coupled(cfg, history, o).deviation;
}

// ---------------------------------------------------------------------------
// Pipelines

struct Context {
  const Scenario& s;
  fs::path dir;
  RunReport report;

  fs::path file(const std::string& name) const { return dir / name; }
};

void simulate_checks(Context& c, const ProcessTrajectory& traj) {
  const double scale = trajectory_scale(traj);
  const double bound = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  c.report.add(make_check("process.recurrence_identity", recurrence_identity_residual(traj), bound,
                          0.0, Comparison::at_most));
  c.report.add(make_check("process.step_equation", step_equation_residual(traj), bound, 0.0,
                          Comparison::at_most));
  double closure = 0.0;
  for (long n = 0; n <= traj.steps(); n += traj.frame.period())
    for (int j = 0; j < traj.frame.size(); ++j)
      closure = std::max(closure, max_abs(traj.points[j][n] - traj.mean[n]));
  c.report.add(make_check("process.period_closure", closure, 0.0, 0.0, Comparison::at_most));
}

ProcessTrajectory run_simulate(Context& c) {
  const auto t0 = Clock::now();
  const ProcessTrajectory traj = run_process(process_config(c.s, nullptr));
  simulate_checks(c, traj);
  for (auto& chk : c.report.checks) chk.wall_time_s = seconds_since(t0);
  if (c.s.outputs.csv) write_trajectory_csv(c.file("trajectory.csv"), traj);
  return traj;
}

void run_observables(Context& c) {
  const ProcessTrajectory traj = run_simulate(c);
  const auto t0 = Clock::now();
  const PhysicalParams& p = traj.params;
  const long q = c.s.model.period;
  ObservablesRecord rec;
  rec.orientation = traj.frame.orientation();
  rec.hbar = p.hbar;
  rec.mass = p.mass;
  rec.epsilon = p.epsilon;
  rec.stats = uncertainty_stats(traj, q);
  if (traj.dimension() == 2) {
    const SpinReport spin = spin_z(traj, q);
    rec.spin_intrinsic = spin.intrinsic;
    rec.spin_total = spin.total;
    const double expected_spin = (traj.frame.orientation() == Orientation::plus ? -0.5 : 0.5) * p.hbar;
    c.report.add(make_check("observables.product_x", rec.stats.product[0], 0.5 * p.hbar, 1e-12,
                            Comparison::relative, seconds_since(t0)));
    c.report.add(make_check("observables.product_y", rec.stats.product[1], 0.5 * p.hbar, 1e-12,
                            Comparison::relative, seconds_since(t0)));
    c.report.add(make_check("observables.spin_intrinsic", spin.intrinsic, expected_spin, 1e-12,
                            Comparison::relative, seconds_since(t0)));
  } else {
    const IncrementMoments m = increment_moments(traj, q);
    const cplx g = gamma(p, 1);
    double mean_abs = 0.0;
    for (const auto& w : m.mean_increment) mean_abs = std::max(mean_abs, max_abs(w));
    const double scale = std::abs(g) * std::max(1.0, trajectory_scale(traj));
    c.report.add(make_check("observables.mean_increment", mean_abs, 0.0, 1e-12 * scale,
                            Comparison::absolute, seconds_since(t0)));
    const cplx diag = 4.0 * g * g;
    double diag_err = 0.0;
    for (int j = 0; j < m.size; ++j) diag_err = std::max(diag_err, std::abs(m.cov(j, j) - diag));
    c.report.add(make_check("observables.second_moment", diag_err / std::abs(diag), 0.0, 1e-12,
                            Comparison::absolute, seconds_since(t0)));
    c.report.add(make_check("observables.product_constant", rec.stats.product[0] / p.hbar,
                            std::sqrt(2.0), 1e-12, Comparison::relative, seconds_since(t0),
                            "1D increment-momentum product in units of hbar"));
  }
  if (c.s.outputs.json) write_observables_json(c.file("observables.json"), rec);
}

void add_field_checks(Context& c, const WaveField& psi0, const WaveField& psi,
                      const FieldSpec& f, double wall) {
  c.report.add(make_check("field.norm_drift", std::abs(psi.norm() - psi0.norm()), 0.0,
                          f.norm_tolerance, Comparison::absolute, wall));
  if (f.potential.kind != PotentialSpec::Kind::free) return;
  const PhysicalParams& p = c.s.physics;
  if (f.initial.kind == InitialWaveSpec::Kind::gaussian) {
    const auto g = packets(f.initial.first);
    const WaveField exact = psi.grid.dimension() == 1
                                ? sample_gaussian(psi.grid, g[0], psi.time, p)
                                : sample_gaussian(psi.grid, g[0], g[1], psi.time, p);
    c.report.add(make_check("field.l2_error", l2_distance(psi, exact), 0.0, f.l2_tolerance,
                            Comparison::absolute, wall));
  } else if (f.initial.kind == InitialWaveSpec::Kind::plane_wave) {
    WaveField exact = make_initial_wave(f, p);
    const double kx = commensurate_wavenumber(psi.grid.axis(0), f.initial.k[0]);
    const double ky =
        psi.grid.dimension() == 2 ? commensurate_wavenumber(psi.grid.axis(1), f.initial.k[1]) : 0.0;
    const double omega = p.hbar * (kx * kx + ky * ky) / (2 * p.mass);
    for (cplx& v : exact.values) v *= std::polar(1.0, -omega * psi.time);
    exact.time = psi.time;
    c.report.add(make_check("field.l2_error", l2_distance(psi, exact) / psi0.norm(), 0.0,
                            f.l2_tolerance, Comparison::absolute, wall));
  }
}

void run_field(Context& c) {
  if (!c.s.field) throw ScenarioError("the field pipeline needs a field section");
  const FieldSpec& f = *c.s.field;
  const auto t0 = Clock::now();
  const WaveField psi0 = make_initial_wave(f, c.s.physics);
  const WaveField psi = evolve(psi0, make_potential(f, c.s.physics), c.s.physics, f.dt, f.steps);
  add_field_checks(c, psi0, psi, f, seconds_since(t0));
  if (c.s.outputs.csv) write_wavefield_csv(c.file("wavefield.csv"), psi, c.s.physics);
  write_wavefield_binary(c.file("wavefield.bin"), psi);
}

void run_bohm_pipeline(Context& c) {
  if (!c.s.field || !c.s.bohm) throw ScenarioError("the bohm pipeline needs field and bohm sections");
  const FieldSpec& f = *c.s.field;
  const BohmSpec& b = *c.s.bohm;
  const PhysicalParams& p = c.s.physics;
  const auto t0 = Clock::now();
  const auto history = build_history(f, p);
  const double t_end = b.t_end.value_or(history->end());
  BohmOptions o;
  o.substeps = b.substeps;
  const auto paths = integrate_bohm_many(*history, b.starts, t_end, o);
  const double wall = seconds_since(t0);

  const int dim = history->grid().dimension();
  std::optional<double> worst;
  if (is_free_gaussian(f)) {
    const auto g = packets(f.initial.first);
    worst = 0.0;
    for (const BohmPath& path : paths)
      for (size_t n = 0; n < path.times.size(); ++n)
        for (int d = 0; d < dim; ++d) {
          const double exact = g[d].bohm_position(path.positions[0][d], path.times[n], p);
          worst = std::max(*worst, std::abs(path.positions[n][d] - exact));
        }
  } else if (f.initial.kind == InitialWaveSpec::Kind::plane_wave &&
             f.potential.kind == PotentialSpec::Kind::free) {
    worst = 0.0;
    for (const BohmPath& path : paths)
      for (size_t n = 0; n < path.times.size(); ++n)
        for (int d = 0; d < dim; ++d) {
          const double k = commensurate_wavenumber(history->grid().axis(d), f.initial.k[d]);
          const double exact = path.positions[0][d] + p.hbar * k / p.mass * path.times[n];
          worst = std::max(*worst, std::abs(path.positions[n][d] - exact));
        }
  }
  if (worst)
    c.report.add(make_check("bohm.path_error", *worst, 0.0, b.tolerance, Comparison::absolute, wall));
  if (dim == 1 && paths.size() >= 2) {
    long crossings = 0;
    for (size_t n = 0; n < paths[0].times.size(); ++n)
      for (size_t a = 0; a < paths.size(); ++a)
        for (size_t k = a + 1; k < paths.size(); ++k) {
          const double s0 = paths[k].positions[0][0] - paths[a].positions[0][0];
          const double sn = paths[k].positions[n][0] - paths[a].positions[n][0];
          if (s0 * sn <= 0.0) ++crossings;
        }
    c.report.add(make_check("bohm.no_crossing", double(crossings), 0.0, 0.0, Comparison::at_most, wall));
  }
  if (c.s.outputs.csv)
    for (size_t k = 0; k < paths.size(); ++k)
      write_bohm_csv(c.file("bohm_" + std::to_string(k) + ".csv"), paths[k]);
}

void convergence_checks(Context& c, ConvergenceTarget target, const ConvergenceResult& r,
                        double wall) {
  const ConvergeSpec spec = c.s.converge.value_or(ConvergeSpec{});
  const std::string id = std::string("converge.") + to_string(target);
  const auto& err = r.table.error;
  switch (target) {
    case ConvergenceTarget::coupled:
      c.report.add(make_check(id + ".slope", r.fit.slope, spec.expected_slope.value_or(1.0), 0.0,
                              Comparison::at_least, wall));
      break;
    case ConvergenceTarget::classical_dp:
      break;
    case ConvergenceTarget::hj_residual:
      for (size_t i = 1; i < err.size(); ++i)
        c.report.add(make_check(id + ".ratio_" + std::to_string(i), err[i - 1] / err[i], 4.0, 0.25,
                                Comparison::relative, wall));
      break;
    default: {
      double expected = 0.5;
      if (target == ConvergenceTarget::irregularity) expected = -0.5;
      if (target == ConvergenceTarget::dynkin || target == ConvergenceTarget::least_action)
        expected = 2.0;
      c.report.add(make_check(id + ".slope", r.fit.slope, spec.expected_slope.value_or(expected),
                              spec.slope_tolerance, Comparison::absolute, wall));
    }
  }
  if (target == ConvergenceTarget::coupled || target == ConvergenceTarget::classical_dp) {
    std::vector<double> e = err;
    c.report.add(make_check(id + ".monotone", strictly_decreasing(e) ? 1.0 : 0.0, 1.0, 0.0,
                            Comparison::at_least, wall));
  }
}

void run_converge_pipeline(Context& c, ConvergenceTarget target) {
  const auto t0 = Clock::now();
  const ConvergenceResult r = run_convergence(c.s, target);
  convergence_checks(c, target, r, seconds_since(t0));
  write_convergence(c.file("convergence.csv"), c.file("convergence.json"), r.table);
  if (target == ConvergenceTarget::classical_dp && c.s.outputs.csv)
    write_grid_action_csv(c.file("action.csv"),
                          classical_dp_table(c.s.converge.value_or(ConvergeSpec{}), c.s.physics.mass,
                                             c.s.sweeps.front()));
}

void run_coupled_pipeline(Context& c) {
  if (!c.s.field) throw ScenarioError("the coupled pipeline needs a field section");
  if (c.s.sweeps.size() >= 3 && c.s.converge) {
    run_converge_pipeline(c, ConvergenceTarget::coupled);
  }
  const auto t0 = Clock::now();
  std::shared_ptr<const FieldHistory> history;
  Scenario s = c.s;
  s.model.drift.kind = DriftConfig::Kind::field;
  ProcessConfig cfg = process_config(s, &history);
  BohmOptions o;
  o.substeps = s.bohm ? s.bohm->substeps : 8;
  const CoupledRun run = run_coupled(cfg, history, o);
  c.report.add(make_check("coupled.deviation_finite", std::isfinite(run.deviation) ? 1.0 : 0.0,
                          1.0, 0.0, Comparison::at_least, seconds_since(t0)));
  if (c.s.outputs.csv) write_coupled_csv(c.file("coupled.csv"), run);
}

}  // namespace

// ---------------------------------------------------------------------------

Pipeline pipeline_from_string(const std::string& s) {
  if (s == "simulate") return Pipeline::simulate;
  if (s == "observables") return Pipeline::observables;
  if (s == "field") return Pipeline::field;
  if (s == "bohm") return Pipeline::bohm;
  if (s == "coupled") return Pipeline::coupled;
  if (s == "converge") return Pipeline::converge;
  if (s == "verify") return Pipeline::verify;
  throw std::invalid_argument("unknown pipeline: " + s);
}

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::simulate: return "simulate";
    case Pipeline::observables: return "observables";
    case Pipeline::field: return "field";
    case Pipeline::bohm: return "bohm";
    case Pipeline::coupled: return "coupled";
    case Pipeline::converge: return "converge";
    case Pipeline::verify: return "verify";
  }
  return "simulate";
}

ConvergenceTarget target_from_string(const std::string& s) {
  if (s == "process") return ConvergenceTarget::process;
  if (s == "irregularity") return ConvergenceTarget::irregularity;
  if (s == "dynkin") return ConvergenceTarget::dynkin;
  if (s == "hj_residual") return ConvergenceTarget::hj_residual;
  if (s == "least_action") return ConvergenceTarget::least_action;
  if (s == "classical_dp") return ConvergenceTarget::classical_dp;
  if (s == "coupled") return ConvergenceTarget::coupled;
  throw ScenarioError("unknown convergence target: " + s);
}

const char* to_string(ConvergenceTarget t) {
  switch (t) {
    case ConvergenceTarget::process: return "process";
    case ConvergenceTarget::irregularity: return "irregularity";
    case ConvergenceTarget::dynkin: return "dynkin";
    case ConvergenceTarget::hj_residual: return "hj_residual";
    case ConvergenceTarget::least_action: return "least_action";
    case ConvergenceTarget::classical_dp: return "classical_dp";
    case ConvergenceTarget::coupled: return "coupled";
  }
  return "process";
}

Scenario apply_overrides(Scenario s, const RunOptions& options) {
  if (options.epsilon) s.physics.epsilon = *options.epsilon;
  if (options.orientation) s.model.orientation = *options.orientation;
  if (options.out) s.outputs.directory = *options.out;
  s.validate();
  return s;
}

double classical_deviation(const ProcessConfig& cfg) {
  const ProcessTrajectory traj = run_process(cfg);
  const ClassicalPath path = classical_limit(cfg);
  double worst = 0.0;
  for (long n = 0; n <= traj.steps(); ++n)
    for (int j = 0; j < traj.frame.size(); ++j)
      worst = std::max(worst, max_abs(traj.points[j][n] - path.positions[n]));
  return worst;
}

double fluctuation_velocity_rms(const ProcessTrajectory& traj) {
  const double eps = traj.params.epsilon;
  double sum = 0.0;
  long count = 0;
  for (int j = 0; j < traj.frame.size(); ++j)
    for (long n = 1; n <= traj.steps(); ++n) {
      const ComplexPoint w = traj.deviation(j, n) - traj.deviation(j, n - 1);
      double s = 0.0;
      for (int k = 0; k < w.dimension(); ++k) s += std::norm(w[k]);
      sum += s / (eps * eps);
      ++count;
    }
  return std::sqrt(sum / double(count));
}

TestFunction named_test_function(const std::string& name) {
  TestFunction f;
  f.name = name;
  f.dimension = 2;
  const cplx i(0.0, 1.0);
  if (name == "z1^2") {
    f.value = [](const ComplexPoint& z, double) { return z[0] * z[0]; };
    f.gradient = [](const ComplexPoint& z, double) { return ComplexPoint(2.0 * z[0], cplx{}); };
    f.laplacian = [](const ComplexPoint&, double) { return cplx(2.0); };
    f.time_derivative = [](const ComplexPoint&, double) { return cplx{}; };
  } else if (name == "z1^2+z2^2") {
    f.value = [](const ComplexPoint& z, double) { return z[0] * z[0] + z[1] * z[1]; };
    f.gradient = [](const ComplexPoint& z, double) { return ComplexPoint(2.0 * z[0], 2.0 * z[1]); };
    f.laplacian = [](const ComplexPoint&, double) { return cplx(4.0); };
    f.time_derivative = [](const ComplexPoint&, double) { return cplx{}; };
  } else if (name == "exp(0.5z1-0.3iz2)") {
    const cplx a = 0.5, b = -0.3 * i;
    f.value = [a, b](const ComplexPoint& z, double) { return std::exp(a * z[0] + b * z[1]); };
    f.gradient = [a, b](const ComplexPoint& z, double) {
      const cplx e = std::exp(a * z[0] + b * z[1]);
      return ComplexPoint(a * e, b * e);
    };
    f.laplacian = [a, b](const ComplexPoint& z, double) {
      return (a * a + b * b) * std::exp(a * z[0] + b * z[1]);
    };
    f.time_derivative = [](const ComplexPoint&, double) { return cplx{}; };
  } else if (name == "z1^3z2+tz1") {
    f.value = [](const ComplexPoint& z, double t) { return z[0] * z[0] * z[0] * z[1] + t * z[0]; };
    f.gradient = [](const ComplexPoint& z, double t) {
      return ComplexPoint(3.0 * z[0] * z[0] * z[1] + t, z[0] * z[0] * z[0]);
    };
    f.laplacian = [](const ComplexPoint& z, double) { return 6.0 * z[0] * z[1]; };
    f.time_derivative = [](const ComplexPoint& z, double) { return z[0]; };
  } else {
    throw ScenarioError("unknown test function: " + name);
  }
  return f;
}

GridAction classical_dp_table(const ConvergeSpec& spec, double mass, double epsilon) {
  const double dx = spec.dt_ratio * epsilon;
  const double lo = spec.domain[0], hi = spec.domain[1];
  const long nodes = std::lround((hi - lo) / dx) + 1;
  std::vector<double> x(static_cast<size_t>(nodes)), s0(x.size());
  for (long i = 0; i < nodes; ++i) {
    x[i] = lo + double(i) * dx;
    s0[i] = spec.p0 * x[i] + 0.5 * spec.kappa * x[i] * x[i];
  }
  const long steps = std::lround(spec.t_end / epsilon);
  LagrangianSpec lag;
  lag.mass = mass;
  DpOptions opt;
  opt.velocity_bound = spec.velocity_bound;
  return classical_hj_dp(lag, x, s0, epsilon, steps, opt);
}

double classical_dp_error(const ConvergeSpec& spec, double mass, double epsilon) {
  const GridAction a = classical_dp_table(spec, mass, epsilon);
  const std::vector<double>& x = a.x;
  const double t = a.times.back();
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > spec.window) continue;
    const double y = (x[i] - spec.p0 * t / mass) / (1.0 + spec.kappa * t / mass);
    const double u = (spec.p0 + spec.kappa * y) / mass;
    const double exact = spec.p0 * y + 0.5 * spec.kappa * y * y + 0.5 * mass * u * u * t;
    worst = std::max(worst, std::abs(a.values.back()[i] - exact));
  }
  return worst;
}

ConvergenceResult run_convergence(const Scenario& s, ConvergenceTarget target) {
  validate_sweep(s.sweeps);
  const ConvergeSpec spec = s.converge.value_or(ConvergeSpec{});
  Scenario sc = s;
  sc.converge = spec;
  std::vector<double> errors;
  switch (target) {
    case ConvergenceTarget::process:
    case ConvergenceTarget::irregularity: {
      const ProcessConfig base = make_process_config(sc);
      errors = parallel_sweep(sc.sweeps, [&](double eps) {
        ProcessConfig cfg = base;
        cfg.params.epsilon = eps;
        cfg.steps = steps_for(spec.t_end, eps, cfg.frame.period());
        return target == ConvergenceTarget::process ? classical_deviation(cfg)
                                                    : fluctuation_velocity_rms(run_process(cfg));
      });
      break;
    }
    case ConvergenceTarget::dynkin: {
      const ProcessConfig base = make_process_config(sc);
      const TestFunction f = named_test_function(spec.function);
      errors = parallel_sweep(sc.sweeps, [&](double eps) {
        ProcessConfig cfg = base;
        cfg.params.epsilon = eps;
        const long q = std::max(1L, std::lround(spec.t_end / (4 * eps)));
        return four_point_residual(f, cfg, q);
      });
      break;
    }
    case ConvergenceTarget::hj_residual:
      errors = parallel_sweep(sc.sweeps, [&](double h) { return hj_error(sc, h); });
      break;
    case ConvergenceTarget::least_action:
      errors = parallel_sweep(sc.sweeps, [&](double eps) { return least_action_error(sc, eps); });
      break;
    case ConvergenceTarget::classical_dp:
      errors = parallel_sweep(sc.sweeps, [&](double eps) {
        return classical_dp_error(spec, sc.physics.mass, eps);
      });
      break;
    case ConvergenceTarget::coupled: {
      if (!sc.field) throw ScenarioError("coupled convergence needs a field section");
      const auto history = build_history(*sc.field, sc.physics);
      errors = parallel_sweep(sc.sweeps,
                              [&](double eps) { return coupled_error(sc, history, eps); });
      break;
    }
  }
  ConvergenceResult r;
  r.table.target = to_string(target);
  r.table.epsilon = sc.sweeps;
  r.table.error = errors;
  r.fit = fit_loglog(sc.sweeps, errors);
  r.table.slope = r.fit.slope;
  r.table.intercept = r.fit.intercept;
  return r;
}

RunReport run_scenario(const Scenario& scenario, Pipeline pipeline, const RunOptions& options) {
  const Scenario s = apply_overrides(scenario, options);
  Context c{s, s.outputs.directory / s.name, {}};
  c.report.scenario = s.name;
  fs::create_directories(c.dir);
  switch (pipeline) {
    case Pipeline::simulate: run_simulate(c); break;
    case Pipeline::observables: run_observables(c); break;
    case Pipeline::field: run_field(c); break;
    case Pipeline::bohm: run_bohm_pipeline(c); break;
    case Pipeline::coupled: run_coupled_pipeline(c); break;
    case Pipeline::converge:
      if (!s.converge) throw ScenarioError("the converge pipeline needs a converge section");
      run_converge_pipeline(c, target_from_string(s.converge->target));
      break;
    case Pipeline::verify: {
      RunReport r = run_acceptance();
      r.scenario = s.name;
      c.report = std::move(r);
      break;
    }
  }
  write_report_json(c.file("report.json"), c.report);
  return c.report;
}

}  // namespace epm
