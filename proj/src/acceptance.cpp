#include "epm/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "epm/bohm.hpp"
#include "epm/harness.hpp"
#include "epm/observables.hpp"
#include "epm/reference.hpp"
#include "epm/variational.hpp"

namespace epm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckRecord runtime_check(const std::string& id, Clock::time_point t0, double limit) {
  const double wall = seconds_since(t0);
  return make_check(id, wall, limit, 0.0, Comparison::at_most, wall);
}

/// Randomised 2D process configurations shared by the spin and uncertainty
/// criteria: hbar, m in [0.5, 2], eps in [1e-3, 0.1], |z0| <= 1 and a
/// linear drift a + b t with |a|, |b| <= 1.
std::vector<ProcessConfig> random_configs_2d(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), scale(0.5, 2.0), loge(-3.0, -1.0);
  auto c = [&] { return cplx(unit(rng), unit(rng)) / std::sqrt(2.0); };
  std::vector<ProcessConfig> out;
  for (int k = 0; k < count; ++k) {
    ProcessConfig cfg;
    cfg.params.hbar = scale(rng);
    cfg.params.mass = scale(rng);
    cfg.params.epsilon = std::pow(10.0, loge(rng));
    cfg.frame = VertexFrame::square(k % 2 == 0 ? Orientation::plus : Orientation::minus);
    cfg.z0 = ComplexPoint(c(), c());
    const ComplexPoint a(c(), c()), b(c(), c());
    cfg.drift = DriftSpec::closed_form([a, b](double t) { return a + b * t; }, "a + b t");
    cfg.steps = 4 * 6;
    out.push_back(cfg);
  }
  return out;
}

Scenario base_scenario(const std::string& name, int dim) {
  Scenario s;
  s.name = name;
  s.model.dimension = dim;
  s.model.z0 = ComplexPoint::zero(dim);
  s.model.drift.a = s.model.drift.b = ComplexPoint::zero(dim);
  return s;
}

FieldSpec gaussian_field_1d(double lo, double hi, int nodes, GaussianSpec g) {
  FieldSpec f;
  f.axes = {Axis{lo, hi, nodes}};
  f.initial.kind = InitialWaveSpec::Kind::gaussian;
  f.initial.first = g;
  return f;
}

}  // namespace

bool Criterion::passed() const {
  if (checks.empty()) return false;
  for (const CheckRecord& c : checks)
    if (!c.passed) return false;
  return true;
}

Criterion accept_spin() {
  Criterion cr{"spin", "intrinsic spin -hbar/2 (s+) and +hbar/2 (s-)", {}};
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const ProcessConfig& cfg : random_configs_2d(20, 0x51)) {
    const ProcessTrajectory traj = run_process(cfg);
    const double expected =
        (cfg.frame.orientation() == Orientation::plus ? -0.5 : 0.5) * cfg.params.hbar;
    for (long q = 0; q < 6; ++q) {
      const SpinReport s = spin_z(traj, q);
      worst = std::max(worst, std::abs(s.intrinsic - expected) / std::abs(expected));
    }
  }
  cr.checks.push_back(make_check("relative_error", worst, 0.0, 1e-12, Comparison::absolute,
                                 seconds_since(t0), "20 random configs, 6 periods each"));
  cr.checks.push_back(runtime_check("runtime_s", t0, 1.0));
  return cr;
}

Criterion accept_heisenberg_2d() {
  Criterion cr{"heisenberg_2d", "2D increment-momentum product hbar/2", {}};
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const ProcessConfig& cfg : random_configs_2d(20, 0x51)) {
    const ProcessTrajectory traj = run_process(cfg);
    const double expected = 0.5 * cfg.params.hbar;
    for (long q = 0; q < 5; ++q) {
      const PeriodStats st = uncertainty_stats(traj, q, MomentumForm::increment);
      for (int k = 0; k < 2; ++k)
        worst = std::max(worst, std::abs(st.product[k] - expected) / expected);
    }
  }
  cr.checks.push_back(make_check("relative_error", worst, 0.0, 1e-12, Comparison::absolute,
                                 seconds_since(t0), "both axes, 20 random configs"));
  cr.checks.push_back(runtime_check("runtime_s", t0, 1.0));
  return cr;
}

Criterion accept_moments_1d() {
  Criterion cr{"moments_1d", "1D increment moments and a parameter-free product constant", {}};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(0x1d);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), scale(0.5, 2.0), loge(-3.0, -1.0);
  double mean_err = 0.0, diag_err = 0.0, c_min = 1e300, c_max = -1e300;
  for (int k = 0; k < 20; ++k) {
    ProcessConfig cfg;
    cfg.params.hbar = scale(rng);
    cfg.params.mass = scale(rng);
    cfg.params.epsilon = std::pow(10.0, loge(rng));
    cfg.frame = VertexFrame::line();
    cfg.z0 = ComplexPoint(cplx(unit(rng), unit(rng)));
    cfg.drift = DriftSpec::constant(ComplexPoint(cplx(unit(rng), unit(rng))));
    cfg.steps = 2 * 6;
    const ProcessTrajectory traj = run_process(cfg);
    const cplx g = gamma(cfg.params, 1);
    const cplx diag = 4.0 * g * g;
    for (long q = 0; q < 5; ++q) {
      const IncrementMoments m = increment_moments(traj, q);
      for (int j = 0; j < m.size; ++j) {
        mean_err = std::max(mean_err, max_abs(m.mean_increment[j]) / std::abs(g));
        diag_err = std::max(diag_err, std::abs(m.cov(j, j) - diag) / std::abs(diag));
      }
      const double c = uncertainty_stats(traj, q).product[0] / cfg.params.hbar;
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
    }
  }
  const double wall = seconds_since(t0);
  cr.checks.push_back(make_check("mean_increment", mean_err, 0.0, 1e-12, Comparison::absolute, wall,
                                 "max |E dw| / |gamma|"));
  cr.checks.push_back(make_check("second_moment", diag_err, 0.0, 1e-12, Comparison::absolute, wall,
                                 "relative error of E dw^2 against 4 gamma^2"));
  cr.checks.push_back(make_check("product_constant_spread", (c_max - c_min) / c_max, 0.0, 1e-12,
                                 Comparison::absolute, wall,
                                 "C = " + std::to_string(c_max) + "; differs from 1/2 by " +
                                     std::to_string(c_max - 0.5)));
  return cr;
}

namespace {

Scenario process_sweep_scenario(const std::string& name) {
  Scenario s = base_scenario(name, 2);
  s.model.z0 = ComplexPoint(cplx(0.2, -0.1), cplx(-0.3, 0.05));
  s.model.drift.kind = DriftConfig::Kind::constant;
  s.model.drift.a = ComplexPoint(cplx(0.7, 0.2), cplx(-0.4, 0.1));
  s.sweeps = {1e-2, 1e-3, 1e-4, 1e-5};
  s.converge = ConvergeSpec{};
  s.converge->t_end = 1.0;
  return s;
}

}  // namespace

Criterion accept_convergence_order() {
  Criterion cr{"convergence_order", "sup |z^j - classical| ~ eps^(1/2)", {}};
  const auto t0 = Clock::now();
  const ConvergenceResult r =
      run_convergence(process_sweep_scenario("process-order"), ConvergenceTarget::process);
  cr.checks.push_back(make_check("slope", r.fit.slope, 0.5, 0.05, Comparison::absolute,
                                 seconds_since(t0)));
  cr.checks.push_back(runtime_check("runtime_s", t0, 10.0));
  return cr;
}

Criterion accept_path_irregularity() {
  Criterion cr{"path_irregularity", "RMS fluctuation velocity ~ eps^(-1/2)", {}};
  const auto t0 = Clock::now();
  const ConvergenceResult r =
      run_convergence(process_sweep_scenario("irregularity"), ConvergenceTarget::irregularity);
  cr.checks.push_back(make_check("slope", r.fit.slope, -0.5, 0.05, Comparison::absolute,
                                 seconds_since(t0)));
  return cr;
}

Criterion accept_dynkin_residual() {
  Criterion cr{"dynkin_residual", "four-point Dynkin residual ~ eps^2", {}};
  const auto t0 = Clock::now();
  for (const char* name : {"z1^2+z2^2", "exp(0.5z1-0.3iz2)", "z1^3z2+tz1"}) {
    Scenario s = base_scenario("dynkin", 2);
    s.model.z0 = ComplexPoint(cplx(0.3, 0.1), cplx(-0.2, 0.2));
    s.model.drift.a = ComplexPoint(cplx(0.5, -0.2), cplx(0.3, 0.4));
    s.sweeps = {1e-2, 1e-3, 1e-4};
    s.converge = ConvergeSpec{};
    s.converge->t_end = 0.2;
    s.converge->function = name;
    const auto t1 = Clock::now();
    const ConvergenceResult r = run_convergence(s, ConvergenceTarget::dynkin);
    cr.checks.push_back(make_check(std::string("slope[") + name + "]", r.fit.slope, 2.0, 0.1,
                                   Comparison::absolute, seconds_since(t1)));
  }
  cr.checks.push_back(runtime_check("runtime_s", t0, 10.0));
  return cr;
}

Criterion accept_schrodinger() {
  Criterion cr{"schrodinger", "split-step free Gaussian accuracy and unitarity", {}};
  const auto t0 = Clock::now();
  PhysicalParams p;
  const GaussianPacket g{1.0, -2.0, 0.5};
  const Grid grid = Grid::line(-40.0, 40.0, 1024);
  const double t_end = 4.0;
  const long steps = 10000;
  const WaveField psi0 = sample_gaussian(grid, g, 0.0, p);
  const WaveField psi = evolve(psi0, free_potential(), p, t_end / steps, steps);
  const double wall = seconds_since(t0);
  const WaveField exact = sample_gaussian(grid, g, psi.time, p);
  cr.checks.push_back(make_check("width_growth", g.width(t_end, p) / g.sigma0, 2.0, 0.0,
                                 Comparison::at_least, wall));
  cr.checks.push_back(make_check("l2_error", l2_distance(psi, exact), 0.0, 1e-6,
                                 Comparison::absolute, wall));
  cr.checks.push_back(make_check("norm_drift", std::abs(psi.norm() - psi0.norm()), 0.0, 1e-10,
                                 Comparison::absolute, wall, "10^4 steps"));
  cr.checks.push_back(runtime_check("runtime_s", t0, 30.0));
  return cr;
}

Criterion accept_complex_hj() {
  Criterion cr{"complex_hj", "complex second-order HJ residual ratio 4 under h -> h/2", {}};
  const auto t0 = Clock::now();
  Scenario s = base_scenario("complex-hj", 1);
  s.field = gaussian_field_1d(-16.0, 16.0, 64, GaussianSpec{1.0, {0.5, 0.0}, {0.8, 0.0}});
  s.sweeps = {0.5, 0.25, 0.125};
  s.converge = ConvergeSpec{};
  s.converge->t_end = 1.0;
  s.converge->dt_ratio = 0.5;
  const ConvergenceResult r = run_convergence(s, ConvergenceTarget::hj_residual);
  const auto& e = r.table.error;
  for (size_t i = 1; i < e.size(); ++i)
    cr.checks.push_back(make_check("ratio_h" + std::to_string(i), e[i - 1] / e[i], 4.0, 0.25,
                                   Comparison::relative, seconds_since(t0)));
  return cr;
}

Criterion accept_least_action() {
  Criterion cr{"least_action", "generalised least-action one-step residual ~ eps^2", {}};
  const auto t0 = Clock::now();
  Scenario s = base_scenario("least-action", 2);
  FieldSpec f;
  f.axes = {Axis{-12.0, 12.0, 128}, Axis{-12.0, 12.0, 128}};
  f.initial.kind = InitialWaveSpec::Kind::gaussian;
  f.initial.first = GaussianSpec{1.0, {0.5, -0.25}, {0.4, -0.3}};
  s.field = f;
  s.sweeps = {0.02, 0.01, 0.005, 0.0025};
  s.converge = ConvergeSpec{};
  s.converge->t_end = 0.4;
  const ConvergenceResult r = run_convergence(s, ConvergenceTarget::least_action);
  cr.checks.push_back(make_check("slope", r.fit.slope, 2.0, 0.2, Comparison::absolute,
                                 seconds_since(t0)));
  return cr;
}

Criterion accept_bohm() {
  Criterion cr{"bohm", "Bohm paths against the analytic Gaussian and plane-wave flows", {}};
  const auto t0 = Clock::now();
  PhysicalParams p;
  const Grid grid = Grid::line(-40.0, 40.0, 1024);
  {
    const GaussianPacket g{1.0, 0.0, 0.0};
    const double dt = 0.005;
    const auto history = FieldHistory::record(sample_gaussian(grid, g, 0.0, p), free_potential(),
                                              p, dt, 1, 801);
    const std::vector<std::array<double, 2>> starts{{-1.5, 0}, {0.5, 0}, {1.0, 0}, {2.0, 0}};
    double worst = 0.0;
    for (const BohmPath& path : integrate_bohm_many(history, starts, history.end()))
      for (size_t n = 0; n < path.times.size(); ++n)
        worst = std::max(worst, std::abs(path.positions[n][0] -
                                         g.bohm_position(path.positions[0][0], path.times[n], p)));
    cr.checks.push_back(make_check("gaussian_error", worst, 0.0, 1e-4, Comparison::absolute,
                                   seconds_since(t0), "t in [0, 4], 4 starting points"));
  }
  {
    const PlaneWave w{commensurate_wavenumber(grid.axis(0), 0.6)};
    const auto history = FieldHistory::record(sample_plane_wave(grid, w, 0.0, p), free_potential(),
                                              p, 0.01, 1, 201);
    const BohmPath path = integrate_bohm(history, {0.3, 0.0}, history.end());
    double worst = 0.0;
    for (size_t n = 0; n < path.times.size(); ++n)
      worst = std::max(worst, std::abs(path.positions[n][0] - (0.3 + w.velocity(p) * path.times[n])));
    cr.checks.push_back(make_check("plane_wave_error", worst, 0.0, 1e-10, Comparison::absolute,
                                   seconds_since(t0)));
  }
  cr.checks.push_back(runtime_check("runtime_s", t0, 30.0));
  return cr;
}

Criterion accept_coupled() {
  Criterion cr{"coupled", "Re(mean) of the field-coupled process tracks the Bohm path", {}};
  const auto t0 = Clock::now();
  Scenario s = base_scenario("coupled", 1);
  s.model.z0 = ComplexPoint(cplx(1.0, 0.0));
  FieldSpec f = gaussian_field_1d(-40.0, 40.0, 1024, GaussianSpec{1.0, {0.0, 0.0}, {0.5, 0.0}});
  f.dt = 0.01;
  f.stride = 4;
  f.steps = 200;
  s.field = f;
  s.sweeps = {1e-2, 1e-3, 1e-4};
  s.converge = ConvergeSpec{};
  s.converge->t_end = 2.0;
  const ConvergenceResult r = run_convergence(s, ConvergenceTarget::coupled);
  const double wall = seconds_since(t0);
  cr.checks.push_back(make_check("monotone", strictly_decreasing(r.table.error) ? 1.0 : 0.0, 1.0,
                                 0.0, Comparison::at_least, wall));
  cr.checks.push_back(make_check("slope", r.fit.slope, 1.0, 0.0, Comparison::at_least, wall));
  return cr;
}

Criterion accept_classical_dp() {
  Criterion cr{"classical_dp", "Bellman recursion converges to the free-particle action", {}};
  const auto t0 = Clock::now();
  ConvergeSpec spec;
  spec.t_end = 0.6;
  spec.dt_ratio = 1.0;
  std::vector<double> errors;
  std::vector<double> eps{0.04, 0.02, 0.01};
  for (double e : eps) errors.push_back(classical_dp_error(spec, 1.0, e));
  cr.checks.push_back(make_check("monotone", strictly_decreasing(errors) ? 1.0 : 0.0, 1.0, 0.0,
                                 Comparison::at_least, seconds_since(t0)));

  // Linear initial action S0 = p0 x at the finest level: u = p0 / m everywhere.
  const double e = eps.back();
  std::vector<double> x, s0;
  for (long i = 0; i <= std::lround(6.0 / e); ++i) {
    x.push_back(-3.0 + double(i) * e);
    s0.push_back(spec.p0 * x.back());
  }
  LagrangianSpec lag;
  DpOptions opt;
  opt.velocity_bound = spec.velocity_bound;
  const GridAction a = classical_hj_dp(lag, x, s0, e, std::lround(spec.t_end / e), opt);
  const auto v = velocity_from_action(a, a.times.size() - 1, lag.mass);
  double worst = 0.0;
  for (double u : v) worst = std::max(worst, std::abs(u - spec.p0 / lag.mass));
  cr.checks.push_back(make_check("velocity_error", worst, 0.0, 1e-3, Comparison::absolute,
                                 seconds_since(t0)));
  return cr;
}

Criterion accept_compton() {
  Criterion cr{"compton", "electron Compton time step", {}};
  const auto t0 = Clock::now();
  PhysicalParams p;
  p.hbar = 1.054571817e-34;
  p.mass = 9.1093837015e-31;
  p.light_speed = 299792458.0;
  // h / (4 m c^2) with h = 6.62607015e-34 J s.
  const double oracle_2d = 6.62607015e-34 / (4.0 * 9.1093837015e-31 * 299792458.0 * 299792458.0);
  cr.checks.push_back(make_check("epsilon_2d", compton_timestep(p, 2), oracle_2d, 1e-6,
                                 Comparison::relative, seconds_since(t0)));
  cr.checks.push_back(make_check("epsilon_1d", compton_timestep(p, 1), 2.0 * oracle_2d, 1e-6,
                                 Comparison::relative, seconds_since(t0)));
  return cr;
}

std::vector<Criterion> acceptance_suite() {
  std::vector<Criterion> out;
  int index = 0;
  for (auto fn : {accept_spin, accept_heisenberg_2d, accept_moments_1d, accept_convergence_order,
                  accept_path_irregularity, accept_dynkin_residual, accept_schrodinger,
                  accept_complex_hj, accept_least_action, accept_bohm, accept_coupled,
                  accept_classical_dp, accept_compton}) {
    ++index;
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      Criterion failed{"criterion_" + std::to_string(index), e.what(), {}};
      failed.checks.push_back(make_check("exception", std::nan(""), 0.0, 0.0, Comparison::absolute,
                                         0.0, e.what()));
      out.push_back(std::move(failed));
    }
  }
  return out;
}

RunReport to_report(const std::vector<Criterion>& criteria) {
  RunReport r;
  r.scenario = "acceptance";
  for (const Criterion& c : criteria)
    for (CheckRecord chk : c.checks) {
      chk.id = c.id + "." + chk.id;
      r.add(std::move(chk));
    }
  return r;
}

RunReport run_acceptance() { return to_report(acceptance_suite()); }

}  // namespace epm
