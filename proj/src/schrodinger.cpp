#include "epm/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectral.hpp"
#include "stencil.hpp"

namespace epm {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double wrap_phase(double d, double period) { return d - period * std::round(d / period); }

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) throw std::invalid_argument("Grid: 1 or 2 axes");
  for (const Axis& a : axes_) {
    if (!(a.max > a.min)) throw std::invalid_argument("Grid: axis max must exceed min");
    if (a.nodes < 64 || !is_power_of_two(a.nodes))
      throw std::invalid_argument("Grid: node count must be a power of two >= 64");
  }
}

size_t Grid::size() const {
  size_t n = 1;
  for (const Axis& a : axes_) n *= static_cast<size_t>(a.nodes);
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const Axis& a : axes_) v *= a.spacing();
  return v;
}

size_t Grid::index(int ix, int iy) const {
  if (dimension() == 1) return static_cast<size_t>(ix);
  return static_cast<size_t>(ix) * static_cast<size_t>(axes_[1].nodes) + static_cast<size_t>(iy);
}

std::array<int, 2> Grid::unravel(size_t idx) const {
  if (dimension() == 1) return {static_cast<int>(idx), 0};
  const auto ny = static_cast<size_t>(axes_[1].nodes);
  return {static_cast<int>(idx / ny), static_cast<int>(idx % ny)};
}

std::array<double, 2> Grid::coords(size_t idx) const {
  const auto ij = unravel(idx);
  if (dimension() == 1) return {axes_[0].coord(ij[0]), 0.0};
  return {axes_[0].coord(ij[0]), axes_[1].coord(ij[1])};
}

size_t Grid::shifted(size_t idx, int dx, int dy) const {
  auto ij = unravel(idx);
  const int nx = axes_[0].nodes;
  ij[0] = ((ij[0] + dx) % nx + nx) % nx;
  if (dimension() == 1) return static_cast<size_t>(ij[0]);
  const int ny = axes_[1].nodes;
  ij[1] = ((ij[1] + dy) % ny + ny) % ny;
  return index(ij[0], ij[1]);
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (size_t k = 0; k < a.axes_.size(); ++k)
    if (a.axes_[k].min != b.axes_[k].min || a.axes_[k].max != b.axes_[k].max ||
        a.axes_[k].nodes != b.axes_[k].nodes)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Wave fields

double WaveField::norm() const {
  double s = 0.0;
  for (const cplx& v : values) s += std::norm(v);
  return std::sqrt(s * grid.cell_volume());
}

WaveField sample_wavefield(const Grid& grid, double time,
                           const std::function<cplx(double, double)>& psi) {
  WaveField w{grid, time, std::vector<cplx>(grid.size())};
  for (size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.coords(i);
    w.values[i] = psi(x[0], x[1]);
  }
  return w;
}

double l2_distance(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("l2_distance: grids differ");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

Potential free_potential() {
  return {[](double, double, double) { return 0.0; }, false, "free"};
}

Potential constant_potential(double v) {
  return {[v](double, double, double) { return v; }, false, "constant"};
}

Potential harmonic_potential(double mass, double omega) {
  const double k = 0.5 * mass * omega * omega;
  return {[k](double x, double y, double) { return k * (x * x + y * y); }, false, "harmonic"};
}

// ---------------------------------------------------------------------------
// Split-step solver

struct SplitStepSolver::Impl {
  Grid grid;
  Potential potential;
  PhysicalParams params;
  double dt;
  detail::SpectralPlan plan;
  std::vector<cplx> kinetic;
  std::vector<cplx> half_potential;  // only for static potentials
  mutable std::vector<cplx> scratch;

  Impl(const Grid& g, Potential v, const PhysicalParams& p, double step)
      : grid(g), potential(std::move(v)), params(p), dt(step), plan(shape(g)) {
    const double inv_n = 1.0 / double(grid.size());
    const double c = params.hbar * dt / (2.0 * params.mass);
    kinetic.resize(grid.size());
    const auto kx = detail::wavenumbers(grid.axis(0).nodes, grid.axis(0).length());
    std::vector<double> ky{0.0};
    if (grid.dimension() == 2) ky = detail::wavenumbers(grid.axis(1).nodes, grid.axis(1).length());
    for (size_t i = 0; i < grid.size(); ++i) {
      const auto ij = grid.unravel(i);
      const double k2 = kx[ij[0]] * kx[ij[0]] + ky[ij[1]] * ky[ij[1]];
      kinetic[i] = std::polar(inv_n, -c * k2);
    }
    if (!potential.time_dependent) half_potential = potential_phase(0.0);
  }

  static std::vector<int> shape(const Grid& g) {
    std::vector<int> s;
    for (const Axis& a : g.axes()) s.push_back(a.nodes);
    return s;
  }

  std::vector<cplx> potential_phase(double t) const {
    std::vector<cplx> ph(grid.size());
    const double c = 0.5 * dt / params.hbar;
    for (size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.coords(i);
      ph[i] = std::polar(1.0, -c * potential(x[0], x[1], t));
    }
    return ph;
  }

  void step(WaveField& psi) const {
    const std::vector<cplx>* half = &half_potential;
    std::vector<cplx> local;
    if (potential.time_dependent) {
      local = potential_phase(psi.time + 0.5 * dt);
      half = &local;
    }
    auto& v = psi.values;
    for (size_t i = 0; i < v.size(); ++i) v[i] *= (*half)[i];
    plan.forward(v);
    for (size_t i = 0; i < v.size(); ++i) v[i] *= kinetic[i];
    plan.backward(v);
    for (size_t i = 0; i < v.size(); ++i) v[i] *= (*half)[i];
    psi.time += dt;
  }
};

SplitStepSolver::SplitStepSolver(const Grid& grid, Potential potential,
                                 const PhysicalParams& params, double dt) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("SplitStepSolver: dt must be > 0");
  if (!potential.value) throw std::invalid_argument("SplitStepSolver: potential missing");
  impl_ = std::make_unique<Impl>(grid, std::move(potential), params, dt);
}

SplitStepSolver::~SplitStepSolver() = default;
SplitStepSolver::SplitStepSolver(SplitStepSolver&&) noexcept = default;
SplitStepSolver& SplitStepSolver::operator=(SplitStepSolver&&) noexcept = default;

void SplitStepSolver::step(WaveField& psi) const {
  if (!(psi.grid == impl_->grid)) throw std::invalid_argument("SplitStepSolver: grid mismatch");
  impl_->step(psi);
}

void SplitStepSolver::advance(WaveField& psi, long steps) const {
  if (!(psi.grid == impl_->grid)) throw std::invalid_argument("SplitStepSolver: grid mismatch");
  for (long s = 0; s < steps; ++s) impl_->step(psi);
}

double SplitStepSolver::dt() const { return impl_->dt; }

WaveField evolve(const WaveField& psi0, const Potential& potential, const PhysicalParams& params,
                 double dt, long steps) {
  if (dt < 0.0 || steps < 0) throw std::invalid_argument("evolve: dt and steps must be >= 0");
  WaveField psi = psi0;
  if (dt == 0.0 || steps == 0) return psi;
  SplitStepSolver solver(psi0.grid, potential, params, dt);
  solver.advance(psi, steps);
  return psi;
}

// ---------------------------------------------------------------------------
// Phase decomposition

cplx PhaseDecomposition::reassemble(size_t idx) const {
  return std::exp(cplx(0.0, 1.0) * complex_action[idx] / hbar);
}

std::vector<std::uint8_t> density_mask(const WaveField& psi, double rho_floor) {
  double peak = 0.0;
  for (const cplx& v : psi.values) peak = std::max(peak, std::norm(v));
  std::vector<std::uint8_t> valid(psi.values.size(), 0);
  const double floor = rho_floor * peak;
  for (size_t i = 0; i < psi.values.size(); ++i)
    valid[i] = peak > 0.0 && std::norm(psi.values[i]) >= floor && std::norm(psi.values[i]) > 0.0;
  return valid;
}

PhaseDecomposition decompose(const WaveField& psi, const PhysicalParams& params,
                             double rho_floor) {
  const Grid& g = psi.grid;
  const size_t n = g.size();
  for (const cplx& v : psi.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("decompose: wave field is not finite");

  PhaseDecomposition d;
  d.grid = g;
  d.time = psi.time;
  d.hbar = params.hbar;
  d.rho.resize(n);
  d.phase.assign(n, 0.0);
  d.log_rho.assign(n, 0.0);
  d.complex_action.assign(n, cplx{});
  d.valid = density_mask(psi, rho_floor);
  if (std::none_of(d.valid.begin(), d.valid.end(), [](std::uint8_t v) { return v != 0; }))
    throw MaskedNodeError("decompose: every node is below the density floor");

  size_t seed = 0;
  for (size_t i = 0; i < n; ++i) {
    d.rho[i] = std::norm(psi.values[i]);
    if (d.rho[i] > d.rho[seed]) seed = i;
  }

  const double hbar = params.hbar;
  auto step_phase = [&](size_t from, size_t to) {
    const cplx a = psi.values[from], b = psi.values[to];
    const double inc = (a == cplx{} || b == cplx{}) ? 0.0 : std::arg(b / a);
    d.phase[to] = d.phase[from] + hbar * inc;
  };
  auto unwrap_line = [&](size_t start, int axis) {
    const int count = g.axis(axis).nodes;
    const int pos = g.unravel(start)[axis];
    size_t cur = start;
    for (int i = pos + 1; i < count; ++i) {
      const size_t next = detail::axis_shift(g, cur, axis, 1);
      step_phase(cur, next);
      cur = next;
    }
    cur = start;
    for (int i = pos - 1; i >= 0; --i) {
      const size_t next = detail::axis_shift(g, cur, axis, -1);
      step_phase(cur, next);
      cur = next;
    }
  };

  d.phase[seed] = hbar * std::arg(psi.values[seed]);
  unwrap_line(seed, 0);
  if (g.dimension() == 2) {
    const int sy = g.unravel(seed)[1];
    for (int ix = 0; ix < g.axis(0).nodes; ++ix) unwrap_line(g.index(ix, sy), 1);
  }

  for (size_t i = 0; i < n; ++i) {
    if (!d.valid[i]) continue;
    d.log_rho[i] = std::log(d.rho[i]);
    d.complex_action[i] = cplx(d.phase[i], -0.5 * hbar * d.log_rho[i]);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Velocity fields

std::array<double, 2> VelocityFields::bohm_at(size_t idx) const {
  if (!valid.at(idx)) throw MaskedNodeError("velocity queried at a masked node");
  return bohm[idx];
}

std::array<cplx, 2> VelocityFields::complex_at(size_t idx) const {
  if (!valid.at(idx)) throw MaskedNodeError("velocity queried at a masked node");
  return complex[idx];
}

VelocityFields velocity_fields(const PhaseDecomposition& dec, const PhysicalParams& params) {
  params.validate();
  const Grid& g = dec.grid;
  const size_t n = g.size();
  const double period = 2.0 * std::numbers::pi * dec.hbar;
  const double m = params.mass;

  VelocityFields f;
  f.grid = g;
  f.time = dec.time;
  f.bohm.assign(n, {0.0, 0.0});
  f.complex.assign(n, {cplx{}, cplx{}});
  f.grad_log_rho.assign(n, {0.0, 0.0});
  f.valid.assign(n, 0);

  for (size_t c = 0; c < n; ++c) {
    if (!detail::stencil_valid(g, c, dec.valid, false)) continue;
    f.valid[c] = 1;
    auto phase_diff = [&](size_t k) { return wrap_phase(dec.phase[k] - dec.phase[c], period); };
    auto log_rho_diff = [&](size_t k) { return dec.log_rho[k] - dec.log_rho[c]; };
    auto action_diff = [&](size_t k) {
      const cplx d = dec.complex_action[k] - dec.complex_action[c];
      return cplx(wrap_phase(d.real(), period), d.imag());
    };
    for (int axis = 0; axis < g.dimension(); ++axis) {
      f.bohm[c][axis] = detail::first_derivative(g, c, axis, phase_diff) / m;
      f.grad_log_rho[c][axis] = detail::first_derivative(g, c, axis, log_rho_diff);
      f.complex[c][axis] = detail::first_derivative(g, c, axis, action_diff) / m;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Complex action derivatives and the second-order complex HJ residual

std::optional<ActionJet> action_jet(const WaveField& psi, size_t idx,
                                    const std::vector<std::uint8_t>& valid, double hbar) {
  const Grid& g = psi.grid;
  if (!detail::stencil_valid(g, idx, valid, true)) return std::nullopt;
  const cplx centre = psi.values[idx];
  const cplx minus_i_hbar(0.0, -hbar);
  auto diff = [&](size_t k) { return minus_i_hbar * std::log(psi.values[k] / centre); };
  ActionJet jet;
  jet.gradient[0] = detail::first_derivative(g, idx, 0, diff);
  jet.dxx = detail::second_derivative(g, idx, 0, diff);
  if (g.dimension() == 2) {
    jet.gradient[1] = detail::first_derivative(g, idx, 1, diff);
    jet.dyy = detail::second_derivative(g, idx, 1, diff);
    jet.dxy = detail::mixed_derivative(g, idx, diff);
  }
  return jet;
}

double complex_hj_residual(const WaveField& prev, const WaveField& curr, const WaveField& next,
                           const Potential& potential, const PhysicalParams& params,
                           double rho_floor) {
  params.validate();
  if (!(prev.grid == curr.grid) || !(next.grid == curr.grid))
    throw std::invalid_argument("complex_hj_residual: grids differ");
  const double dt_back = curr.time - prev.time;
  const double dt_fwd = next.time - curr.time;
  if (!(dt_back > 0.0) || std::abs(dt_back - dt_fwd) > 1e-9 * dt_back)
    throw std::invalid_argument("complex_hj_residual: snapshots must be equally spaced in time");

  const auto m_prev = density_mask(prev, rho_floor);
  const auto m_curr = density_mask(curr, rho_floor);
  const auto m_next = density_mask(next, rho_floor);
  std::vector<std::uint8_t> valid(m_curr.size());
  for (size_t i = 0; i < valid.size(); ++i) valid[i] = m_prev[i] && m_curr[i] && m_next[i];

  const double hbar = params.hbar, m = params.mass;
  const cplx minus_i_hbar(0.0, -hbar);
  const cplx i_unit(0.0, 1.0);
  double worst = -1.0;
  for (size_t c = 0; c < valid.size(); ++c) {
    const auto jet = action_jet(curr, c, valid, hbar);
    if (!jet) continue;
    const cplx dsdt = minus_i_hbar * std::log(next.values[c] / prev.values[c]) / (dt_back + dt_fwd);
    const cplx grad2 = jet->gradient[0] * jet->gradient[0] + jet->gradient[1] * jet->gradient[1];
    const auto x = curr.grid.coords(c);
    const cplx r = dsdt + grad2 / (2.0 * m) + potential(x[0], x[1], curr.time) -
                   i_unit * (hbar / (2.0 * m)) * jet->laplacian();
    worst = std::max(worst, std::abs(r));
  }
  if (worst < 0.0) throw MaskedNodeError("complex_hj_residual: no valid node");
  return worst;
}

}  // namespace epm
