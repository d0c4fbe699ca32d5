#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epm/core_model.hpp"

namespace epm {

/// One periodic axis: nodes at min + i h, i = 0 .. nodes-1, h = (max-min)/nodes.
struct Axis {
  double min = -1.0;
  double max = 1.0;
  int nodes = 64;

  double length() const { return max - min; }
  double spacing() const { return length() / nodes; }
  double coord(int i) const { return min + i * spacing(); }
};

/// Periodic 1D or 2D grid, row-major with the last axis fastest.
class Grid {
 public:
  explicit Grid(std::vector<Axis> axes);
  static Grid line(double min, double max, int nodes) { return Grid({Axis{min, max, nodes}}); }
  static Grid plane(Axis x, Axis y) { return Grid({x, y}); }

  int dimension() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int k) const { return axes_.at(static_cast<size_t>(k)); }
  const std::vector<Axis>& axes() const { return axes_; }
  size_t size() const;
  /// Per-node volume element.
  double cell_volume() const;

  size_t index(int ix, int iy = 0) const;
  std::array<int, 2> unravel(size_t idx) const;
  std::array<double, 2> coords(size_t idx) const;
  /// Index moved by (dx, dy) nodes with periodic wrap.
  size_t shifted(size_t idx, int dx, int dy = 0) const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  std::vector<Axis> axes_;
};

struct WaveField {
  Grid grid = Grid::line(-1.0, 1.0, 64);
  double time = 0.0;
  std::vector<cplx> values;

  /// Discrete L2 norm sqrt(sum |psi|^2 dV).
  double norm() const;
};

WaveField sample_wavefield(const Grid& grid, double time,
                           const std::function<cplx(double x, double y)>& psi);

/// Discrete L2 distance between two fields on the same grid.
double l2_distance(const WaveField& a, const WaveField& b);

struct Potential {
  std::function<double(double x, double y, double t)> value;
  bool time_dependent = false;
  std::string name;

  double operator()(double x, double y, double t) const { return value(x, y, t); }
};

Potential free_potential();
Potential constant_potential(double v);
/// 1/2 m omega^2 |x|^2.
Potential harmonic_potential(double mass, double omega);

/// Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with the
/// kinetic factor applied exactly in Fourier space. The potential is
/// sampled at the step midpoint.
class SplitStepSolver {
 public:
  SplitStepSolver(const Grid& grid, Potential potential, const PhysicalParams& params, double dt);
  ~SplitStepSolver();
  SplitStepSolver(SplitStepSolver&&) noexcept;
  SplitStepSolver& operator=(SplitStepSolver&&) noexcept;

  void step(WaveField& psi) const;
  void advance(WaveField& psi, long steps) const;
  double dt() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Evolves psi0 by `steps` steps of size dt (dt = 0 or steps = 0 return psi0).
WaveField evolve(const WaveField& psi0, const Potential& potential, const PhysicalParams& params,
                 double dt, long steps);

class MaskedNodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// psi = sqrt(rho) exp(iS/hbar), and the complex action S - i(hbar/2) ln rho.
struct PhaseDecomposition {
  Grid grid = Grid::line(-1.0, 1.0, 64);
  double time = 0.0;
  double hbar = 1.0;
  std::vector<double> rho;
  std::vector<double> phase;  ///< S, unwrapped (multiples of 2 pi hbar carried)
  std::vector<double> log_rho;
  std::vector<cplx> complex_action;
  std::vector<std::uint8_t> valid;

  /// exp(i action / hbar) at a node.
  cplx reassemble(size_t idx) const;
};

/// Nodes with rho < rho_floor * max(rho) are masked. The phase is unwrapped
/// from the node of largest rho along the first axis, then along the second
/// axis from that row.
PhaseDecomposition decompose(const WaveField& psi, const PhysicalParams& params,
                             double rho_floor = 1e-12);

struct VelocityFields {
  Grid grid = Grid::line(-1.0, 1.0, 64);
  double time = 0.0;
  std::vector<std::array<double, 2>> bohm;     ///< grad S / m
  std::vector<std::array<cplx, 2>> complex;    ///< grad(complex action) / m
  std::vector<std::array<double, 2>> grad_log_rho;
  std::vector<std::uint8_t> valid;

  std::array<double, 2> bohm_at(size_t idx) const;
  std::array<cplx, 2> complex_at(size_t idx) const;
};

/// 4th-order periodic central differences. The Bohm field comes from the
/// phase array (differences reduced modulo 2 pi hbar), the complex field
/// from the complex-action array. A node is valid when its whole stencil is.
VelocityFields velocity_fields(const PhaseDecomposition& dec, const PhysicalParams& params);

/// Spatial derivatives of the complex action -i hbar Log psi at one node,
/// built from principal logs of psi ratios (no unwrapping needed).
struct ActionJet {
  std::array<cplx, 2> gradient{};
  cplx dxx{}, dxy{}, dyy{};
  cplx laplacian() const { return dxx + dyy; }
};

/// rho >= rho_floor * max(rho).
std::vector<std::uint8_t> density_mask(const WaveField& psi, double rho_floor);

/// Empty when any stencil node is masked.
std::optional<ActionJet> action_jet(const WaveField& psi, size_t idx,
                                    const std::vector<std::uint8_t>& valid, double hbar);

/// max over valid nodes of
///   |dS/dt + (grad S)^2 / 2m + V - i hbar/(2m) lap S|
/// for the complex action S of `curr`, with dS/dt from the central
/// difference between `prev` and `next` (equally spaced in time).
double complex_hj_residual(const WaveField& prev, const WaveField& curr, const WaveField& next,
                           const Potential& potential, const PhysicalParams& params,
                           double rho_floor = 1e-8);

}  // namespace epm
