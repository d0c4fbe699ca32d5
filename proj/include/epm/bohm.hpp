#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "epm/process.hpp"
#include "epm/schrodinger.hpp"

namespace epm {

/// A trajectory or field query reached a masked (rho ~ 0) node.
class MaskedRegionError : public std::runtime_error {
 public:
  MaskedRegionError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct FieldSample {
  std::array<double, 2> bohm{};
  std::array<cplx, 2> complex{};
};

/// Equally spaced, immutable wave-field snapshots with their velocity
/// fields. Velocities are interpolated cubically (1D) or bilinearly (2D) in
/// space and linearly in time.
class FieldHistory {
 public:
  explicit FieldHistory(const PhysicalParams& params, double rho_floor = 1e-12);

  /// Evolves psi0 with the split-step solver and keeps every stride-th state,
  /// `count` snapshots in total (psi0 included).
  static FieldHistory record(const WaveField& psi0, const Potential& potential,
                             const PhysicalParams& params, double dt, int stride, long count,
                             double rho_floor = 1e-12);

  /// Appends a snapshot; times must advance by a constant cadence.
  void push(const WaveField& psi);

  size_t size() const { return snapshots_.size(); }
  double start() const;
  double end() const;
  double cadence() const;
  const Grid& grid() const;
  const PhysicalParams& params() const { return params_; }
  const WaveField& snapshot(size_t k) const { return snapshots_.at(k); }
  const VelocityFields& velocity(size_t k) const { return velocities_.at(k); }

  /// Interpolated velocities at a real position. Throws MaskedRegionError
  /// when a stencil node is masked and std::out_of_range outside the
  /// stored time span.
  FieldSample sample(const std::array<double, 2>& x, double t) const;

 private:
  FieldSample sample_at(size_t k, const std::array<double, 2>& x, double t) const;

  PhysicalParams params_;
  double rho_floor_;
  std::vector<WaveField> snapshots_;
  std::vector<VelocityFields> velocities_;
};

struct BohmPath {
  int dimension = 1;
  std::vector<double> times;
  std::vector<std::array<double, 2>> positions;
};

struct BohmOptions {
  /// RK4 steps per snapshot interval.
  int substeps = 1;
};

/// RK4 integration of dx/dt = grad S / m from x0 at history.start() to t_end.
BohmPath integrate_bohm(const FieldHistory& history, const std::array<double, 2>& x0, double t_end,
                        const BohmOptions& options = {});

/// Independent paths over the same history, computed in parallel.
std::vector<BohmPath> integrate_bohm_many(const FieldHistory& history,
                                          const std::vector<std::array<double, 2>>& starts,
                                          double t_end, const BohmOptions& options = {});

/// Field-coupled drift v = grad(complex action) / m evaluated at Re(mean).
/// The history must outlive every use of the drift.
DriftSpec field_drift(std::shared_ptr<const FieldHistory> history);

struct CoupledRun {
  ProcessTrajectory process;
  BohmPath bohm;
  /// Snapshot instants at which Re(mean) and the Bohm path are compared.
  std::vector<double> sample_times;
  std::vector<double> deviations;
  /// Sup of the sampled deviations.
  double deviation = 0.0;
};

/// Runs the process with the field-coupled drift of cfg and compares the
/// real part of its mean with the Bohm path from Re(z0) at every snapshot
/// instant the process reaches. A masked-region entry is reported as
/// MaskedRegionError with the failing time.
CoupledRun run_coupled(const ProcessConfig& cfg, std::shared_ptr<const FieldHistory> history,
                       const BohmOptions& options = {});

/// eps = h / (4 m c^2) in 2D and h / (2 m c^2) in 1D, h = 2 pi hbar.
double compton_timestep(const PhysicalParams& params, int dimension);

}  // namespace epm
