#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "epm/bohm.hpp"
#include "epm/observables.hpp"
#include "epm/process.hpp"
#include "epm/report.hpp"
#include "epm/schrodinger.hpp"
#include "epm/variational.hpp"

namespace epm {

/// All CSV writers use 17 significant digits so values re-parse exactly.
/// Lines starting with '#' carry metadata and are skipped by generic readers.

/// Columns t,j,re_x,im_x,re_y,im_y (2D) or t,j,re,im (1D). The mean process
/// is written with j = -1.
void write_trajectory_csv(const std::filesystem::path& path, const ProcessTrajectory& traj);
/// Restores times, points and mean; params and frame come from the caller
/// and the drift column is not part of the file.
ProcessTrajectory read_trajectory_csv(const std::filesystem::path& path,
                                      const PhysicalParams& params, const VertexFrame& frame);

struct ObservablesRecord {
  Orientation orientation = Orientation::plus;
  double hbar = 1.0;
  double mass = 1.0;
  double epsilon = 0.01;
  PeriodStats stats;
  /// Spin entries are only meaningful in 2D.
  double spin_intrinsic = 0.0;
  double spin_total = 0.0;
};

void write_observables_json(const std::filesystem::path& path, const ObservablesRecord& rec);
ObservablesRecord read_observables_json(const std::filesystem::path& path);

/// Columns x,t,S.
void write_grid_action_csv(const std::filesystem::path& path, const GridAction& action);
GridAction read_grid_action_csv(const std::filesystem::path& path);

/// Columns x[,y],re,im,rho,S with '# axis min max nodes' and '# time t'
/// header lines.
void write_wavefield_csv(const std::filesystem::path& path, const WaveField& psi,
                         const PhysicalParams& params);
WaveField read_wavefield_csv(const std::filesystem::path& path);

/// Little-endian: uint32 dims, uint32 counts[dims], float64 time, then
/// row-major float64 (re, im) pairs.
void write_wavefield_binary(const std::filesystem::path& path, const WaveField& psi);
/// The binary format has no extents; the caller supplies the grid, whose
/// node counts must match.
WaveField read_wavefield_binary(const std::filesystem::path& path, const Grid& grid);

/// Columns t,x[,y].
void write_bohm_csv(const std::filesystem::path& path, const BohmPath& path_data);
BohmPath read_bohm_csv(const std::filesystem::path& path);

/// Columns t,x[,y],deviation at the comparison instants (x from the Bohm
/// path).
void write_coupled_csv(const std::filesystem::path& path, const CoupledRun& run);

struct CoupledTable {
  int dimension = 1;
  std::vector<double> times;
  std::vector<std::array<double, 2>> positions;
  std::vector<double> deviations;
};
CoupledTable read_coupled_csv(const std::filesystem::path& path);

struct ConvergenceTable {
  std::string target;
  std::vector<double> epsilon;
  std::vector<double> error;
  double slope = 0.0;
  double intercept = 0.0;
};

/// epsilon,error CSV plus a JSON sidecar with the fitted slope.
void write_convergence(const std::filesystem::path& csv, const std::filesystem::path& json,
                       const ConvergenceTable& table);
ConvergenceTable read_convergence(const std::filesystem::path& csv,
                                  const std::filesystem::path& json);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
void write_report_json(const std::filesystem::path& path, const RunReport& report);

/// Generic CSV table: header names and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> comments;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace epm
