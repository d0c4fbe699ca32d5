#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epm/process.hpp"
#include "epm/reference.hpp"
#include "epm/schrodinger.hpp"

namespace epm {

/// Parse or validation failure of a scenario file (CLI exit code 2).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DriftConfig {
  enum class Kind { constant, linear, oscillating, field };
  Kind kind = Kind::constant;
  /// constant: a. linear: a + b t. oscillating: a + b cos(omega t).
  ComplexPoint a = ComplexPoint(cplx{});
  ComplexPoint b = ComplexPoint(cplx{});
  double omega = 1.0;
};

struct ModelSpec {
  int dimension = 2;
  Orientation orientation = Orientation::plus;
  ComplexPoint z0 = ComplexPoint(cplx{}, cplx{});
  DriftConfig drift;
  long steps = 400;
  /// Period index q at which observables are evaluated.
  long period = 1;
};

struct GaussianSpec {
  double sigma0 = 1.0;
  std::array<double, 2> x0{};
  std::array<double, 2> k0{};
};

struct InitialWaveSpec {
  enum class Kind { gaussian, plane_wave, superposition };
  Kind kind = Kind::gaussian;
  GaussianSpec first;
  GaussianSpec second;  ///< superposition only, equal weights
  std::array<double, 2> k{};  ///< plane_wave; rounded to the nearest periodic wavenumber
};

struct PotentialSpec {
  enum class Kind { free, harmonic };
  Kind kind = Kind::free;
  double omega = 1.0;
};

struct FieldSpec {
  std::vector<Axis> axes;
  InitialWaveSpec initial;
  PotentialSpec potential;
  double dt = 0.005;
  long steps = 800;
  /// Snapshot every `stride` solver steps for Bohm and coupled runs.
  int stride = 1;
  double l2_tolerance = 1e-6;
  double norm_tolerance = 1e-10;
};

struct BohmSpec {
  std::vector<std::array<double, 2>> starts;
  /// Defaults to the end of the field evolution.
  std::optional<double> t_end;
  int substeps = 1;
  double tolerance = 1e-4;
};

struct ConvergeSpec {
  std::string target = "process";
  double t_end = 1.0;
  /// dynkin test function name.
  std::string function = "z1^2+z2^2";
  /// hj_residual: dt = dt_ratio * h. classical_dp: dx = dt_ratio * eps.
  double dt_ratio = 0.5;
  std::optional<double> expected_slope;
  double slope_tolerance = 0.05;
  /// classical_dp: S0(x) = p0 x + kappa x^2 / 2 on `domain`, error measured
  /// for |x| <= window.
  double p0 = 0.5;
  double kappa = 0.3;
  std::array<double, 2> domain{-3.0, 3.0};
  double window = 1.0;
  double velocity_bound = 5.0;
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool json = true;
};

struct Scenario {
  std::string name;
  PhysicalParams physics;
  ModelSpec model;
  std::optional<FieldSpec> field;
  std::optional<BohmSpec> bohm;
  std::vector<double> sweeps;
  std::optional<ConvergeSpec> converge;
  OutputSpec outputs;

  void validate() const;
};

/// Throws ScenarioError on malformed JSON or invalid content.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

Grid make_grid(const FieldSpec& field);
WaveField make_initial_wave(const FieldSpec& field, const PhysicalParams& params);
Potential make_potential(const FieldSpec& field, const PhysicalParams& params);
/// Field-coupled drifts cannot be built here; they need a field history.
DriftSpec make_drift(const DriftConfig& drift, int dimension);
ProcessConfig make_process_config(const Scenario& s);

/// 1D or 2D Gaussian packets built from a spec.
std::array<GaussianPacket, 2> packets(const GaussianSpec& g);

}  // namespace epm
