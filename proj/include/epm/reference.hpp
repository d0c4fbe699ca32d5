#pragma once

#include "epm/core_model.hpp"
#include "epm/schrodinger.hpp"

namespace epm {

/// Free Gaussian packet, normalised, with centre x0, width sigma0 and mean
/// wavenumber k0 at t = 0.
struct GaussianPacket {
  double sigma0 = 1.0;
  double x0 = 0.0;
  double k0 = 0.0;

  cplx value(double x, double t, const PhysicalParams& p) const;
  /// sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2).
  double width(double t, const PhysicalParams& p) const;
  /// Bohm trajectory through x_start at t = 0.
  double bohm_position(double x_start, double t, const PhysicalParams& p) const;
  double bohm_velocity(double x, double t, const PhysicalParams& p) const;
};

/// exp(i (k x - hbar k^2 t / 2m)) with unit amplitude.
struct PlaneWave {
  double k = 1.0;

  cplx value(double x, double t, const PhysicalParams& p) const;
  double velocity(const PhysicalParams& p) const;
};

WaveField sample_gaussian(const Grid& grid, const GaussianPacket& g, double t,
                          const PhysicalParams& p);
/// Product packet gx(x) gy(y) on a 2D grid.
WaveField sample_gaussian(const Grid& grid, const GaussianPacket& gx, const GaussianPacket& gy,
                          double t, const PhysicalParams& p);
WaveField sample_plane_wave(const Grid& grid, const PlaneWave& w, double t,
                            const PhysicalParams& p);

/// Nearest wavenumber 2 pi n / L to k, so the wave is periodic on the axis.
double commensurate_wavenumber(const Axis& axis, double k);

}  // namespace epm
