#include "epm/reference.hpp"

#include <cmath>
#include <numbers>

namespace epm {

cplx GaussianPacket::value(double x, double t, const PhysicalParams& p) const {
  const cplx i(0.0, 1.0);
  const double v = p.hbar * k0 / p.mass;
  const double omega = p.hbar * k0 * k0 / (2.0 * p.mass);
  const cplx alpha = 1.0 + i * (p.hbar * t / (2.0 * p.mass * sigma0 * sigma0));
  const double d = x - x0 - v * t;
  const double pre = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25);
  return pre / std::sqrt(alpha) *
         std::exp(-d * d / (4.0 * sigma0 * sigma0 * alpha) + i * (k0 * (x - x0) - omega * t));
}

double GaussianPacket::width(double t, const PhysicalParams& p) const {
  const double c = p.hbar * t / (2.0 * p.mass * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + c * c);
}

double GaussianPacket::bohm_position(double x_start, double t, const PhysicalParams& p) const {
  const double v = p.hbar * k0 / p.mass;
  return x0 + v * t + (x_start - x0) * width(t, p) / sigma0;
}

double GaussianPacket::bohm_velocity(double x, double t, const PhysicalParams& p) const {
  const double v = p.hbar * k0 / p.mass;
  const double c = p.hbar / (2.0 * p.mass * sigma0 * sigma0);
  return v + (x - x0 - v * t) * c * c * t / (1.0 + c * c * t * t);
}

cplx PlaneWave::value(double x, double t, const PhysicalParams& p) const {
  return std::polar(1.0, k * x - p.hbar * k * k * t / (2.0 * p.mass));
}

double PlaneWave::velocity(const PhysicalParams& p) const { return p.hbar * k / p.mass; }

WaveField sample_gaussian(const Grid& grid, const GaussianPacket& g, double t,
                          const PhysicalParams& p) {
  if (grid.dimension() != 1) throw std::invalid_argument("sample_gaussian: 1D grid expected");
  return sample_wavefield(grid, t, [&](double x, double) { return g.value(x, t, p); });
}

WaveField sample_gaussian(const Grid& grid, const GaussianPacket& gx, const GaussianPacket& gy,
                          double t, const PhysicalParams& p) {
  if (grid.dimension() != 2) throw std::invalid_argument("sample_gaussian: 2D grid expected");
  return sample_wavefield(grid, t,
                          [&](double x, double y) { return gx.value(x, t, p) * gy.value(y, t, p); });
}

WaveField sample_plane_wave(const Grid& grid, const PlaneWave& w, double t,
                            const PhysicalParams& p) {
  return sample_wavefield(grid, t, [&](double x, double) { return w.value(x, t, p); });
}

double commensurate_wavenumber(const Axis& axis, double k) {
  const double k1 = 2.0 * std::numbers::pi / axis.length();
  return k1 * std::round(k / k1);
}

}  // namespace epm
