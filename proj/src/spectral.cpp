#include "spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <stdexcept>

namespace epm::detail {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralPlan::SpectralPlan(std::vector<int> shape) {
  if (shape.empty() || shape.size() > 2) throw std::invalid_argument("SpectralPlan: rank 1 or 2");
  size_ = 1;
  for (int n : shape) size_ *= static_cast<size_t>(n);
  std::vector<cplx> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  // FFTW_ESTIMATE keeps plans (and therefore rounding) reproducible.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (shape.size() == 1) {
    forward_ = fftw_plan_dft_1d(shape[0], buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(shape[0], buf, buf, FFTW_BACKWARD, flags);
  } else {
    forward_ = fftw_plan_dft_2d(shape[0], shape[1], buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_2d(shape[0], shape[1], buf, buf, FFTW_BACKWARD, flags);
  }
  if (!forward_ || !backward_) throw std::runtime_error("SpectralPlan: FFTW planning failed");
}

SpectralPlan::~SpectralPlan() {
  std::lock_guard lock(planner_mutex());
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void SpectralPlan::forward(std::vector<cplx>& data) const {
  if (data.size() != size_) throw std::invalid_argument("SpectralPlan: size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), buf, buf);
}

void SpectralPlan::backward(std::vector<cplx>& data) const {
  if (data.size() != size_) throw std::invalid_argument("SpectralPlan: size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_), buf, buf);
}

std::vector<double> wavenumbers(int nodes, double length) {
  std::vector<double> k(static_cast<size_t>(nodes));
  const double dk = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < nodes; ++i) k[i] = dk * (i <= nodes / 2 - 1 ? i : i - nodes);
  return k;
}

}  // namespace epm::detail
