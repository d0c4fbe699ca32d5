#pragma once

#include <vector>

#include "epm/types.hpp"

namespace epm::detail {

/// In-place FFTW transform pair over a 1D or 2D row-major buffer.
/// Unnormalised: backward(forward(x)) = size * x.
class SpectralPlan {
 public:
  explicit SpectralPlan(std::vector<int> shape);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  void forward(std::vector<cplx>& data) const;
  void backward(std::vector<cplx>& data) const;
  size_t size() const { return size_; }

 private:
  void* forward_ = nullptr;
  void* backward_ = nullptr;
  size_t size_ = 0;
};

/// Angular wavenumbers in FFT order for a periodic axis of length L.
std::vector<double> wavenumbers(int nodes, double length);

}  // namespace epm::detail
