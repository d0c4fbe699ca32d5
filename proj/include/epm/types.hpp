#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace epm {

using cplx = std::complex<double>;

/// A point of C^n for n = 1 or 2. Storage is fixed-size; components past
/// dimension() stay zero so that 1D and 2D code share arithmetic.
class ComplexPoint {
 public:
  ComplexPoint() = default;
  explicit ComplexPoint(cplx a) : dim_(1), c_{a, cplx{}} {}
  ComplexPoint(cplx a, cplx b) : dim_(2), c_{a, b} {}

  static ComplexPoint zero(int dimension) {
    if (dimension == 1) return ComplexPoint(cplx{});
    if (dimension == 2) return ComplexPoint(cplx{}, cplx{});
    throw std::invalid_argument("ComplexPoint: dimension must be 1 or 2");
  }

  int dimension() const { return dim_; }
  cplx operator[](int k) const { return c_[k]; }
  cplx& operator[](int k) { return c_[k]; }

  std::array<double, 2> real() const { return {c_[0].real(), c_[1].real()}; }
  std::array<double, 2> imag() const { return {c_[0].imag(), c_[1].imag()}; }

  bool finite() const {
    for (int k = 0; k < dim_; ++k)
      if (!std::isfinite(c_[k].real()) || !std::isfinite(c_[k].imag())) return false;
    return true;
  }

  ComplexPoint& operator+=(const ComplexPoint& o) {
    require_same(o);
    c_[0] += o.c_[0];
    c_[1] += o.c_[1];
    return *this;
  }
  ComplexPoint& operator-=(const ComplexPoint& o) {
    require_same(o);
    c_[0] -= o.c_[0];
    c_[1] -= o.c_[1];
    return *this;
  }
  ComplexPoint& operator*=(cplx s) {
    c_[0] *= s;
    c_[1] *= s;
    return *this;
  }

  friend ComplexPoint operator+(ComplexPoint a, const ComplexPoint& b) { return a += b; }
  friend ComplexPoint operator-(ComplexPoint a, const ComplexPoint& b) { return a -= b; }
  friend ComplexPoint operator*(ComplexPoint a, cplx s) { return a *= s; }
  friend ComplexPoint operator*(cplx s, ComplexPoint a) { return a *= s; }
  friend ComplexPoint operator*(ComplexPoint a, double s) { return a *= cplx(s); }
  friend ComplexPoint operator*(double s, ComplexPoint a) { return a *= cplx(s); }
  friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;

 private:
  void require_same(const ComplexPoint& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("ComplexPoint: dimension mismatch");
  }

  int dim_ = 1;
  std::array<cplx, 2> c_{};
};

/// Bilinear (non-conjugating) product sum_k a_k b_k.
inline cplx dot(const ComplexPoint& a, const ComplexPoint& b) {
  cplx s{};
  for (int k = 0; k < a.dimension(); ++k) s += a[k] * b[k];
  return s;
}

inline double max_abs(const ComplexPoint& a) {
  double m = 0.0;
  for (int k = 0; k < a.dimension(); ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

}  // namespace epm
