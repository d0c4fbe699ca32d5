#pragma once

#include <array>
#include <optional>
#include <string>

#include "epm/types.hpp"

namespace epm {

/// Dimensional constants. Natural units (hbar = m = 1) unless a scenario
/// asks for SI.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double epsilon = 0.01;
  std::optional<double> light_speed;

  void validate() const;
};

enum class Orientation { plus, minus };

/// Integer vertex vector; the second component is zero in 1D.
using Vertex = std::array<int, 2>;

/// Vertex set u^j and its cyclic permutation s.
///
/// 1D: u = {+1, -1}, s swaps them (period 2).
/// 2D: u = (1,1), (1,-1), (-1,-1), (-1,1). s+ maps u^j -> u^{j+1}
/// (the listed order, clockwise for a y-up axis), s- maps u^j -> u^{j-1}.
/// Vertex indices are 0-based.
class VertexFrame {
 public:
  VertexFrame(int dimension, Orientation orientation);

  static VertexFrame line() { return VertexFrame(1, Orientation::plus); }
  static VertexFrame square(Orientation o) { return VertexFrame(2, o); }

  int dimension() const { return dim_; }
  Orientation orientation() const { return orientation_; }
  /// Number of vertices, which is also the period of s.
  int size() const { return dim_ == 1 ? 2 : 4; }
  int period() const { return size(); }

  const Vertex& vertex(int j) const;
  /// Index of s^n u^j.
  int permuted_index(long n, int j) const;
  const Vertex& permuted(long n, int j) const { return vertex(permuted_index(n, j)); }

 private:
  void check_index(int j) const;

  int dim_;
  Orientation orientation_;
};

/// (1+i) sqrt(hbar eps / 2m) in 1D, (1+i) sqrt(hbar eps / 4m) in 2D.
cplx gamma(const PhysicalParams& params, int dimension);

/// s^n u^j - u^j.
Vertex vertex_offset(const VertexFrame& frame, long n, int j);

/// gamma (s^n u^j - s^{n-1} u^j), for n >= 1.
ComplexPoint step_increment(const VertexFrame& frame, const PhysicalParams& params, long n, int j);

/// gamma * v as a point of C^dim.
ComplexPoint scale(cplx g, const Vertex& v, int dimension);

const char* to_string(Orientation o);
Orientation orientation_from_string(const std::string& s);

}  // namespace epm
