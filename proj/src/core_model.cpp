#include "epm/core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace epm {

namespace {

constexpr std::array<Vertex, 2> kLine{{{1, 0}, {-1, 0}}};
constexpr std::array<Vertex, 4> kSquare{{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}};

}  // namespace

void PhysicalParams::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be > 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be > 0");
  if (light_speed && !(*light_speed > 0.0)) throw std::invalid_argument("light_speed must be > 0");
}

VertexFrame::VertexFrame(int dimension, Orientation orientation)
    : dim_(dimension), orientation_(orientation) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("VertexFrame: dimension must be 1 or 2");
}

void VertexFrame::check_index(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("VertexFrame: vertex index out of range");
}

const Vertex& VertexFrame::vertex(int j) const {
  check_index(j);
  return dim_ == 1 ? kLine[j] : kSquare[j];
}

int VertexFrame::permuted_index(long n, int j) const {
  check_index(j);
  if (n < 0) throw std::out_of_range("VertexFrame: permutation power must be >= 0");
  const long p = period();
  const long shift = (orientation_ == Orientation::plus || dim_ == 1) ? n % p : (p - n % p) % p;
  return static_cast<int>((j + shift) % p);
}

cplx gamma(const PhysicalParams& params, int dimension) {
  params.validate();
  double denom;
  if (dimension == 1)
    denom = 2.0 * params.mass;
  else if (dimension == 2)
    denom = 4.0 * params.mass;
  else
    throw std::invalid_argument("gamma: dimension must be 1 or 2");
  const double a = std::sqrt(params.hbar * params.epsilon / denom);
  return {a, a};
}

Vertex vertex_offset(const VertexFrame& frame, long n, int j) {
  const Vertex& to = frame.permuted(n, j);
  const Vertex& from = frame.vertex(j);
  return {to[0] - from[0], to[1] - from[1]};
}

ComplexPoint scale(cplx g, const Vertex& v, int dimension) {
  if (dimension == 1) return ComplexPoint(g * double(v[0]));
  return ComplexPoint(g * double(v[0]), g * double(v[1]));
}

ComplexPoint step_increment(const VertexFrame& frame, const PhysicalParams& params, long n, int j) {
  if (n < 1) throw std::out_of_range("step_increment: n must be >= 1");
  const Vertex& now = frame.permuted(n, j);
  const Vertex& before = frame.permuted(n - 1, j);
  return scale(gamma(params, frame.dimension()), {now[0] - before[0], now[1] - before[1]},
               frame.dimension());
}

const char* to_string(Orientation o) { return o == Orientation::plus ? "+" : "-"; }

Orientation orientation_from_string(const std::string& s) {
  if (s == "+" || s == "plus") return Orientation::plus;
  if (s == "-" || s == "minus") return Orientation::minus;
  throw std::invalid_argument("orientation must be '+' or '-', got '" + s + "'");
}

}  // namespace epm
