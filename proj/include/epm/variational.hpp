#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epm/process.hpp"
#include "epm/schrodinger.hpp"

namespace epm {

/// f: C^n -> C, n = 1 or 2, with optional exact derivatives.
struct ComplexScalarField {
  int dimension = 1;
  std::function<cplx(const ComplexPoint&)> value;
  std::function<ComplexPoint(const ComplexPoint&)> gradient;  ///< may be empty
  /// Row-major n x n complex Hessian; may be empty.
  std::function<std::array<cplx, 4>(const ComplexPoint&)> hessian;
  bool holomorphic = true;

  cplx operator()(const ComplexPoint& z) const { return value(z); }
  ComplexPoint grad(const ComplexPoint& z) const;
  std::array<cplx, 4> hess(const ComplexPoint& z) const;
};

/// max_k |df/dy_k - i df/dx_k| / max(1, |df/dx_k|) by central differences.
double cauchy_riemann_residual(const ComplexScalarField& f, const ComplexPoint& z);

/// Axis-aligned box |Re(z - centre)_k|, |Im(z - centre)_k| <= half_width.
/// A zero 1D centre stands for the origin in any dimension.
struct SearchBox {
  ComplexPoint center = ComplexPoint(cplx{});
  double half_width = 10.0;

  bool contains(const ComplexPoint& z) const;
};

class NoSaddleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexMin {
  ComplexPoint argmin;
  cplx value;
};

/// Saddle point of P = Re f (minimum in x, maximum in y) inside the box.
/// Newton on grad f = 0; convexity of P in x and concavity in y are
/// checked at sampled points of the box (fixed seed).
ComplexMin complex_min(const ComplexScalarField& f, const SearchBox& box = {});

struct FenchelResult {
  cplx value;
  ComplexPoint maximizer;
};

/// max_z (p . z - f(z)) in the saddle sense: the stationary point of
/// p . z - f(z), with Re maximised in x and minimised in y.
FenchelResult complex_fenchel_legendre(const ComplexScalarField& f, const ComplexPoint& p,
                                       const SearchBox& box = {});

/// L(x, u) = 1/2 m u^2 - V(x) on the real line.
struct LagrangianSpec {
  double mass = 1.0;
  ComplexScalarField potential;

  double operator()(double x, double u) const;
};

struct GridAction {
  std::vector<double> x;
  std::vector<double> times;
  /// values[k][i] = S(x_i, times[k]).
  std::vector<std::vector<double>> values;

  void validate() const;
};

struct DpOptions {
  double velocity_bound = 10.0;
  int samples = 201;
};

class VelocityBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bellman recursion S(x, t) = min_u { S(x - u eps, t - eps) + L(x, u) eps }
/// with off-grid values linearly interpolated (extrapolated past the ends).
/// Throws VelocityBoundError when a minimiser lands on the search boundary.
GridAction classical_hj_dp(const LagrangianSpec& lagrangian, const std::vector<double>& x,
                           const std::vector<double>& initial, double epsilon, long steps,
                           const DpOptions& options = {});

/// dS/dx / m at every node of time level k (one-sided at the ends).
std::vector<double> velocity_from_action(const GridAction& action, size_t k, double mass);

struct LeastActionOptions {
  double rho_floor = 1e-3;
  /// Evaluate every `stride`-th node along each axis.
  int stride = 1;
};

/// One-step residual of the generalised least-action principle between two
/// 2D wave fields `before` (t - eps) and `after` (t), eps = cfg.params.epsilon:
///
///   (1/4) sum_j S(x - v eps - gamma (s^4 u^j - s^3 u^j), t - eps)
///     + L(x, v) eps - S(x, t),        v = grad S(x, t) / m,
///
/// with S(., t - eps) continued off the real axis by its second-order
/// Taylor polynomial. Returns the max modulus over valid sampled nodes.
double least_action_step_residual(const WaveField& before, const WaveField& after,
                                  const Potential& potential, const ProcessConfig& cfg,
                                  const LeastActionOptions& options = {});

}  // namespace epm
