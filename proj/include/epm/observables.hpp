#pragma once

#include <array>
#include <functional>
#include <string>

#include "epm/process.hpp"

namespace epm {

/// Which momentum sample enters the uncertainty statistics.
///  increment:    p^j_n = m (r^j_{n+1} - r^j_n) / eps
///  displacement: p^j_n = m (r^j_n - r~_n) / eps
enum class MomentumForm { increment, displacement };

struct PeriodStats {
  int dimension = 1;
  std::array<double, 2> delta_x{};
  std::array<double, 2> delta_p{};
  std::array<double, 2> product{};
};

/// Position/momentum standard deviations over period q.
///
/// 2D averages over n = 4q .. 4q+3 and the 4 vertices (1/16); 1D over
/// n = 2q+1 .. 2q+2 and the 2 vertices (1/4). Positions are real parts.
PeriodStats uncertainty_stats(const ProcessTrajectory& traj, long q,
                              MomentumForm form = MomentumForm::increment);

struct SpinReport {
  double total = 0.0;
  double orbital = 0.0;
  double intrinsic = 0.0;
};

/// Period-averaged angular momentum E_{n,j}(r^j_n ^ p^j_n) over
/// n = 4q .. 4q+3, split into the orbital part m (x v_y - y v_x) of the
/// mean position and period drift, and the remainder.
SpinReport spin_z(const ProcessTrajectory& traj, long q);

/// Holomorphic f(z, t) with its exact derivatives.
struct TestFunction {
  std::string name;
  int dimension = 2;
  std::function<cplx(const ComplexPoint&, double)> value;
  std::function<ComplexPoint(const ComplexPoint&, double)> gradient;
  std::function<cplx(const ComplexPoint&, double)> laplacian;
  std::function<cplx(const ComplexPoint&, double)> time_derivative;
};

/// Largest relative mismatch between the supplied derivatives and 4th-order
/// central differences at (z, t).
double derivative_mismatch(const TestFunction& f, const ComplexPoint& z, double t);

/// df/dt + v . grad f - i hbar/(2m) lap f. Throws std::invalid_argument if
/// the supplied derivatives disagree with finite differences.
cplx dynkin_apply(const TestFunction& f, const ComplexPoint& z, double t, const ComplexPoint& v,
                  const PhysicalParams& params);

/// |Y(t) - Y(t - eps) - Df(z~(t), t) eps| at t = 4q eps, where Y is the
/// vertex average of f along the 2D process of cfg and the Dynkin operator
/// uses the drift carrying the mean into t.
double four_point_residual(const TestFunction& f, const ProcessConfig& cfg, long q);

}  // namespace epm
