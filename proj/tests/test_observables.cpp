#include <cmath>
#include <random>

#include "doctest.h"
#include "epm/observables.hpp"

using namespace epm;

namespace {

ProcessTrajectory trajectory(int dim, Orientation o, const PhysicalParams& p, long steps,
                             ComplexPoint v) {
  ProcessConfig cfg;
  cfg.params = p;
  cfg.frame = dim == 1 ? VertexFrame::line() : VertexFrame::square(o);
  cfg.z0 = dim == 1 ? ComplexPoint(cplx(0.4, 0.2)) : ComplexPoint(cplx(0.4, 0.2), cplx(-1, 0.5));
  cfg.drift = DriftSpec::constant(v);
  cfg.steps = steps;
  return run_process(cfg);
}

TestFunction square_z1() {
  TestFunction f;
  f.name = "z1^2";
  f.value = [](const ComplexPoint& z, double) { return z[0] * z[0]; };
  f.gradient = [](const ComplexPoint& z, double) { return ComplexPoint(2.0 * z[0], cplx{}); };
  f.laplacian = [](const ComplexPoint&, double) { return cplx(2); };
  f.time_derivative = [](const ComplexPoint&, double) { return cplx{}; };
  return f;
}

}  // namespace

TEST_CASE("2D uncertainty matches the closed form per axis") {
  const PhysicalParams p{0.7, 1.3, 0.02, {}};
  const ProcessTrajectory traj =
      trajectory(2, Orientation::plus, p, 40, ComplexPoint(cplx(0.3, 0.1), cplx(-0.5, 0.2)));
  for (long q = 0; q < 9; ++q) {
    const PeriodStats s = uncertainty_stats(traj, q);
    for (int k = 0; k < 2; ++k) {
      CHECK(s.delta_x[k] * s.delta_x[k] == doctest::Approx(p.hbar * p.epsilon / (2 * p.mass)));
      CHECK(s.delta_p[k] * s.delta_p[k] == doctest::Approx(p.hbar * p.mass / (2 * p.epsilon)));
      CHECK(s.product[k] == doctest::Approx(p.hbar / 2));
    }
  }
  CHECK_THROWS_AS(uncertainty_stats(traj, 10), std::out_of_range);
}

TEST_CASE("1D products from explicit enumeration") {
  const PhysicalParams p{1.9, 0.6, 0.05, {}};
  const ProcessTrajectory traj = trajectory(1, Orientation::plus, p, 9, ComplexPoint(cplx(2, 1)));
  // Vertex j sits at x~ + a (s^n u^j - u^j) with a = Re gamma: offset
  // -+2a at odd n, 0 at even n.
  const double a = std::sqrt(p.hbar * p.epsilon / (2 * p.mass));
  const double dx2 = (4 * a * a + 4 * a * a + 0 + 0) / 4.0;
  const double dp2_disp = dx2 * p.mass * p.mass / (p.epsilon * p.epsilon);
  const double dp2_inc = 4 * a * a * p.mass * p.mass / (p.epsilon * p.epsilon);
  for (long q = 0; q < 4; ++q) {
    const PeriodStats inc = uncertainty_stats(traj, q, MomentumForm::increment);
    const PeriodStats disp = uncertainty_stats(traj, q, MomentumForm::displacement);
    CHECK(inc.delta_x[0] * inc.delta_x[0] == doctest::Approx(dx2));
    CHECK(inc.delta_p[0] * inc.delta_p[0] == doctest::Approx(dp2_inc));
    CHECK(disp.delta_p[0] * disp.delta_p[0] == doctest::Approx(dp2_disp));
    CHECK(inc.product[0] == doctest::Approx(std::sqrt(2.0) * p.hbar));
    CHECK(disp.product[0] == doctest::Approx(p.hbar));
  }
}

TEST_CASE("intrinsic spin has opposite signs for the two orientations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const PhysicalParams p{0.5 + 0.1 * trial, 1.0 + 0.2 * trial, 0.001 * (trial + 1), {}};
    const ComplexPoint v(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
    const SpinReport plus = spin_z(trajectory(2, Orientation::plus, p, 16, v), 2);
    const SpinReport minus = spin_z(trajectory(2, Orientation::minus, p, 16, v), 2);
    CHECK(plus.intrinsic == doctest::Approx(-p.hbar / 2).epsilon(1e-9));
    CHECK(minus.intrinsic == doctest::Approx(p.hbar / 2).epsilon(1e-9));
    CHECK(plus.orbital == doctest::Approx(minus.orbital));
  }
  CHECK_THROWS_AS(spin_z(trajectory(1, Orientation::plus, PhysicalParams{}, 8, ComplexPoint(cplx(1))), 0),
                  std::invalid_argument);
}

TEST_CASE("dynkin_apply checks the supplied derivatives") {
  TestFunction f = square_z1();
  const ComplexPoint z(cplx(0.5, 0.5), cplx(1, 0));
  const ComplexPoint v(cplx(1, 0), cplx(0, 1));
  const PhysicalParams p{};
  const cplx d = dynkin_apply(f, z, 0.0, v, p);
  CHECK(std::abs(d - (2.0 * z[0] * v[0] - cplx(0, 1) * 0.5 * 2.0)) < 1e-14);
  f.laplacian = [](const ComplexPoint&, double) { return cplx(3); };
  CHECK_THROWS_AS(dynkin_apply(f, z, 0.0, v, p), std::invalid_argument);
}

TEST_CASE("one-step Dynkin residual") {
  ProcessConfig cfg;
  cfg.frame = VertexFrame::square(Orientation::plus);
  cfg.z0 = ComplexPoint(cplx(0.2, 0.1), cplx(0.3, -0.1));
  cfg.drift = DriftSpec::constant(ComplexPoint(cplx(0.5, 0.2), cplx(-0.3, 0.1)));

  TestFunction lin;
  lin.name = "linear";
  lin.value = [](const ComplexPoint& z, double) { return 2.0 * z[0] - cplx(0, 1) * z[1]; };
  lin.gradient = [](const ComplexPoint&, double) { return ComplexPoint(cplx(2), cplx(0, -1)); };
  lin.laplacian = [](const ComplexPoint&, double) { return cplx{}; };
  lin.time_derivative = [](const ComplexPoint&, double) { return cplx{}; };
  cfg.params.epsilon = 0.01;
  CHECK(four_point_residual(lin, cfg, 3) < 1e-14);

  std::vector<double> eps{0.02, 0.01, 0.005}, res;
  for (double e : eps) {
    cfg.params.epsilon = e;
    res.push_back(four_point_residual(square_z1(), cfg, 2));
  }
  for (size_t i = 1; i < eps.size(); ++i)
    CHECK(std::log(res[i - 1] / res[i]) / std::log(eps[i - 1] / eps[i]) == doctest::Approx(2).epsilon(0.05));
  CHECK_THROWS_AS(four_point_residual(square_z1(), cfg, 0), std::invalid_argument);
}
