#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "epm/process.hpp"

using namespace epm;

namespace {

ProcessConfig config_2d(Orientation o, long steps) {
  ProcessConfig cfg;
  cfg.params = {1.0, 1.0, 0.01, {}};
  cfg.frame = VertexFrame::square(o);
  cfg.z0 = ComplexPoint(cplx(0.3, -0.2), cplx(0.1, 0.4));
  cfg.drift = DriftSpec::constant(ComplexPoint(cplx(0.5, 0.1), cplx(-0.2, 0.3)));
  cfg.steps = steps;
  return cfg;
}

// Test-side enumeration of the vertex table: u^j listed explicitly and the
// permutation applied by index arithmetic.
const int kSquare[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};

ComplexPoint brute_point(const ProcessConfig& cfg, long n, int j, cplx g) {
  const int shift = cfg.frame.orientation() == Orientation::plus ? 1 : 3;
  const int now = static_cast<int>((j + shift * n) % 4);
  const cplx v0 = cfg.drift.evaluate(0.0)[0], v1 = cfg.drift.evaluate(0.0)[1];
  const double t = double(n) * cfg.params.epsilon;
  return ComplexPoint(cfg.z0[0] + v0 * t + g * double(kSquare[now][0] - kSquare[j][0]),
                      cfg.z0[1] + v1 * t + g * double(kSquare[now][1] - kSquare[j][1]));
}

}  // namespace

TEST_CASE("points agree with a brute-force enumeration of the vertex cycle") {
  for (Orientation o : {Orientation::plus, Orientation::minus}) {
    const ProcessConfig cfg = config_2d(o, 41);
    const ProcessTrajectory traj = run_process(cfg);
    const cplx g = (1.0 + cplx(0, 1)) * std::sqrt(cfg.params.hbar * cfg.params.epsilon / 4.0);
    for (long n = 0; n <= 41; ++n)
      for (int j = 0; j < 4; ++j) CHECK(max_abs(traj.points[j][n] - brute_point(cfg, n, j, g)) < 1e-14);
  }
}

TEST_CASE("period closure is exact and the recurrence identity holds") {
  const ProcessTrajectory traj = run_process(config_2d(Orientation::plus, 400));
  for (long n = 0; n <= 400; n += 4)
    for (int j = 0; j < 4; ++j) CHECK(traj.points[j][n] == traj.mean[n]);
  const double bound = 64 * std::numeric_limits<double>::epsilon() * trajectory_scale(traj);
  CHECK(recurrence_identity_residual(traj) <= bound);
  CHECK(step_equation_residual(traj) <= bound);
}

TEST_CASE("mean follows the drift sampled at the start of each period") {
  ProcessConfig cfg = config_2d(Orientation::plus, 12);
  cfg.drift = DriftSpec::closed_form([](double t) { return ComplexPoint(cplx(t), cplx(0, 2 * t)); },
                                     "linear");
  const ProcessTrajectory traj = run_process(cfg);
  const double eps = cfg.params.epsilon;
  for (long n = 1; n <= 12; ++n) {
    const double ts = double((n - 1) / 4 * 4) * eps;
    CHECK(std::abs(traj.drift[n][0] - cplx(ts)) < 1e-15);
  }
  // After three periods: z0 + 4 eps (0 + 4 eps + 8 eps).
  CHECK(std::abs(traj.mean[12][0] - (cfg.z0[0] + 4 * eps * 12 * eps)) < 1e-15);
}

TEST_CASE("1D increment moments") {
  ProcessConfig cfg;
  cfg.params = {0.8, 1.7, 0.03, {}};
  cfg.frame = VertexFrame::line();
  cfg.z0 = ComplexPoint(cplx(0.2, 0.1));
  cfg.drift = DriftSpec::constant(ComplexPoint(cplx(1.0, -0.5)));
  cfg.steps = 12;
  const ProcessTrajectory traj = run_process(cfg);
  const cplx g2 = cplx(0, cfg.params.hbar * cfg.params.epsilon / cfg.params.mass);
  for (long q = 0; q < 6; ++q) {
    const IncrementMoments m = increment_moments(traj, q);
    for (int j = 0; j < 2; ++j) {
      CHECK(max_abs(m.mean_increment[j]) < 1e-15);
      CHECK(std::abs(m.cov(j, j) - 4.0 * g2) < 1e-14);
    }
    // The two vertices move in opposite directions, so the cross moment is
    // -4 gamma^2 rather than zero.
    CHECK(std::abs(m.cov(0, 1) + 4.0 * g2) < 1e-14);
  }
  CHECK_THROWS_AS(increment_moments(traj, 6), std::out_of_range);
}

TEST_CASE("2D increment covariance is diagonal") {
  const ProcessTrajectory traj = run_process(config_2d(Orientation::minus, 8));
  const IncrementMoments m = increment_moments(traj, 1);
  const cplx g2 = gamma(traj.params, 2) * gamma(traj.params, 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(max_abs(m.mean_increment[i]) < 1e-15);
    CHECK(std::abs(m.cov(i, i) - 4.0 * g2) < 1e-14);
  }
}

TEST_CASE("drift failures carry the failing time") {
  ProcessConfig cfg = config_2d(Orientation::plus, 20);
  cfg.drift = DriftSpec::closed_form(
      [](double t) {
        if (t > 0.05) throw std::runtime_error("out of domain");
        return ComplexPoint(cplx(1), cplx(0));
      },
      "partial");
  try {
    run_process(cfg);
    FAIL("expected DriftError");
  } catch (const DriftError& e) {
    CHECK(e.time() == doctest::Approx(0.08));
  }
  cfg.drift = DriftSpec::closed_form([](double) { return ComplexPoint(cplx(NAN), cplx(0)); }, "nan");
  CHECK_THROWS_AS(run_process(cfg), DriftError);
  const DriftSpec field = DriftSpec::field_coupled(
      [](double, const ComplexPoint& z) { return z; });
  CHECK_THROWS_AS(field.evaluate(0.0), std::logic_error);
}

TEST_CASE("config validation") {
  ProcessConfig cfg = config_2d(Orientation::plus, 0);
  CHECK_THROWS_AS(run_process(cfg), std::invalid_argument);
  cfg.steps = 4;
  cfg.z0 = ComplexPoint(cplx(0));
  CHECK_THROWS_AS(run_process(cfg), std::invalid_argument);
}

TEST_CASE("classical limit integrates polynomial drifts exactly") {
  ProcessConfig cfg = config_2d(Orientation::plus, 100);
  const ComplexPoint a(cplx(0.5, 0.1), cplx(-1, 0)), b(cplx(0, 2), cplx(0.3, 0));
  cfg.drift = DriftSpec::closed_form([a, b](double t) { return a + b * (t * t); }, "quadratic");
  const ClassicalPath path = classical_limit(cfg);
  const double t = path.times.back();
  const ComplexPoint exact = cfg.z0 + a * t + b * (t * t * t / 3.0);
  CHECK(max_abs(path.positions.back() - exact) < 1e-13);
  ProcessConfig fc = cfg;
  fc.drift = DriftSpec::field_coupled([](double, const ComplexPoint& z) { return z; });
  CHECK_THROWS_AS(classical_limit(fc), std::invalid_argument);
}

TEST_CASE("property: deviations are multiples of gamma with even integer coefficients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1), e(0.001, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    ProcessConfig cfg = config_2d(trial % 2 ? Orientation::plus : Orientation::minus, 13);
    cfg.params.epsilon = e(rng);
    cfg.drift = DriftSpec::constant(ComplexPoint(cplx(u(rng), u(rng)), cplx(u(rng), u(rng))));
    const ProcessTrajectory traj = run_process(cfg);
    const cplx g = gamma(cfg.params, 2);
    for (long n = 0; n <= 13; ++n)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 2; ++k) {
          const cplx c = traj.deviation(j, n)[k] / g;
          CHECK(std::abs(c.imag()) < 1e-9);
          CHECK(std::abs(c.real() - 2 * std::round(c.real() / 2)) < 1e-9);
        }
  }
}
