#include <cmath>
#include <random>

#include "doctest.h"
#include "epm/reference.hpp"
#include "epm/variational.hpp"

using namespace epm;

namespace {

const cplx I{0.0, 1.0};

ComplexScalarField quadratic(cplx a, cplx b) {
  ComplexScalarField f;
  f.value = [a, b](const ComplexPoint& z) { return 0.5 * a * z[0] * z[0] + b * z[0]; };
  f.gradient = [a, b](const ComplexPoint& z) { return ComplexPoint(a * z[0] + b); };
  f.hessian = [a](const ComplexPoint&) { return std::array<cplx, 4>{a, 0, 0, 0}; };
  return f;
}

ComplexScalarField value_only(std::function<cplx(const ComplexPoint&)> fn, int dim = 1) {
  ComplexScalarField f;
  f.dimension = dim;
  f.value = std::move(fn);
  return f;
}

}  // namespace

TEST_CASE("complex minimum of simple holomorphic functions") {
  const ComplexMin a = complex_min(value_only([](const ComplexPoint& z) { return z[0] * z[0]; }));
  CHECK(max_abs(a.argmin) < 1e-10);
  CHECK(std::abs(a.value) < 1e-14);

  const cplx c(1, 2);
  const ComplexMin b =
      complex_min(value_only([c](const ComplexPoint& z) { return (z[0] - c) * (z[0] - c); }));
  CHECK(std::abs(b.argmin[0] - c) < 1e-10);

  // z^2 + (2 + 2i) z: stationary at -1 - i with value -(1 + i)^2 = -2i.
  const ComplexMin d = complex_min(quadratic(2.0, cplx(2, 2)));
  CHECK(std::abs(d.argmin[0] - cplx(-1, -1)) < 1e-14);
  CHECK(std::abs(d.value - cplx(0, -2)) < 1e-14);

  ComplexScalarField two = value_only(
      [](const ComplexPoint& z) { return (z[0] - 1.0) * (z[0] - 1.0) + 2.0 * (z[1] + I) * (z[1] + I); }, 2);
  const ComplexMin e = complex_min(two);
  CHECK(std::abs(e.argmin[0] - 1.0) < 1e-9);
  CHECK(std::abs(e.argmin[1] + I) < 1e-9);
}

TEST_CASE("complex minimum failure modes") {
  auto far = value_only([](const ComplexPoint& z) { return (z[0] - 20.0) * (z[0] - 20.0); });
  CHECK_THROWS_AS(complex_min(far), NoSaddleError);
  SearchBox wide;
  wide.half_width = 30;
  CHECK(std::abs(complex_min(far, wide).argmin[0] - 20.0) < 1e-9);

  CHECK_THROWS_AS(complex_min(quadratic(-1.0, 0.0)), NonConvexError);
  ComplexScalarField conj = value_only([](const ComplexPoint& z) { return std::conj(z[0]) * z[0]; });
  conj.holomorphic = false;
  CHECK_THROWS_AS(complex_min(conj), std::invalid_argument);
}

TEST_CASE("Cauchy-Riemann residual separates holomorphic from non-holomorphic") {
  const ComplexPoint z(cplx(0.3, -0.7));
  CHECK(cauchy_riemann_residual(value_only([](const ComplexPoint& w) { return std::exp(w[0]); }), z) <
        1e-8);
  CHECK(cauchy_riemann_residual(value_only([](const ComplexPoint& w) { return std::conj(w[0]); }), z) >
        0.5);
}

TEST_CASE("Fenchel-Legendre transform") {
  const ComplexScalarField half = quadratic(1.0, 0.0);
  CHECK(std::abs(complex_fenchel_legendre(half, ComplexPoint(cplx(1, 1))).value - I) < 1e-14);
  CHECK(std::abs(complex_fenchel_legendre(half, ComplexPoint(cplx{})).value) < 1e-14);

  // Lagrangian 1/2 m u^2 - V maps to the Hamiltonian p^2/2m + V.
  const double m = 2.5;
  const cplx V(0.4, 0.1);
  ComplexScalarField lag = quadratic(m, 0.0);
  lag.value = [m, V](const ComplexPoint& u) { return 0.5 * m * u[0] * u[0] - V; };
  for (cplx p : {cplx(1, 0), cplx(-0.5, 2), cplx(3, -1)})
    CHECK(std::abs(complex_fenchel_legendre(lag, ComplexPoint(p)).value - (p * p / (2 * m) + V)) <
          1e-12);
}

TEST_CASE("property: the transform is an involution on strictly convex quadratics") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(0.5, 3), u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = pos(rng);
    const cplx b(u(rng), u(rng));
    const ComplexScalarField f = quadratic(a, b);
    SearchBox inner, outer;
    inner.half_width = 50;
    outer.half_width = 8;
    ComplexScalarField dual;
    dual.value = [&](const ComplexPoint& p) { return complex_fenchel_legendre(f, p, inner).value; };
    dual.gradient = [&](const ComplexPoint& p) {
      return complex_fenchel_legendre(f, p, inner).maximizer;
    };
    const ComplexPoint z(0.5 * cplx(u(rng), u(rng)));
    const cplx back = complex_fenchel_legendre(dual, z, outer).value;
    CHECK(std::abs(back - f(z)) < 1e-9);
  }
}

TEST_CASE("classical Bellman recursion") {
  std::vector<double> x;
  for (int i = 0; i <= 60; ++i) x.push_back(-3.0 + 0.1 * i);
  LagrangianSpec lag;
  lag.mass = 1.0;

  const GridAction zero = classical_hj_dp(lag, x, std::vector<double>(x.size(), 0.0), 0.05, 10);
  zero.validate();
  CHECK(zero.times.size() == 11);
  for (const auto& row : zero.values)
    for (double s : row) CHECK(std::abs(s) < 1e-14);

  // A linearly interpolated linear action is propagated without error:
  // S = p0 x - p0^2 t / 2m.
  const double p0 = 0.5;
  std::vector<double> lin;
  for (double xi : x) lin.push_back(p0 * xi);
  const GridAction s = classical_hj_dp(lag, x, lin, 0.05, 20);
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(s.values.back()[i] == doctest::Approx(p0 * x[i] - 0.5 * p0 * p0 * 1.0).epsilon(1e-10));
  for (double v : velocity_from_action(s, s.times.size() - 1, lag.mass))
    CHECK(v == doctest::Approx(p0).epsilon(1e-9));

  std::vector<double> steep;
  for (double xi : x) steep.push_back(20.0 * xi);
  CHECK_THROWS_AS(classical_hj_dp(lag, x, steep, 0.05, 2), VelocityBoundError);
  CHECK_THROWS_AS(classical_hj_dp(lag, x, lin, 0.0, 2), std::invalid_argument);
}

TEST_CASE("GridAction validation") {
  GridAction a;
  a.x = {0, 1, 2};
  a.times = {0};
  a.values = {{0, 1, 2}};
  CHECK_NOTHROW(a.validate());
  a.x = {0, 2, 1};
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a.x = {0, 1, 2};
  a.values = {{0, 1}};
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a.values = {{0, NAN, 1}};
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}

TEST_CASE("least-action residual") {
  const PhysicalParams p{1.0, 1.0, 0.01, {}};
  const Axis ax{-4, 4, 64};
  const Grid grid = Grid::plane(ax, ax);
  const double kx = commensurate_wavenumber(ax, 1.5), ky = commensurate_wavenumber(ax, -0.8);
  auto wave = [&](double t) {
    return sample_wavefield(grid, t, [&](double x, double y) {
      return std::exp(I * (kx * x + ky * y - 0.5 * (kx * kx + ky * ky) * t));
    });
  };
  ProcessConfig cfg;
  cfg.params = p;
  cfg.frame = VertexFrame::square(Orientation::plus);
  const double r = least_action_step_residual(wave(0.5), wave(0.51), free_potential(), cfg);
  CHECK(r < 1e-11);

  WaveField zero = wave(0.5), zero1 = wave(0.51);
  std::fill(zero.values.begin(), zero.values.end(), cplx{});
  std::fill(zero1.values.begin(), zero1.values.end(), cplx{});
  CHECK_THROWS_AS(least_action_step_residual(zero, zero1, free_potential(), cfg), MaskedNodeError);
  CHECK_THROWS_AS(least_action_step_residual(wave(0.5), wave(0.52), free_potential(), cfg),
                  std::invalid_argument);

  ProcessConfig line = cfg;
  line.frame = VertexFrame::line();
  const Grid g1 = Grid::line(-4, 4, 64);
  const WaveField a = sample_wavefield(g1, 0.5, [](double, double) { return cplx(1); });
  WaveField b = a;
  b.time = 0.51;
  CHECK_THROWS_AS(least_action_step_residual(a, b, free_potential(), line), std::invalid_argument);
}
