#include <cmath>
#include <random>

#include "doctest.h"
#include "epm/core_model.hpp"

using namespace epm;

TEST_CASE("gamma matches the closed form in 1D and 2D") {
  PhysicalParams p{1.3, 0.7, 0.02, {}};
  const cplx g1 = gamma(p, 1), g2 = gamma(p, 2);
  CHECK(g1.real() == doctest::Approx(std::sqrt(1.3 * 0.02 / (2 * 0.7))).epsilon(1e-15));
  CHECK(g1.imag() == doctest::Approx(g1.real()).epsilon(1e-15));
  CHECK(g2.real() == doctest::Approx(std::sqrt(1.3 * 0.02 / (4 * 0.7))).epsilon(1e-15));
  // gamma^2 = i hbar eps / m (1D) and i hbar eps / 2m (2D)
  CHECK(std::abs(g1 * g1 - cplx(0, 1.3 * 0.02 / 0.7)) < 1e-15);
  CHECK(std::abs(g2 * g2 - cplx(0, 1.3 * 0.02 / 1.4)) < 1e-15);
  CHECK_THROWS_AS(gamma(p, 3), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(PhysicalParams{}.validate());
  CHECK_THROWS_AS((PhysicalParams{1.0, -1.0, 0.1, {}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PhysicalParams{0.0, 1.0, 0.1, {}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PhysicalParams{1.0, 1.0, 0.0, {}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PhysicalParams{1.0, 1.0, NAN, {}}.validate()), std::invalid_argument);
}

TEST_CASE("square vertices and orientation") {
  const VertexFrame plus = VertexFrame::square(Orientation::plus);
  const VertexFrame minus = VertexFrame::square(Orientation::minus);
  CHECK(plus.vertex(0) == Vertex{1, 1});
  CHECK(plus.vertex(1) == Vertex{1, -1});
  CHECK(plus.vertex(2) == Vertex{-1, -1});
  CHECK(plus.vertex(3) == Vertex{-1, 1});
  for (int j = 0; j < 4; ++j) {
    CHECK(plus.permuted_index(1, j) == (j + 1) % 4);
    CHECK(minus.permuted_index(1, j) == (j + 3) % 4);
  }
  CHECK_THROWS_AS(plus.vertex(4), std::out_of_range);
  CHECK_THROWS_AS(plus.permuted_index(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(VertexFrame(3, Orientation::plus), std::invalid_argument);
}

TEST_CASE("line frame swaps its two vertices") {
  const VertexFrame line = VertexFrame::line();
  CHECK(line.size() == 2);
  CHECK(line.vertex(0)[0] == 1);
  CHECK(line.vertex(1)[0] == -1);
  CHECK(line.permuted_index(1, 0) == 1);
  CHECK(line.permuted_index(2, 0) == 0);
}

TEST_CASE("property: s is periodic and the offsets sum to zero") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> steps(0, 1000000);
  for (int dim : {1, 2})
    for (Orientation o : {Orientation::plus, Orientation::minus}) {
      const VertexFrame f(dim, o);
      for (int trial = 0; trial < 200; ++trial) {
        const long n = steps(rng);
        Vertex sum{0, 0};
        for (int j = 0; j < f.size(); ++j) {
          CHECK(f.permuted_index(n + f.period(), j) == f.permuted_index(n, j));
          const Vertex d = vertex_offset(f, n, j);
          sum[0] += d[0];
          sum[1] += d[1];
        }
        CHECK(sum == Vertex{0, 0});
        if (n % f.period() == 0)
          for (int j = 0; j < f.size(); ++j) CHECK(vertex_offset(f, n, j) == Vertex{0, 0});
      }
    }
}

TEST_CASE("step increments telescope to the vertex offset") {
  const PhysicalParams p;
  const VertexFrame f = VertexFrame::square(Orientation::minus);
  const cplx g = gamma(p, 2);
  for (int j = 0; j < 4; ++j) {
    ComplexPoint acc = ComplexPoint::zero(2);
    for (long n = 1; n <= 7; ++n) acc += step_increment(f, p, n, j);
    CHECK(max_abs(acc - scale(g, vertex_offset(f, 7, j), 2)) < 1e-16);
  }
  CHECK_THROWS_AS(step_increment(f, p, 0, 0), std::out_of_range);
}

TEST_CASE("orientation strings") {
  CHECK(orientation_from_string("+") == Orientation::plus);
  CHECK(orientation_from_string("minus") == Orientation::minus);
  CHECK(std::string(to_string(Orientation::minus)) == "-");
  CHECK_THROWS_AS(orientation_from_string("x"), std::invalid_argument);
}

TEST_CASE("complex points") {
  ComplexPoint a(cplx(1, 2), cplx(3, -1));
  ComplexPoint b(cplx(0, 1), cplx(2, 0));
  CHECK(dot(a, b) == cplx(1, 2) * cplx(0, 1) + cplx(3, -1) * cplx(2, 0));
  CHECK((a + b)[1] == cplx(5, -1));
  CHECK_THROWS_AS(a + ComplexPoint(cplx(1)), std::invalid_argument);
  CHECK(!ComplexPoint(cplx(NAN, 0)).finite());
}
