#include "epm/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stencil.hpp"

namespace epm {

namespace {

ComplexPoint unit(int dim, int k, cplx h) {
  ComplexPoint e = ComplexPoint::zero(dim);
  e[k] = h;
  return e;
}

/// 4th-order central difference of g along real direction k.
template <class G>
auto directional(const G& g, const ComplexPoint& z, int k, double h) {
  const int n = z.dimension();
  return (g(z - unit(n, k, 2 * h)) - 8.0 * g(z - unit(n, k, h)) + 8.0 * g(z + unit(n, k, h)) -
          g(z + unit(n, k, 2 * h))) /
         (12.0 * h);
}

double step_for(const ComplexPoint& z) { return 1e-3 * std::max(1.0, max_abs(z)); }

std::array<cplx, 2> solve(const std::array<cplx, 4>& a, const ComplexPoint& b, int n) {
  if (n == 1) {
    if (a[0] == cplx{}) throw NoSaddleError("complex_min: singular Hessian");
    return {b[0] / a[0], cplx{}};
  }
  const cplx det = a[0] * a[3] - a[1] * a[2];
  if (det == cplx{}) throw NoSaddleError("complex_min: singular Hessian");
  return {(b[0] * a[3] - a[1] * b[1]) / det, (a[0] * b[1] - a[2] * b[0]) / det};
}

double min_eigen(double a, double b, double d) {
  return 0.5 * (a + d) - std::hypot(0.5 * (a - d), b);
}

/// Hessian of P = Re f with respect to the real parts (imag = false) or the
/// imaginary parts (imag = true), by second differences.
std::array<double, 4> real_hessian(const ComplexScalarField& f, const ComplexPoint& z, bool imag,
                                   double h) {
  const int n = f.dimension;
  const cplx dir = imag ? cplx(0.0, h) : cplx(h, 0.0);
  auto p = [&](const ComplexPoint& w) { return f(w).real(); };
  std::array<double, 4> out{};
  const double p0 = p(z);
  for (int a = 0; a < n; ++a) {
    const ComplexPoint ea = unit(n, a, dir);
    out[a * 2 + a] = (p(z + ea) - 2.0 * p0 + p(z - ea)) / (h * h);
  }
  if (n == 2) {
    const ComplexPoint e0 = unit(2, 0, dir), e1 = unit(2, 1, dir);
    const double m = (p(z + e0 + e1) - p(z + e0 - e1) - p(z - e0 + e1) + p(z - e0 - e1)) / (4 * h * h);
    out[1] = out[2] = m;
  }
  return out;
}

void check_convexity(const ComplexScalarField& f, const SearchBox& box, const ComplexPoint& at) {
  const int n = f.dimension;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-box.half_width, box.half_width);
  const double h = 1e-3 * std::max(1.0, box.half_width);
  for (int s = 0; s <= 32; ++s) {
    ComplexPoint z = at;
    if (s > 0) {
      z = box.center;
      for (int k = 0; k < n; ++k) z[k] += cplx(u(rng), u(rng));
    }
    const auto hx = real_hessian(f, z, false, h);
    const auto hy = real_hessian(f, z, true, h);
    const double scale = 1.0 + std::abs(hx[0]) + std::abs(hx[3]);
    const double tol = 1e-7 * scale;
    const double ex = n == 1 ? hx[0] : min_eigen(hx[0], hx[1], hx[3]);
    const double ey = n == 1 ? -hy[0] : min_eigen(-hy[0], -hy[1], -hy[3]);
    if (!(ex > tol) || !(ey > tol))
      throw NonConvexError("complex_min: P is not convex in x and concave in y over the box");
  }
}

/// The default box is centred at the 1D origin; widen it to the field's
/// dimension.
SearchBox resolve_box(const SearchBox& box, int dim) {
  if (!(box.half_width > 0.0)) throw std::invalid_argument("complex_min: half_width must be > 0");
  if (box.center.dimension() == dim) return box;
  if (max_abs(box.center) != 0.0) throw std::invalid_argument("complex_min: box dimension");
  return {ComplexPoint::zero(dim), box.half_width};
}

}  // namespace

ComplexPoint ComplexScalarField::grad(const ComplexPoint& z) const {
  if (gradient) return gradient(z);
  ComplexPoint g = ComplexPoint::zero(dimension);
  const double h = step_for(z);
  for (int k = 0; k < dimension; ++k) g[k] = directional(value, z, k, h);
  return g;
}

std::array<cplx, 4> ComplexScalarField::hess(const ComplexPoint& z) const {
  if (hessian) return hessian(z);
  std::array<cplx, 4> out{};
  const double h = step_for(z);
  auto gk = [this](int k) { return [this, k](const ComplexPoint& w) { return grad(w)[k]; }; };
  for (int a = 0; a < dimension; ++a)
    for (int b = 0; b < dimension; ++b) out[a * 2 + b] = directional(gk(a), z, b, h);
  if (dimension == 2) out[1] = out[2] = 0.5 * (out[1] + out[2]);
  return out;
}

double cauchy_riemann_residual(const ComplexScalarField& f, const ComplexPoint& z) {
  const double h = 1e-5 * std::max(1.0, max_abs(z));
  double worst = 0.0;
  for (int k = 0; k < f.dimension; ++k) {
    const ComplexPoint ex = unit(f.dimension, k, cplx(h, 0.0));
    const ComplexPoint ey = unit(f.dimension, k, cplx(0.0, h));
    const cplx dx = (f(z + ex) - f(z - ex)) / (2 * h);
    const cplx dy = (f(z + ey) - f(z - ey)) / (2 * h);
    worst = std::max(worst, std::abs(dy - cplx(0.0, 1.0) * dx) / std::max(1.0, std::abs(dx)));
  }
  return worst;
}

bool SearchBox::contains(const ComplexPoint& z) const {
  const ComplexPoint d = z - center;
  for (int k = 0; k < d.dimension(); ++k)
    if (std::abs(d[k].real()) > half_width || std::abs(d[k].imag()) > half_width) return false;
  return true;
}

ComplexMin complex_min(const ComplexScalarField& f, const SearchBox& box_in) {
  if (!f.value) throw std::invalid_argument("complex_min: field has no value function");
  if (f.dimension != 1 && f.dimension != 2)
    throw std::invalid_argument("complex_min: dimension must be 1 or 2");
  if (!f.holomorphic) throw std::invalid_argument("complex_min: field must be holomorphic");
  const SearchBox box = resolve_box(box_in, f.dimension);

  ComplexPoint z = box.center;
  bool converged = false;
  for (int it = 0; it < 100 && !converged; ++it) {
    const ComplexPoint g = f.grad(z);
    const auto d = solve(f.hess(z), g, f.dimension);
    ComplexPoint step = ComplexPoint::zero(f.dimension);
    for (int k = 0; k < f.dimension; ++k) step[k] = d[k];
    z -= step;
    if (!z.finite()) throw NoSaddleError("complex_min: Newton iteration diverged");
    const double bound = 1e-14 * (1.0 + max_abs(z));
    converged = max_abs(step) <= bound || max_abs(g) == 0.0;
    if (it > 1 && max_abs(z - box.center) > 100.0 * box.half_width)
      throw NoSaddleError("complex_min: Newton iteration left the search box");
  }
  if (!converged) {
    // Rounding can stall the last few bits; accept a vanishing gradient.
    if (max_abs(f.grad(z)) > 1e-10 * (1.0 + std::abs(f(z))))
      throw NoSaddleError("complex_min: Newton iteration did not converge");
  }
  if (!box.contains(z)) throw NoSaddleError("complex_min: no saddle point inside the search box");
  check_convexity(f, box, z);
  return {z, f(z)};
}

FenchelResult complex_fenchel_legendre(const ComplexScalarField& f, const ComplexPoint& p,
                                       const SearchBox& box) {
  if (p.dimension() != f.dimension) throw std::invalid_argument("complex_fenchel_legendre: dimension");
  ComplexScalarField g;
  g.dimension = f.dimension;
  g.holomorphic = f.holomorphic;
  g.value = [&f, p](const ComplexPoint& z) { return f(z) - dot(p, z); };
  g.gradient = [&f, p](const ComplexPoint& z) { return f.grad(z) - p; };
  g.hessian = [&f](const ComplexPoint& z) { return f.hess(z); };
  const ComplexMin m = complex_min(g, box);
  return {-m.value, m.argmin};
}

// ---------------------------------------------------------------------------
// Classical Bellman recursion

double LagrangianSpec::operator()(double x, double u) const {
  const double v = potential.value ? potential(ComplexPoint(cplx(x, 0.0))).real() : 0.0;
  return 0.5 * mass * u * u - v;
}

void GridAction::validate() const {
  if (x.size() < 2) throw std::invalid_argument("GridAction: need at least two nodes");
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("GridAction: grid not strictly increasing");
  if (values.size() != times.size()) throw std::invalid_argument("GridAction: time levels");
  for (const auto& row : values) {
    if (row.size() != x.size()) throw std::invalid_argument("GridAction: row size");
    for (double s : row)
      if (!std::isfinite(s)) throw std::invalid_argument("GridAction: non-finite action");
  }
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& s, double at) {
  auto it = std::upper_bound(x.begin(), x.end(), at);
  size_t i = static_cast<size_t>(it - x.begin());
  i = std::clamp<size_t>(i, 1, x.size() - 1);
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return s[i - 1] + w * (s[i] - s[i - 1]);
}

}  // namespace

GridAction classical_hj_dp(const LagrangianSpec& lagrangian, const std::vector<double>& x,
                           const std::vector<double>& initial, double epsilon, long steps,
                           const DpOptions& options) {
  if (!(lagrangian.mass > 0.0)) throw std::invalid_argument("classical_hj_dp: mass must be > 0");
  if (!(epsilon > 0.0) || steps < 0) throw std::invalid_argument("classical_hj_dp: eps, steps");
  if (initial.size() != x.size()) throw std::invalid_argument("classical_hj_dp: S0 size");
  if (options.samples < 3 || !(options.velocity_bound > 0.0))
    throw std::invalid_argument("classical_hj_dp: velocity search options");

  GridAction out;
  out.x = x;
  out.times.push_back(0.0);
  out.values.push_back(initial);
  out.validate();

  const int n = options.samples;
  const double bound = options.velocity_bound;
  const double du = 2.0 * bound / (n - 1);
  std::vector<double> lag_potential(x.size());
  for (size_t i = 0; i < x.size(); ++i) lag_potential[i] = lagrangian(x[i], 0.0);

  for (long k = 1; k <= steps; ++k) {
    const std::vector<double>& prev = out.values.back();
    std::vector<double> next(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      auto cost = [&](double u) {
        return interpolate(x, prev, x[i] - u * epsilon) +
               (0.5 * lagrangian.mass * u * u + lag_potential[i]) * epsilon;
      };
      int best = 0;
      double best_cost = cost(-bound);
      for (int s = 1; s < n; ++s) {
        const double c = cost(-bound + s * du);
        if (c < best_cost) best_cost = c, best = s;
      }
      if (best == 0 || best == n - 1)
        throw VelocityBoundError("classical_hj_dp: minimiser on the velocity search boundary");
      const double lo = -bound + (best - 1) * du;
      const double fine = 2.0 * du / (n - 1);
      for (int s = 0; s < n; ++s) best_cost = std::min(best_cost, cost(lo + s * fine));
      next[i] = best_cost;
    }
    out.values.push_back(std::move(next));
    out.times.push_back(double(k) * epsilon);
  }
  return out;
}

std::vector<double> velocity_from_action(const GridAction& action, size_t k, double mass) {
  action.validate();
  const auto& s = action.values.at(k);
  const auto& x = action.x;
  const size_t n = x.size();
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t a = i == 0 ? 0 : i - 1;
    const size_t b = i + 1 == n ? n - 1 : i + 1;
    v[i] = (s[b] - s[a]) / (x[b] - x[a]) / mass;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Generalised least action

double least_action_step_residual(const WaveField& before, const WaveField& after,
                                  const Potential& potential, const ProcessConfig& cfg,
                                  const LeastActionOptions& options) {
  const PhysicalParams& p = cfg.params;
  p.validate();
  if (cfg.frame.dimension() != 2 || before.grid.dimension() != 2)
    throw std::invalid_argument("least_action_step_residual: 2D fields and frame required");
  if (!(before.grid == after.grid))
    throw std::invalid_argument("least_action_step_residual: grids differ");
  const double eps = p.epsilon;
  if (std::abs(after.time - before.time - eps) > 1e-9 * std::max(1.0, std::abs(after.time)))
    throw std::invalid_argument("least_action_step_residual: fields must be eps apart");
  if (options.stride < 1) throw std::invalid_argument("least_action_step_residual: stride");

  const Grid& g = after.grid;
  const auto mb = density_mask(before, options.rho_floor);
  const auto ma = density_mask(after, options.rho_floor);
  std::vector<std::uint8_t> valid(ma.size());
  for (size_t i = 0; i < valid.size(); ++i) valid[i] = mb[i] && ma[i];

  const double hbar = p.hbar, m = p.mass;
  const cplx gam = gamma(p, 2);
  std::array<std::array<double, 2>, 4> d{};
  for (int j = 0; j < 4; ++j) {
    const Vertex a = cfg.frame.permuted(4, j), b = cfg.frame.permuted(3, j);
    d[j] = {double(a[0] - b[0]), double(a[1] - b[1])};
  }

  double worst = -1.0;
  for (int ix = 0; ix < g.axis(0).nodes; ix += options.stride) {
    for (int iy = 0; iy < g.axis(1).nodes; iy += options.stride) {
      const size_t c = g.index(ix, iy);
      const auto ja = action_jet(after, c, valid, hbar);
      if (!ja) continue;
      const auto jb = action_jet(before, c, valid, hbar);
      if (!jb) continue;
      const std::array<cplx, 2> v{ja->gradient[0] / m, ja->gradient[1] / m};
      const cplx ds = cplx(0.0, -hbar) * std::log(before.values[c] / after.values[c]);
      cplx sum{};
      for (int j = 0; j < 4; ++j) {
        const cplx dx = -v[0] * eps - gam * d[j][0];
        const cplx dy = -v[1] * eps - gam * d[j][1];
        sum += ds + jb->gradient[0] * dx + jb->gradient[1] * dy +
               0.5 * (jb->dxx * dx * dx + 2.0 * jb->dxy * dx * dy + jb->dyy * dy * dy);
      }
      const auto x = g.coords(c);
      const cplx lag = 0.5 * m * (v[0] * v[0] + v[1] * v[1]) - potential(x[0], x[1], after.time);
      worst = std::max(worst, std::abs(0.25 * sum + lag * eps));
    }
  }
  if (worst < 0.0) throw MaskedNodeError("least_action_step_residual: no valid node");
  return worst;
}

}  // namespace epm
