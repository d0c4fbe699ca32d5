#include "epm/fit.hpp"

#include <cmath>

namespace epm {

void validate_sweep(const std::vector<double>& epsilon) {
  if (epsilon.size() < 3) throw DegenerateSweepError("sweep needs at least 3 points");
  for (double e : epsilon)
    if (!(e > 0.0) || !std::isfinite(e)) throw DegenerateSweepError("sweep values must be > 0");
  if (!strictly_decreasing(epsilon))
    throw DegenerateSweepError("sweep values must be strictly decreasing");
}

bool strictly_decreasing(const std::vector<double>& values) {
  for (size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return true;
}

LogLogFit fit_loglog(const std::vector<double>& epsilon, const std::vector<double>& error) {
  if (epsilon.size() != error.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (epsilon.size() < 3) throw DegenerateSweepError("fit_loglog: need at least 3 points");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon[i] > 0.0) || !std::isfinite(epsilon[i]))
      throw DegenerateSweepError("fit_loglog: epsilon must be positive");
    if (!(error[i] > 0.0) || !std::isfinite(error[i]))
      throw std::domain_error("fit_loglog: errors must be positive and finite");
    lx.push_back(std::log(epsilon[i]));
    ly.push_back(std::log(error[i]));
  }
  const double n = double(lx.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 1e-24) throw DegenerateSweepError("fit_loglog: epsilons are not distinct");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace epm
