#pragma once

#include <stdexcept>
#include <vector>

namespace epm {

class DegenerateSweepError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Coefficient of determination of the log-log regression.
  double r_squared = 0.0;
};

/// Least-squares fit of log(error) against log(epsilon). Needs at least 3
/// distinct positive epsilons and positive finite errors.
LogLogFit fit_loglog(const std::vector<double>& epsilon, const std::vector<double>& error);

/// Throws DegenerateSweepError unless the list has >= 3 positive, finite,
/// strictly decreasing values.
void validate_sweep(const std::vector<double>& epsilon);

/// True when every value is strictly below its predecessor.
bool strictly_decreasing(const std::vector<double>& values);

}  // namespace epm
