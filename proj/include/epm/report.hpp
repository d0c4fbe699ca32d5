#pragma once

#include <string>
#include <vector>

namespace epm {

/// How `measured` is compared with `expected`.
enum class Comparison {
  absolute,  ///< |measured - expected| <= tolerance
  relative,  ///< |measured - expected| <= tolerance |expected|
  at_most,   ///< measured <= expected
  at_least,  ///< measured >= expected
};

struct CheckRecord {
  std::string id;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::absolute;
  bool passed = false;
  double wall_time_s = 0.0;
  std::string note;
};

/// Fills in `passed` from the comparison (NaN never passes).
CheckRecord make_check(std::string id, double measured, double expected, double tolerance,
                       Comparison comparison, double wall_time_s = 0.0, std::string note = {});

struct RunReport {
  std::string scenario;
  std::vector<CheckRecord> checks;

  bool passed() const;
  /// Appends a check, rejecting duplicate ids.
  void add(CheckRecord check);
};

const char* to_string(Comparison c);
Comparison comparison_from_string(const std::string& s);

}  // namespace epm
