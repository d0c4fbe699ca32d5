#include "epm/report.hpp"

#include <cmath>
#include <stdexcept>

namespace epm {

CheckRecord make_check(std::string id, double measured, double expected, double tolerance,
                       Comparison comparison, double wall_time_s, std::string note) {
  CheckRecord c{std::move(id), measured, expected, tolerance, comparison, false, wall_time_s,
                std::move(note)};
  if (std::isnan(measured)) return c;
  switch (comparison) {
    case Comparison::absolute: c.passed = std::abs(measured - expected) <= tolerance; break;
    case Comparison::relative:
      c.passed = std::abs(measured - expected) <= tolerance * std::abs(expected);
      break;
    case Comparison::at_most: c.passed = measured <= expected; break;
    case Comparison::at_least: c.passed = measured >= expected; break;
  }
  return c;
}

bool RunReport::passed() const {
  for (const CheckRecord& c : checks)
    if (!c.passed) return false;
  return true;
}

void RunReport::add(CheckRecord check) {
  for (const CheckRecord& c : checks)
    if (c.id == check.id) throw std::logic_error("RunReport: duplicate check id " + check.id);
  checks.push_back(std::move(check));
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::absolute: return "absolute";
    case Comparison::relative: return "relative";
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
  }
  return "absolute";
}

Comparison comparison_from_string(const std::string& s) {
  if (s == "absolute") return Comparison::absolute;
  if (s == "relative") return Comparison::relative;
  if (s == "at_most") return Comparison::at_most;
  if (s == "at_least") return Comparison::at_least;
  throw std::invalid_argument("unknown comparison: " + s);
}

}  // namespace epm
