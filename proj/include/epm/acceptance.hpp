#pragma once

#include <string>
#include <vector>

#include "epm/report.hpp"

namespace epm {

/// One acceptance criterion and the checks that decide it.
struct Criterion {
  std::string id;
  std::string title;
  std::vector<CheckRecord> checks;

  bool passed() const;
};

Criterion accept_spin();
Criterion accept_heisenberg_2d();
Criterion accept_moments_1d();
Criterion accept_convergence_order();
Criterion accept_path_irregularity();
Criterion accept_dynkin_residual();
Criterion accept_schrodinger();
Criterion accept_complex_hj();
Criterion accept_least_action();
Criterion accept_bohm();
Criterion accept_coupled();
Criterion accept_classical_dp();
Criterion accept_compton();

/// Every criterion, in order.
std::vector<Criterion> acceptance_suite();

/// The suite flattened into a report; check ids are "<criterion>.<check>".
RunReport run_acceptance();
RunReport to_report(const std::vector<Criterion>& criteria);

}  // namespace epm
