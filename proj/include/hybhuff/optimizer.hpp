#pragma once

#include <cstddef>
#include <vector>

#include "hybhuff/frequency.hpp"

namespace hybhuff {

struct SearchReport {
  std::vector<CostSample> evaluated_points;  // in evaluation order, each m once
  std::size_t best_m = 0;
  double best_rho = 0.0;
  double best_bits = 0.0;
  // Coarse grid (ascending m) and the bracket handed to refinement.
  std::vector<std::size_t> coarse_points;
  std::size_t refine_lo = 0;
  std::size_t refine_hi = 0;
  bool exhaustive = false;

  std::size_t evaluations() const noexcept { return evaluated_points.size(); }
};

// Evaluates every m in [0, K]; ties resolve to the smaller m.
SearchReport exhaustive_scan(const FrequencyProfile& profile, double alpha = kDefaultAlpha);

// Coarse grid rho in {0, 1e-4, 1e-3, 1e-2, 1e-1, 1}, then golden-section
// refinement over integer m inside the bracket around the best coarse
// point, finished by a +-2 sweep around the converged m.
SearchReport coarse_to_fine_search(const FrequencyProfile& profile, double alpha = kDefaultAlpha);

// Upper bound on coarse_to_fine_search evaluations: 5 + 2 ceil(log_phi K) + 4.
std::size_t search_evaluation_budget(std::size_t distinct);

}  // namespace hybhuff
