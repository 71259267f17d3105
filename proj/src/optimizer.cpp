#include "hybhuff/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hybhuff/error.hpp"

namespace hybhuff {

namespace {

// Memoising evaluator; each distinct m is evaluated once.
class CostOracle {
 public:
  CostOracle(const FrequencyProfile& profile, double alpha, SearchReport& report)
      : profile_(profile), alpha_(alpha), report_(report) {}

  double operator()(std::size_t m) {
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    const double bits = estimate_cost(profile_, m, alpha_);
    memo_.emplace(m, bits);
    report_.evaluated_points.push_back({m, bits});
    return bits;
  }

 private:
  const FrequencyProfile& profile_;
  double alpha_;
  SearchReport& report_;
  std::map<std::size_t, double> memo_;
};

void pick_best(const FrequencyProfile& profile, SearchReport& report) {
  const auto best = std::min_element(report.evaluated_points.begin(), report.evaluated_points.end(),
                                     [](const CostSample& a, const CostSample& b) {
                                       if (a.estimated_bits != b.estimated_bits) return a.estimated_bits < b.estimated_bits;
                                       return a.m < b.m;
                                     });
  report.best_m = best->m;
  report.best_bits = best->estimated_bits;
  report.best_rho =
      profile.distinct() == 0 ? 0.0 : static_cast<double>(best->m) / static_cast<double>(profile.distinct());
}

}  // namespace

SearchReport exhaustive_scan(const FrequencyProfile& profile, double alpha) {
  SearchReport report;
  report.exhaustive = true;
  report.evaluated_points.reserve(profile.distinct() + 1);
  for (std::size_t m = 0; m <= profile.distinct(); ++m) {
    report.evaluated_points.push_back({m, estimate_cost(profile, m, alpha)});
  }
  report.refine_hi = profile.distinct();
  pick_best(profile, report);
  return report;
}

SearchReport coarse_to_fine_search(const FrequencyProfile& profile, double alpha) {
  const std::size_t k = profile.distinct();
  SearchReport report;
  CostOracle cost(profile, alpha, report);
  if (k == 0) {
    cost(0);
    pick_best(profile, report);
    return report;
  }

  std::vector<std::size_t> grid{0};
  for (double rho : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) grid.push_back(huffman_domain_size(rho, k));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  report.coarse_points = grid;

  std::size_t best_index = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (cost(grid[i]) < cost(grid[best_index])) best_index = i;
  }
  std::size_t lo = grid[best_index == 0 ? 0 : best_index - 1];
  std::size_t hi = grid[std::min(best_index + 1, grid.size() - 1)];
  report.refine_lo = lo;
  report.refine_hi = hi;

  // Golden-section on integers in its Fibonacci form, bracket padded to a
  // Fibonacci length. Points past `hi` act as +infinity and are never
  // evaluated.
  std::vector<std::size_t> fib{1, 1};
  while (fib.back() < hi - lo) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  const std::size_t limit = hi;
  auto probe = [&](std::size_t m) {
    return m > limit ? std::numeric_limits<double>::infinity() : cost(m);
  };
  std::size_t n = fib.size() - 1;
  while (n > 2) {
    const std::size_t x1 = lo + fib[n - 2];
    const std::size_t x2 = lo + fib[n - 1];
    if (probe(x1) > probe(x2)) lo = x1;
    --n;
  }
  hi = std::min(lo + fib[n], limit);

  // Local sweep around the best point found.
  std::size_t centre = lo;
  for (std::size_t m = lo; m <= hi; ++m) {
    if (cost(m) < cost(centre)) centre = m;
  }
  for (std::size_t m = centre > 2 ? centre - 2 : 0; m <= std::min(centre + 2, k); ++m) cost(m);

  pick_best(profile, report);
  return report;
}

std::size_t search_evaluation_budget(std::size_t distinct) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double levels = distinct <= 1 ? 0.0 : std::ceil(std::log(static_cast<double>(distinct)) / std::log(phi));
  return 5 + 2 * static_cast<std::size_t>(levels) + 4;
}

}  // namespace hybhuff
