#include "hybhuff/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "hybhuff/bitstream.hpp"
#include "hybhuff/error.hpp"

namespace hybhuff {

std::uint64_t FrequencyProfile::count_of(EntityId symbol) const {
  const auto rank = rank_of(symbol);
  return rank ? ranked_counts[*rank] : 0;
}

std::optional<std::size_t> FrequencyProfile::rank_of(EntityId symbol) const {
  const auto it = std::lower_bound(by_symbol_.begin(), by_symbol_.end(), symbol,
                                   [](const auto& entry, EntityId s) { return entry.first < s; });
  if (it == by_symbol_.end() || it->first != symbol) return std::nullopt;
  return it->second;
}

FrequencyProfile build_frequency_profile(std::span<const EntityId> symbols) {
  FrequencyProfile p;
  p.total = symbols.size();

  std::vector<std::pair<EntityId, std::uint64_t>> counts;  // (symbol, count) ascending symbol
  if (!symbols.empty()) {
    const EntityId max_symbol = *std::max_element(symbols.begin(), symbols.end());
    if (max_symbol <= 8 * symbols.size() + (1u << 20)) {
      std::vector<std::uint64_t> dense(std::size_t{max_symbol} + 1, 0);
      for (EntityId s : symbols) ++dense[s];
      for (std::size_t s = 0; s < dense.size(); ++s) {
        if (dense[s] > 0) counts.emplace_back(static_cast<EntityId>(s), dense[s]);
      }
    } else {
      std::vector<EntityId> sorted(symbols.begin(), symbols.end());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        counts.emplace_back(sorted[i], j - i);
        i = j;
      }
    }
  }

  std::vector<std::pair<EntityId, std::uint64_t>> ranked = counts;
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  const std::size_t k = ranked.size();
  p.ranked_symbols.resize(k);
  p.ranked_counts.resize(k);
  p.prefix_count.assign(k + 1, 0);
  p.prefix_entropy_bits.assign(k + 1, 0.0);
  p.suffix_max_symbol.assign(k + 1, 0);
  const double n = static_cast<double>(p.total);
  for (std::size_t i = 0; i < k; ++i) {
    p.ranked_symbols[i] = ranked[i].first;
    p.ranked_counts[i] = ranked[i].second;
    const double f = static_cast<double>(ranked[i].second);
    p.prefix_count[i + 1] = p.prefix_count[i] + ranked[i].second;
    p.prefix_entropy_bits[i + 1] = p.prefix_entropy_bits[i] + f * std::log2(n / f);
  }
  for (std::size_t i = k; i-- > 0;) {
    p.suffix_max_symbol[i] = std::max(p.suffix_max_symbol[i + 1], p.ranked_symbols[i]);
  }

  p.by_symbol_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) p.by_symbol_.emplace_back(p.ranked_symbols[i], static_cast<std::uint32_t>(i));
  std::sort(p.by_symbol_.begin(), p.by_symbol_.end());
  return p;
}

std::size_t huffman_domain_size(double rho, std::size_t distinct) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorKind::Domain, "Huffman ratio must lie in [0, 1]");
  auto m = static_cast<std::size_t>(std::floor(rho * static_cast<double>(distinct)));
  m = std::min(m, distinct);
  // rho = m / K can land just below m after the multiply.
  if (m < distinct && static_cast<double>(m + 1) / static_cast<double>(distinct) <= rho) ++m;
  return m;
}

unsigned tail_bitwidth(const FrequencyProfile& profile, std::size_t m) {
  if (m >= profile.distinct()) return 0;
  return bitwidth_for(profile.suffix_max_symbol[m]);
}

double estimate_cost(const FrequencyProfile& profile, std::size_t m, double alpha) {
  if (m > profile.distinct()) {
    throw Error(ErrorKind::Domain, "domain size " + std::to_string(m) + " exceeds " +
                                       std::to_string(profile.distinct()) + " distinct symbols");
  }
  const double tail = static_cast<double>(profile.total - profile.prefix_count[m]);
  return profile.prefix_entropy_bits[m] + tail_bitwidth(profile, m) * tail + alpha * static_cast<double>(m);
}

CostProfile evaluate_cost_profile(const FrequencyProfile& profile, double alpha) {
  CostProfile out;
  out.alpha = alpha;
  out.samples.reserve(profile.distinct() + 1);
  for (std::size_t m = 0; m <= profile.distinct(); ++m) {
    out.samples.push_back({m, estimate_cost(profile, m, alpha)});
    if (out.samples.back().estimated_bits < out.samples[out.minimizer_m].estimated_bits) out.minimizer_m = m;
  }
  out.minimizer_rho = profile.distinct() == 0
                          ? 0.0
                          : static_cast<double>(out.minimizer_m) / static_cast<double>(profile.distinct());
  return out;
}

double generalized_harmonic(std::size_t k, double z) {
  double sum = 0.0;
  for (std::size_t i = k; i >= 1; --i) sum += std::pow(static_cast<double>(i), -z);
  return sum;
}

double asymptotic_cost_zipf(double rho, std::size_t distinct, double skew, double alpha_prime, unsigned bitwidth) {
  if (!(skew > 1.0)) throw Error(ErrorKind::Model, "Zipf cost model requires skew > 1");
  if (distinct == 0) throw Error(ErrorKind::Model, "Zipf cost model requires at least one symbol");
  const std::size_t m = huffman_domain_size(rho, distinct);
  const double harmonic = generalized_harmonic(distinct, skew);
  double head = 0.0;
  double tail_mass = 0.0;
  for (std::size_t i = 1; i <= distinct; ++i) {
    const double w = std::pow(static_cast<double>(i), -skew);
    if (i <= m) {
      head += std::log2(static_cast<double>(i)) * w;
    } else {
      tail_mass += w;
    }
  }
  return skew / harmonic * head + bitwidth * (tail_mass / harmonic) + alpha_prime * rho;
}

double SizeCurveFit::operator()(double x) const { return a + b * x + c * x * x + d * std::log(x); }

SizeCurveFit fit_size_curve(std::span<const CurvePoint> points) {
  if (points.size() < 4) throw Error(ErrorKind::Fit, "need at least 4 points, got " + std::to_string(points.size()));
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(rows, 4);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = points[static_cast<std::size_t>(i)].x;
    if (!(x > 0.0)) throw Error(ErrorKind::Domain, "curve fit requires x > 0");
    design(i, 0) = 1.0;
    design(i, 1) = x;
    design(i, 2) = x * x;
    design(i, 3) = std::log(x);
    y(i) = points[static_cast<std::size_t>(i)].y;
  }
  // Equilibrate columns so the rank test is scale free.
  Eigen::Vector4d scale;
  for (Eigen::Index j = 0; j < 4; ++j) {
    scale(j) = design.col(j).norm();
    if (scale(j) == 0.0) throw Error(ErrorKind::Fit, "design matrix has a zero column");
    design.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4) throw Error(ErrorKind::Fit, "singular design matrix (fewer than 4 independent x values)");
  const Eigen::VectorXd solution = qr.solve(y);
  SizeCurveFit fit;
  fit.a = solution(0) / scale(0);
  fit.b = solution(1) / scale(1);
  fit.c = solution(2) / scale(2);
  fit.d = solution(3) / scale(3);
  fit.residual_norm = (design * solution - y).norm();
  return fit;
}

}  // namespace hybhuff
