#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hybhuff/hypergraph.hpp"

namespace hybhuff {

// Default per-symbol tree overhead (bits) used by the cost model.
inline constexpr double kDefaultAlpha = 32.0;

// Symbol statistics of one adjacency stream, ranked by descending count
// (ties by ascending symbol). Prefix arrays have K + 1 entries with a
// leading zero so that index m covers the top-m symbols.
struct FrequencyProfile {
  std::uint64_t total = 0;                   // N
  std::vector<EntityId> ranked_symbols;      // K entries
  std::vector<std::uint64_t> ranked_counts;  // non-increasing
  std::vector<std::uint64_t> prefix_count;   // P<=m
  std::vector<double> prefix_entropy_bits;   // H<=m = sum f_i log2(N / f_i)
  std::vector<EntityId> suffix_max_symbol;   // max symbol over ranks m+1..K; 0 at m = K

  std::size_t distinct() const noexcept { return ranked_symbols.size(); }
  EntityId max_symbol() const noexcept { return suffix_max_symbol.empty() ? 0 : suffix_max_symbol.front(); }

  // Count of a symbol (0 when absent). O(log K).
  std::uint64_t count_of(EntityId symbol) const;
  // Zero-based rank of a symbol, if present. O(log K).
  std::optional<std::size_t> rank_of(EntityId symbol) const;

 private:
  friend FrequencyProfile build_frequency_profile(std::span<const EntityId>);
  std::vector<std::pair<EntityId, std::uint32_t>> by_symbol_;  // (symbol, rank), sorted
};

FrequencyProfile build_frequency_profile(std::span<const EntityId> symbols);

// Number of top-ranked symbols covered by a Huffman ratio: floor(rho * K),
// exact for ratios of the form m / K.
std::size_t huffman_domain_size(double rho, std::size_t distinct);

// Fixed width of the bitwise tail when the top m symbols are Huffman coded;
// 0 when the tail is empty.
unsigned tail_bitwidth(const FrequencyProfile& profile, std::size_t m);

// Total estimated bits for Huffman domain size m:
//   H<=m + tail_bitwidth(m) * (N - P<=m) + alpha * m.
double estimate_cost(const FrequencyProfile& profile, std::size_t m, double alpha = kDefaultAlpha);

struct CostSample {
  std::size_t m = 0;
  double estimated_bits = 0.0;
};

// The estimate evaluated at every m in [0, K] and its minimiser.
struct CostProfile {
  std::vector<CostSample> samples;
  double alpha = kDefaultAlpha;
  std::size_t minimizer_m = 0;
  double minimizer_rho = 0.0;
};

CostProfile evaluate_cost_profile(const FrequencyProfile& profile, double alpha = kDefaultAlpha);

// Closed-form expected bits per symbol for a Zipf(z) source over K ranks
// with the top floor(rho K) Huffman coded. Requires z > 1.
double asymptotic_cost_zipf(double rho, std::size_t distinct, double skew, double alpha_prime, unsigned bitwidth);

// Generalised harmonic number H_K(z).
double generalized_harmonic(std::size_t k, double z);

struct CurvePoint {
  double x = 0.0;  // Huffman ratio in percent
  double y = 0.0;  // size
};

// y = a + b x + c x^2 + d ln(x), ordinary least squares.
struct SizeCurveFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double residual_norm = 0.0;

  double operator()(double x) const;
};

SizeCurveFit fit_size_curve(std::span<const CurvePoint> points);

}  // namespace hybhuff
