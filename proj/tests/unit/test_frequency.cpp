#include <doctest.h>

#include <cmath>
#include <random>

#include "hybhuff/archive.hpp"
#include "hybhuff/error.hpp"
#include "hybhuff/frequency.hpp"
#include "oracles.hpp"

using namespace hybhuff;

namespace {

// estimate_cost recomputed from raw symbols without prefix arrays.
double direct_estimate(const std::vector<EntityId>& symbols, std::size_t m, double alpha) {
  auto counts = oracle::count_symbols(symbols);
  std::vector<std::pair<std::uint64_t, EntityId>> ranked;
  for (const auto& [s, c] : counts) ranked.emplace_back(c, s);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const double n = static_cast<double>(symbols.size());
  double head = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = static_cast<double>(ranked[i].first);
    head += f * std::log2(n / f);
  }
  std::uint64_t tail = 0;
  EntityId tail_max = 0;
  for (std::size_t i = m; i < ranked.size(); ++i) {
    tail += ranked[i].first;
    tail_max = std::max(tail_max, ranked[i].second);
  }
  const double width = m == ranked.size() ? 0.0 : std::max(1.0, std::ceil(std::log2(tail_max + 1.0)));
  return head + width * static_cast<double>(tail) + alpha * static_cast<double>(m);
}

}  // namespace

TEST_CASE("hand-countable profile") {
  const std::vector<EntityId> symbols{1, 1, 2, 3, 1};
  const FrequencyProfile p = build_frequency_profile(symbols);
  CHECK(p.total == 5);
  CHECK(p.distinct() == 3);
  CHECK(p.ranked_symbols == std::vector<EntityId>{1, 2, 3});
  CHECK(p.ranked_counts == std::vector<std::uint64_t>{3, 1, 1});
  CHECK(p.prefix_count[1] == 3);
  CHECK(p.prefix_count[3] == 5);
  CHECK(p.count_of(1) == 3);
  CHECK(p.count_of(7) == 0);
  CHECK(p.rank_of(3) == 2u);
  CHECK_FALSE(p.rank_of(0).has_value());
}

TEST_CASE("uniform profile entropy") {
  const std::vector<EntityId> symbols{0, 1, 2, 3};
  const FrequencyProfile p = build_frequency_profile(symbols);
  CHECK(p.prefix_entropy_bits[4] == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("empty profile") {
  const FrequencyProfile p = build_frequency_profile({});
  CHECK(p.total == 0);
  CHECK(p.distinct() == 0);
  CHECK(p.prefix_count == std::vector<std::uint64_t>{0});
  CHECK(estimate_cost(p, 0) == 0.0);
}

TEST_CASE("sparse symbol IDs use the sorted path") {
  const std::vector<EntityId> symbols{4'000'000'000u, 7, 4'000'000'000u};
  const FrequencyProfile p = build_frequency_profile(symbols);
  CHECK(p.ranked_symbols == std::vector<EntityId>{4'000'000'000u, 7});
  CHECK(p.max_symbol() == 4'000'000'000u);
}

TEST_CASE("prefix entropy matches a direct Shannon computation") {
  std::mt19937_64 rng(12);
  const auto symbols = oracle::zipf_symbols(rng, 2000, 1.2, 100'000);
  const FrequencyProfile p = build_frequency_profile(symbols);
  const double direct = oracle::shannon_entropy(oracle::count_symbols(symbols));
  CHECK(std::abs(p.prefix_entropy_bits.back() / static_cast<double>(p.total) - direct) < 1e-9);
  for (std::size_t i = 1; i < p.distinct(); ++i) {
    REQUIRE(p.ranked_counts[i] <= p.ranked_counts[i - 1]);
    REQUIRE(p.prefix_entropy_bits[i + 1] >= p.prefix_entropy_bits[i]);
  }
  CHECK(p.prefix_count.back() == p.total);
}

TEST_CASE("estimate_cost endpoints") {
  std::mt19937_64 rng(1);
  const auto symbols = oracle::zipf_symbols(rng, 40, 1.5, 5000);
  const FrequencyProfile p = build_frequency_profile(symbols);
  const std::size_t k = p.distinct();
  CHECK(estimate_cost(p, k, 7.0) == doctest::Approx(p.prefix_entropy_bits[k] + 7.0 * k));

  const std::vector<EntityId> uniform{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(estimate_cost(build_frequency_profile(uniform), 0, 0.0) == 24.0);

  try {
    estimate_cost(p, k + 1);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("estimate_cost equals the from-scratch computation") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 60;
    const auto symbols = oracle::zipf_symbols(rng, k, 0.5 + (rng() % 200) / 100.0, 1 + rng() % 3000, true);
    const FrequencyProfile p = build_frequency_profile(symbols);
    const double alpha = static_cast<double>(rng() % 64);
    for (std::size_t m = 0; m <= p.distinct(); ++m) {
      REQUIRE(estimate_cost(p, m, alpha) == doctest::Approx(direct_estimate(symbols, m, alpha)).epsilon(1e-12));
    }
  }
}

TEST_CASE("consecutive domain sizes differ by one symbol's terms") {
  std::mt19937_64 rng(4);
  const auto symbols = oracle::zipf_symbols(rng, 30, 1.1, 2000, true);
  const FrequencyProfile p = build_frequency_profile(symbols);
  const double alpha = 5.0;
  const double n = static_cast<double>(p.total);
  for (std::size_t m = 0; m < p.distinct(); ++m) {
    const double f = static_cast<double>(p.ranked_counts[m]);
    const double tail_before = n - static_cast<double>(p.prefix_count[m]);
    const double delta = f * std::log2(n / f) + tail_bitwidth(p, m + 1) * (tail_before - f) -
                         tail_bitwidth(p, m) * tail_before + alpha;
    REQUIRE(estimate_cost(p, m + 1, alpha) - estimate_cost(p, m, alpha) == doctest::Approx(delta).epsilon(1e-9));
  }
}

TEST_CASE("estimate tracks the real encoder on a 50-symbol Zipfian stream") {
  std::mt19937_64 rng(50);
  const auto symbols = oracle::zipf_symbols(rng, 50, 1.3, 20'000, true);
  const Hypergraph h = oracle::hypergraph_from_symbols(symbols, 1000, 200);
  const HybridEncoder encoder(h);
  REQUIRE(encoder.side() == Side::Hyperedges);
  const FrequencyProfile& p = encoder.profile();
  REQUIRE(p.distinct() == 50);
  for (std::size_t m = 0; m <= p.distinct(); ++m) {
    const HybridArchive a = encoder.encode_domain(m);
    const double actual = static_cast<double>(a.payload_bits() + a.tree.bit_length);
    const double estimate = estimate_cost(p, m, kDefaultAlpha);
    INFO("m = " << m);
    CHECK(std::abs(estimate - actual) <= 0.15 * actual);
  }
}

TEST_CASE("huffman_domain_size floors and is exact for m / K") {
  CHECK(huffman_domain_size(0.0, 10) == 0);
  CHECK(huffman_domain_size(1.0, 10) == 10);
  CHECK(huffman_domain_size(0.25, 10) == 2);
  for (std::size_t k = 1; k < 500; ++k) {
    for (std::size_t m = 0; m <= k; ++m) {
      REQUIRE(huffman_domain_size(static_cast<double>(m) / static_cast<double>(k), k) == m);
    }
  }
  CHECK_THROWS_AS(huffman_domain_size(1.5, 10), Error);
  CHECK_THROWS_AS(huffman_domain_size(-0.1, 10), Error);
}

TEST_CASE("cost profile locates the global minimum") {
  std::mt19937_64 rng(9);
  const auto symbols = oracle::zipf_symbols(rng, 300, 1.4, 30'000, true);
  const FrequencyProfile p = build_frequency_profile(symbols);
  const CostProfile cp = evaluate_cost_profile(p, 16.0);
  REQUIRE(cp.samples.size() == p.distinct() + 1);
  for (const auto& s : cp.samples) REQUIRE(cp.samples[cp.minimizer_m].estimated_bits <= s.estimated_bits);
  CHECK(cp.minimizer_rho == doctest::Approx(static_cast<double>(cp.minimizer_m) / p.distinct()));
}

TEST_CASE("closed-form Zipf cost") {
  SUBCASE("rho = 0 puts all mass in the tail") {
    CHECK(asymptotic_cost_zipf(0.0, 1000, 1.5, 0.01, 10) == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("rho = 1 without overhead is the entropy-like sum") {
    double harmonic = 0.0;
    double sum = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      harmonic += std::pow(i, -1.5);
      sum += std::log2(static_cast<double>(i)) / std::pow(i, 1.5);
    }
    CHECK(asymptotic_cost_zipf(1.0, 1000, 1.5, 0.0, 10) == doctest::Approx(1.5 / harmonic * sum).epsilon(1e-12));
  }
  SUBCASE("interior minimum on a grid") {
    // Grid values computed here, independently of the library.
    double harmonic = 0.0;
    for (int i = 1; i <= 1000; ++i) harmonic += std::pow(i, -1.5);
    auto model = [&](int j) {
      const double rho = j / 100.0;
      const int m = j * 10;
      double head = 0.0;
      double tail = 0.0;
      for (int i = 1; i <= 1000; ++i) {
        if (i <= m) {
          head += std::log2(static_cast<double>(i)) * std::pow(i, -1.5);
        } else {
          tail += std::pow(i, -1.5);
        }
      }
      return 1.5 / harmonic * head + 10.0 * tail / harmonic + 0.01 * rho;
    };
    int best = 1;
    for (int j = 1; j <= 99; ++j) {
      REQUIRE(asymptotic_cost_zipf(j / 100.0, 1000, 1.5, 0.01, 10) == doctest::Approx(model(j)).epsilon(1e-12));
      if (model(j) < model(best)) best = j;
    }
    CHECK(best > 1);
    CHECK(best < 99);
    CHECK(model(1) > model(best));
    CHECK(model(99) > model(best));
  }
  SUBCASE("skew at or below one is outside the model") {
    try {
      asymptotic_cost_zipf(0.5, 100, 1.0, 0.0, 8);
      FAIL("expected a model error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Model);
    }
  }
}

TEST_CASE("size curve fit") {
  SUBCASE("exact linear data") {
    std::vector<CurvePoint> pts;
    for (int x = 1; x <= 20; ++x) pts.push_back({double(x), 2.0 + 3.0 * x});
    const SizeCurveFit f = fit_size_curve(pts);
    CHECK(f.a == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.b == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(std::abs(f.c) < 1e-6);
    CHECK(std::abs(f.d) < 1e-6);
    CHECK(f.residual_norm < 1e-6);
  }
  SUBCASE("exact log data") {
    std::vector<CurvePoint> pts;
    for (int x = 1; x <= 20; ++x) pts.push_back({double(x), 100.0 - 10.0 * std::log(double(x))});
    const SizeCurveFit f = fit_size_curve(pts);
    CHECK(std::abs(f.d + 10.0) < 1e-6);
    CHECK(std::abs(f.a - 100.0) < 1e-6);
  }
  SUBCASE("degenerate designs are rejected") {
    std::vector<CurvePoint> few{{1, 1}, {2, 2}, {3, 3}};
    CHECK_THROWS_AS(fit_size_curve(few), Error);
    std::vector<CurvePoint> repeated{{2, 1}, {2, 2}, {3, 3}, {3, 4}, {2, 5}};
    try {
      fit_size_curve(repeated);
      FAIL("expected a fit error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Fit);
    }
    std::vector<CurvePoint> nonpositive{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    CHECK_THROWS_AS(fit_size_curve(nonpositive), Error);
  }
}

TEST_CASE("closed-form Zipf cost is linear in rho between floor(rho K) jumps") {
  const std::size_t k = 137;
  const double alpha_prime = 0.05;
  double previous = asymptotic_cost_zipf(0.0, k, 1.3, alpha_prime, 12);
  double previous_rho = 0.0;
  std::size_t previous_m = 0;
  std::size_t jumps = 0;
  for (int i = 1; i <= 5000; ++i) {
    const double rho = i / 5000.0;
    const double value = asymptotic_cost_zipf(rho, k, 1.3, alpha_prime, 12);
    const std::size_t m = huffman_domain_size(rho, k);
    if (m == previous_m) {
      REQUIRE(value - previous == doctest::Approx(alpha_prime * (rho - previous_rho)).epsilon(1e-9));
    } else {
      ++jumps;
    }
    previous = value;
    previous_rho = rho;
    previous_m = m;
  }
  CHECK(jumps == k);
}
