#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hybhuff/archive.hpp"
#include "hybhuff/error.hpp"
#include "hybhuff/workloads.hpp"
#include "oracles.hpp"

using namespace hybhuff;

namespace {

Hypergraph from_edges(std::uint64_t nv, const std::vector<std::vector<EntityId>>& edges) {
  IncidenceLists lists;
  for (const auto& e : edges) {
    lists.adjacency.insert(lists.adjacency.end(), e.begin(), e.end());
    lists.offsets.push_back(lists.adjacency.size());
  }
  return rebuild_dual(Side::Hyperedges, std::move(lists), nv, edges.size());
}

}  // namespace

TEST_CASE("bfs on the toy hypergraph") {
  const Hypergraph h = from_edges(3, {{0, 1}, {1, 2}});
  const RawSource src(h);
  CHECK(bfs(src, 0) == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(bfs(src, 1) == std::vector<std::uint64_t>{1, 0, 1});

  const Hypergraph star = from_edges(3, {{0, 1, 2}});
  CHECK(bfs(RawSource(star), 0) == std::vector<std::uint64_t>{0, 1, 1});
}

TEST_CASE("bfs leaves disconnected vertices unreached") {
  const Hypergraph h = from_edges(4, {{0, 1}});
  const auto levels = bfs(RawSource(h), 0);
  CHECK(levels[2] == kUnreached);
  CHECK(levels[3] == kUnreached);
  CHECK_THROWS_AS(bfs(RawSource(h), 4), Error);
}

TEST_CASE("bfs levels differ by at most one along each hyperedge") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(rng, {80, 60, 6, false});
    if (h.num_vertices == 0) continue;
    const auto levels = bfs(RawSource(h), 0);
    for (std::uint64_t e = 0; e < h.num_hyperedges; ++e) {
      const auto members = h.hyperedges.neighbors(e);
      for (EntityId a : members)
        for (EntityId b : members) {
          REQUIRE((levels[a] == kUnreached) == (levels[b] == kUnreached));
          if (levels[a] != kUnreached) REQUIRE(levels[a] + 1 >= levels[b]);
        }
    }
  }
}

TEST_CASE("pagerank basics") {
  const Hypergraph h = from_edges(4, {{0, 1}, {2, 3}});
  const auto start = pagerank(RawSource(h), 0.85, 0);
  for (double x : start) CHECK(x == doctest::Approx(0.25));
  const auto scores = pagerank(RawSource(h), 0.85, 30);
  for (double x : scores) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(pagerank(RawSource(h), 1.0), Error);
  CHECK_THROWS_AS(pagerank(RawSource(h), 0.0), Error);
}

TEST_CASE("pagerank conserves mass with dangling vertices") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(rng, {100, 40, 5, false});
    for (unsigned iters = 0; iters <= 12; ++iters) {
      const auto scores = pagerank(RawSource(h), 0.85, iters);
      REQUIRE(scores.size() == h.num_vertices);
      if (scores.empty()) break;
      REQUIRE(std::abs(std::accumulate(scores.begin(), scores.end(), 0.0) - 1.0) <= 1e-9);
      for (double x : scores) REQUIRE(x > 0.0);
    }
  }
}

TEST_CASE("pagerank favours the hub of a star") {
  const Hypergraph h = from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto scores = pagerank(RawSource(h));
  CHECK(scores[0] > scores[1]);
  CHECK(scores[1] == doctest::Approx(scores[2]));
  CHECK(scores[2] == doctest::Approx(scores[3]));
}

TEST_CASE("k-core peeling") {
  // Vertices 0..2 share three hyperedges; vertex 3 hangs off one.
  const Hypergraph h = from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  CHECK(kcore_label_propagation(RawSource(h), 1) == std::vector<std::uint8_t>{1, 1, 1, 1, 0});
  CHECK(kcore_label_propagation(RawSource(h), 2) == std::vector<std::uint8_t>{1, 1, 1, 0, 0});
  CHECK(kcore_label_propagation(RawSource(h), 3) == std::vector<std::uint8_t>{0, 0, 0, 0, 0});
  CHECK_THROWS_AS(kcore_label_propagation(RawSource(h), 0), Error);

  // Singleton hyperedges never support a vertex.
  const Hypergraph singles = from_edges(2, {{0}, {0}, {1}});
  CHECK(kcore_label_propagation(RawSource(singles), 1) == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("k-core survivors satisfy the degree condition") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(rng, {60, 80, 5, false});
    const std::uint64_t k = 1 + trial % 4;
    const auto labels = kcore_label_propagation(RawSource(h), k);
    for (std::uint64_t v = 0; v < h.num_vertices; ++v) {
      if (!labels[v]) continue;
      std::uint64_t live = 0;
      for (EntityId e : h.vertices.neighbors(v)) {
        std::uint64_t members = 0;
        for (EntityId u : h.hyperedges.neighbors(e)) members += labels[u];
        if (members >= 2) ++live;
      }
      REQUIRE(live >= k);
    }
  }
}

TEST_CASE("compressed backend matches the raw backend") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(rng, {150, 150, 10, trial % 4 == 0});
    if (h.num_vertices == 0) continue;
    const RawSource raw(h);
    for (double rho : {0.0, 0.2, 1.0}) {
      const HybridArchive a = encode(h, rho);
      const ArchiveSource packed(a);
      REQUIRE(packed.num_vertices() == h.num_vertices);
      REQUIRE(bfs(packed, 0) == bfs(raw, 0));
      REQUIRE(kcore_label_propagation(packed, 2) == kcore_label_propagation(raw, 2));
      const auto x = pagerank(packed);
      const auto y = pagerank(raw);
      for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(x[i] - y[i]) <= 1e-12);
    }
  }
}
