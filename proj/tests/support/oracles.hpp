#pragma once

// Test-only reference implementations. Nothing here calls into the
// library's internals; each helper recomputes its answer the slow way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hybhuff/hypergraph.hpp"

namespace oracle {

using hybhuff::EntityId;

// Bit-at-a-time reader over MSB-first bytes.
inline std::vector<std::uint64_t> read_fields(const std::vector<std::uint8_t>& bytes, unsigned width,
                                              std::size_t count) {
  std::vector<std::uint64_t> out;
  std::size_t bit = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    for (unsigned j = 0; j < width; ++j, ++bit) {
      v = (v << 1) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1u);
    }
    out.push_back(v);
  }
  return out;
}

// Bit-at-a-time writer producing MSB-first, zero-padded bytes.
inline std::vector<std::uint8_t> write_fields(const std::vector<std::uint64_t>& values, unsigned width) {
  std::vector<std::uint8_t> bytes((values.size() * width + 7) / 8, 0);
  std::size_t bit = 0;
  for (std::uint64_t v : values) {
    for (unsigned j = width; j-- > 0; ++bit) {
      if ((v >> j) & 1u) bytes[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    }
  }
  return bytes;
}

inline std::map<EntityId, std::uint64_t> count_symbols(const std::vector<EntityId>& symbols) {
  std::map<EntityId, std::uint64_t> counts;
  for (EntityId s : symbols) ++counts[s];
  return counts;
}

// Shannon entropy in bits of an empirical distribution.
inline double shannon_entropy(const std::map<EntityId, std::uint64_t>& counts) {
  double n = 0.0;
  for (const auto& [s, c] : counts) n += static_cast<double>(c);
  double h = 0.0;
  for (const auto& [s, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

// Minimum weighted code length sum_i f_i l_i over all prefix codes: the
// sum of every merge weight, found by repeatedly merging the two smallest
// entries of a plain sorted vector.
inline std::uint64_t optimal_prefix_cost(std::vector<std::uint64_t> weights) {
  if (weights.size() == 1) return weights[0];  // one symbol still needs one bit
  std::uint64_t cost = 0;
  std::sort(weights.begin(), weights.end());
  while (weights.size() > 1) {
    const std::uint64_t merged = weights[0] + weights[1];
    cost += merged;
    weights.erase(weights.begin(), weights.begin() + 2);
    weights.insert(std::upper_bound(weights.begin(), weights.end(), merged), merged);
  }
  return cost;
}

struct RandomShape {
  std::uint64_t max_vertices = 50;
  std::uint64_t max_hyperedges = 50;
  std::uint64_t max_degree = 8;
  bool allow_duplicates = false;
};

// Uniformly random incidence structure, both sides built independently of
// the library's inversion routine.
inline hybhuff::Hypergraph random_hypergraph(std::mt19937_64& rng, const RandomShape& shape) {
  std::uniform_int_distribution<std::uint64_t> nv_dist(0, shape.max_vertices);
  std::uniform_int_distribution<std::uint64_t> nh_dist(0, shape.max_hyperedges);
  const std::uint64_t nv = nv_dist(rng);
  const std::uint64_t nh = nv == 0 ? 0 : nh_dist(rng);
  std::vector<std::vector<EntityId>> edge_lists(nh);
  std::vector<std::vector<EntityId>> vertex_lists(nv);
  std::uniform_int_distribution<std::uint64_t> deg_dist(0, shape.max_degree);
  for (std::uint64_t e = 0; e < nh; ++e) {
    const std::uint64_t d = std::min<std::uint64_t>(deg_dist(rng), shape.allow_duplicates ? shape.max_degree : nv);
    std::vector<EntityId> members;
    while (members.size() < d) {
      const auto v = static_cast<EntityId>(rng() % nv);
      if (!shape.allow_duplicates && std::find(members.begin(), members.end(), v) != members.end()) continue;
      members.push_back(v);
    }
    for (EntityId v : members) {
      edge_lists[e].push_back(v);
      vertex_lists[v].push_back(static_cast<EntityId>(e));
    }
  }
  // Shuffle vertex-side lists so neither side is sorted.
  for (auto& l : vertex_lists) std::shuffle(l.begin(), l.end(), rng);

  hybhuff::Hypergraph h;
  h.num_vertices = nv;
  h.num_hyperedges = nh;
  auto fill = [](hybhuff::IncidenceLists& out, const std::vector<std::vector<EntityId>>& lists) {
    out.offsets.assign(1, 0);
    out.adjacency.clear();
    for (const auto& l : lists) {
      out.adjacency.insert(out.adjacency.end(), l.begin(), l.end());
      out.offsets.push_back(out.adjacency.size());
    }
  };
  fill(h.vertices, vertex_lists);
  fill(h.hyperedges, edge_lists);
  return h;
}

// Per-entity sorted neighbour lists of one side.
inline std::vector<std::vector<EntityId>> sorted_lists(const hybhuff::IncidenceLists& lists) {
  std::vector<std::vector<EntityId>> out(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    auto n = lists.neighbors(i);
    out[i].assign(n.begin(), n.end());
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

// N samples of ranks 0..K-1 drawn with weight (rank+1)^-z; symbol IDs are
// a fixed random permutation when `shuffle_ids` is set.
inline std::vector<EntityId> zipf_symbols(std::mt19937_64& rng, std::size_t k, double z, std::size_t n,
                                          bool shuffle_ids = false) {
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i) weights[i] = std::pow(static_cast<double>(i + 1), -z);
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::vector<EntityId> ids(k);
  for (std::size_t i = 0; i < k; ++i) ids[i] = static_cast<EntityId>(i);
  if (shuffle_ids) std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<EntityId> out(n);
  for (auto& s : out) s = ids[dist(rng)];
  return out;
}

// A hypergraph whose compressed side (hyperedges, since n_v > n_h) carries
// exactly `symbols`, split into consecutive lists of `per_edge` entries.
inline hybhuff::Hypergraph hypergraph_from_symbols(const std::vector<EntityId>& symbols, std::uint64_t num_vertices,
                                                   std::size_t per_edge) {
  hybhuff::IncidenceLists lists;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    lists.adjacency.push_back(symbols[i]);
    if ((i + 1) % per_edge == 0 || i + 1 == symbols.size()) lists.offsets.push_back(lists.adjacency.size());
  }
  const std::uint64_t nh = lists.offsets.size() - 1;
  return hybhuff::rebuild_dual(hybhuff::Side::Hyperedges, std::move(lists), num_vertices, nh);
}

}  // namespace oracle
