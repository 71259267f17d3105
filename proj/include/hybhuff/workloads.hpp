#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hybhuff/archive.hpp"
#include "hybhuff/hypergraph.hpp"

namespace hybhuff {

// Neighbour access for traversal algorithms, independent of storage.
class TraversalSource {
 public:
  virtual ~TraversalSource() = default;
  virtual std::uint64_t num_vertices() const = 0;
  virtual std::uint64_t num_hyperedges() const = 0;
  virtual std::span<const EntityId> hyperedges_of(EntityId vertex) const = 0;
  virtual std::span<const EntityId> vertices_of(EntityId hyperedge) const = 0;
};

class RawSource final : public TraversalSource {
 public:
  explicit RawSource(const Hypergraph& h) : h_(h) {}
  std::uint64_t num_vertices() const override { return h_.num_vertices; }
  std::uint64_t num_hyperedges() const override { return h_.num_hyperedges; }
  std::span<const EntityId> hyperedges_of(EntityId v) const override { return h_.vertices.neighbors(v); }
  std::span<const EntityId> vertices_of(EntityId e) const override { return h_.hyperedges.neighbors(e); }

 private:
  const Hypergraph& h_;
};

// Streams the compressed side out of an archive through AdjacencyStream
// and rebuilds the other side by inversion.
class ArchiveSource final : public TraversalSource {
 public:
  explicit ArchiveSource(const HybridArchive& archive);
  std::uint64_t num_vertices() const override { return h_.num_vertices; }
  std::uint64_t num_hyperedges() const override { return h_.num_hyperedges; }
  std::span<const EntityId> hyperedges_of(EntityId v) const override { return h_.vertices.neighbors(v); }
  std::span<const EntityId> vertices_of(EntityId e) const override { return h_.hyperedges.neighbors(e); }

 private:
  Hypergraph h_;
};

inline constexpr std::uint64_t kUnreached = std::numeric_limits<std::uint64_t>::max();

// Vertex-hop levels from `root` (vertex -> hyperedge -> vertex is one hop);
// unreachable vertices hold kUnreached.
std::vector<std::uint64_t> bfs(const TraversalSource& src, EntityId root);

inline constexpr double kDefaultDamping = 0.85;

// Two-step walk vertex -> hyperedge -> vertex with uniform splits at each
// step. Mass of vertices without hyperedges is spread uniformly.
std::vector<double> pagerank(const TraversalSource& src, double damping = kDefaultDamping,
                             unsigned iterations = 20);

// Peels vertices with fewer than k live hyperedges and hyperedges with
// fewer than 2 live vertices until nothing changes. 1 marks survivors.
std::vector<std::uint8_t> kcore_label_propagation(const TraversalSource& src, std::uint64_t k);

}  // namespace hybhuff
