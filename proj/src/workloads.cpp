#include "hybhuff/workloads.hpp"

#include <algorithm>

#include "hybhuff/error.hpp"

namespace hybhuff {

ArchiveSource::ArchiveSource(const HybridArchive& archive) {
  const ArchiveHeader& header = archive.header;
  IncidenceLists lists;
  lists.offsets.reserve(header.compressed_entities() + 1);
  lists.adjacency.reserve(header.num_incidences);
  AdjacencyStream stream(archive);
  for (const auto& [entity, neighbors] : stream) {
    lists.adjacency.insert(lists.adjacency.end(), neighbors.begin(), neighbors.end());
    lists.offsets.push_back(lists.adjacency.size());
  }
  h_ = rebuild_dual(header.compressed_side, std::move(lists), header.num_vertices, header.num_hyperedges);
}

std::vector<std::uint64_t> bfs(const TraversalSource& src, EntityId root) {
  const std::uint64_t nv = src.num_vertices();
  if (root >= nv) {
    throw Error(ErrorKind::Domain, "BFS root " + std::to_string(root) + " out of range (" + std::to_string(nv) +
                                       " vertices)");
  }
  std::vector<std::uint64_t> level(nv, kUnreached);
  std::vector<bool> edge_seen(src.num_hyperedges(), false);
  std::vector<EntityId> frontier{root};
  std::vector<EntityId> next;
  level[root] = 0;
  for (std::uint64_t depth = 1; !frontier.empty(); ++depth) {
    next.clear();
    for (EntityId v : frontier) {
      for (EntityId e : src.hyperedges_of(v)) {
        if (edge_seen[e]) continue;
        edge_seen[e] = true;
        for (EntityId u : src.vertices_of(e)) {
          if (level[u] != kUnreached) continue;
          level[u] = depth;
          next.push_back(u);
        }
      }
    }
    std::swap(frontier, next);
  }
  return level;
}

std::vector<double> pagerank(const TraversalSource& src, double damping, unsigned iterations) {
  if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorKind::Domain, "damping must lie in (0, 1)");
  const std::uint64_t nv = src.num_vertices();
  const std::uint64_t nh = src.num_hyperedges();
  if (nv == 0) return {};
  const double uniform = 1.0 / static_cast<double>(nv);
  std::vector<double> rank(nv, uniform);
  std::vector<double> edge_mass(nh);
  std::vector<double> next(nv);
  for (unsigned it = 0; it < iterations; ++it) {
    std::fill(edge_mass.begin(), edge_mass.end(), 0.0);
    double dangling = 0.0;
    for (EntityId v = 0; v < nv; ++v) {
      const auto edges = src.hyperedges_of(v);
      if (edges.empty()) {
        dangling += rank[v];
        continue;
      }
      const double share = rank[v] / static_cast<double>(edges.size());
      for (EntityId e : edges) edge_mass[e] += share;
    }
    const double base = (1.0 - damping) * uniform + damping * dangling * uniform;
    std::fill(next.begin(), next.end(), base);
    for (EntityId e = 0; e < nh; ++e) {
      const auto members = src.vertices_of(e);
      if (members.empty()) continue;
      const double share = damping * edge_mass[e] / static_cast<double>(members.size());
      for (EntityId u : members) next[u] += share;
    }
    std::swap(rank, next);
  }
  return rank;
}

std::vector<std::uint8_t> kcore_label_propagation(const TraversalSource& src, std::uint64_t k) {
  if (k == 0) throw Error(ErrorKind::Domain, "k-core threshold must be at least 1");
  const std::uint64_t nv = src.num_vertices();
  const std::uint64_t nh = src.num_hyperedges();
  std::vector<std::uint8_t> vertex_alive(nv, 1);
  std::vector<std::uint8_t> edge_alive(nh, 1);
  std::vector<std::uint64_t> vertex_live_edges(nv);
  std::vector<std::uint64_t> edge_live_vertices(nh);
  std::vector<EntityId> dead_vertices;
  std::vector<EntityId> dead_edges;

  for (EntityId v = 0; v < nv; ++v) {
    vertex_live_edges[v] = src.hyperedges_of(v).size();
    if (vertex_live_edges[v] < k) {
      vertex_alive[v] = 0;
      dead_vertices.push_back(v);
    }
  }
  for (EntityId e = 0; e < nh; ++e) {
    edge_live_vertices[e] = src.vertices_of(e).size();
    if (edge_live_vertices[e] < 2) {
      edge_alive[e] = 0;
      dead_edges.push_back(e);
    }
  }
  // Each removal is processed once.
  while (!dead_vertices.empty() || !dead_edges.empty()) {
    while (!dead_vertices.empty()) {
      const EntityId v = dead_vertices.back();
      dead_vertices.pop_back();
      for (EntityId e : src.hyperedges_of(v)) {
        if (!edge_alive[e]) continue;
        if (--edge_live_vertices[e] < 2) {
          edge_alive[e] = 0;
          dead_edges.push_back(e);
        }
      }
    }
    while (!dead_edges.empty()) {
      const EntityId e = dead_edges.back();
      dead_edges.pop_back();
      for (EntityId v : src.vertices_of(e)) {
        if (!vertex_alive[v]) continue;
        if (--vertex_live_edges[v] < k) {
          vertex_alive[v] = 0;
          dead_vertices.push_back(v);
        }
      }
    }
  }
  return vertex_alive;
}

}  // namespace hybhuff
