#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybhuff {

using EntityId = std::uint32_t;

// Which half of the bipartite incidence structure a list belongs to.
enum class Side : std::uint8_t { Vertices = 0, Hyperedges = 1 };

const char* to_string(Side side);

// One side of the incidence structure in CSR form: offsets has one entry
// per entity plus a trailing sentinel equal to adjacency.size().
struct IncidenceLists {
  std::vector<std::uint64_t> offsets{0};
  std::vector<EntityId> adjacency;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  std::uint64_t degree(std::size_t i) const noexcept { return offsets[i + 1] - offsets[i]; }
  std::span<const EntityId> neighbors(std::size_t i) const noexcept {
    return {adjacency.data() + offsets[i], adjacency.data() + offsets[i + 1]};
  }
  bool operator==(const IncidenceLists&) const = default;
};

// Bipartite hypergraph: vertices list their incident hyperedges and
// hyperedges list their member vertices.
struct Hypergraph {
  std::uint64_t num_vertices = 0;
  std::uint64_t num_hyperedges = 0;
  IncidenceLists vertices;    // vertex -> hyperedge IDs
  IncidenceLists hyperedges;  // hyperedge -> vertex IDs

  std::uint64_t num_incidences() const noexcept { return vertices.adjacency.size(); }
  const IncidenceLists& side(Side s) const noexcept { return s == Side::Vertices ? vertices : hyperedges; }
  bool operator==(const Hypergraph&) const = default;
};

struct ParseOptions {
  // Run the O(N log N) incidence duality check.
  bool strict = false;
};

// AdjacencyHypergraph text: header line, then n_v, m_v, n_h, m_h, the n_v
// vertex offsets, m_v vertex adjacency entries, n_h hyperedge offsets and
// m_h hyperedge adjacency entries (whitespace separated).
Hypergraph parse_adjacency_hypergraph(std::string_view text, const ParseOptions& options = {});

// One decimal integer per line after the header line. Deterministic.
std::string serialize_adjacency_hypergraph(const Hypergraph& h);

// Binary mirror: magic "HGB1", four little-endian u64 counts (n_v, m_v,
// n_h, m_h), u64 offsets (no sentinel) and u32 adjacency, vertex side first.
Hypergraph parse_binary_hypergraph(std::span<const std::uint8_t> bytes, const ParseOptions& options = {});
std::vector<std::uint8_t> serialize_binary_hypergraph(const Hypergraph& h);

// Reads either format from disk, dispatching on the leading magic bytes.
Hypergraph load_hypergraph(const std::string& path, const ParseOptions& options = {});
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file(const std::string& path, std::string_view text);

// Checks every structural invariant; throws Structure or Range errors.
void validate_structure(const Hypergraph& h);
// Vertex v lists hyperedge h exactly as often as h lists v. Throws
// Consistency on violation.
void check_duality(const Hypergraph& h);

// Inverts one side. `lists` belongs to `side`, which has `num_sources`
// entities referencing IDs in [0, num_targets). Rebuilt lists hold source
// IDs in ascending order.
IncidenceLists invert_incidence(const IncidenceLists& lists, std::uint64_t num_targets);

// Builds the full hypergraph from one complete side.
Hypergraph rebuild_dual(Side side, IncidenceLists lists, std::uint64_t num_vertices, std::uint64_t num_hyperedges);

// Sorts every adjacency list on both sides.
Hypergraph canonicalize(Hypergraph h);

// Per-entity multiset equality of both sides.
bool same_incidence(const Hypergraph& a, const Hypergraph& b);

struct ZipfianSpec {
  std::uint64_t num_vertices = 0;
  std::uint64_t num_hyperedges = 0;
  std::uint64_t num_incidences = 0;
  double skew = 1.0;  // z; vertex i (1-based rank) drawn with weight 1/i^z
  std::uint64_t seed = 0;
};

// Hyperedge lists sampled from a Zipfian vertex distribution, duplicates
// within a hyperedge rejected, vertex side rebuilt by inversion.
Hypergraph generate_zipfian_hypergraph(const ZipfianSpec& spec);

}  // namespace hybhuff
