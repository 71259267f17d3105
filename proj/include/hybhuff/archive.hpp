#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "hybhuff/bitstream.hpp"
#include "hybhuff/frequency.hpp"
#include "hybhuff/huffman.hpp"
#include "hybhuff/hypergraph.hpp"

namespace hybhuff {

inline constexpr std::uint8_t kArchiveVersion = 1;
inline constexpr std::size_t kArchiveHeaderBytes = 112;

// Fixed-size header. Integers are little-endian u64 after an 8-byte prefix
// of magic "HYBH", version, side, flags, reserved.
struct ArchiveHeader {
  std::uint8_t version = kArchiveVersion;
  Side compressed_side = Side::Vertices;
  bool canonical = false;  // lists were sorted before encoding
  std::uint64_t num_vertices = 0;
  std::uint64_t num_hyperedges = 0;
  std::uint64_t num_incidences = 0;      // N
  std::uint64_t distinct_symbols = 0;    // K
  std::uint64_t huffman_domain_size = 0; // m
  std::uint64_t bitwise_width = 0;       // 0 when the bitwise domain is empty
  std::uint64_t leaf_symbol_width = 0;
  std::uint64_t metadata_width = 0;      // width of each degree / count field
  std::uint64_t tree_bits = 0;
  std::uint64_t degree_bits = 0;
  std::uint64_t count_bits = 0;
  std::uint64_t huffman_bits = 0;
  std::uint64_t bitwise_bits = 0;

  std::uint64_t compressed_entities() const noexcept {
    return compressed_side == Side::Vertices ? num_vertices : num_hyperedges;
  }
  std::uint64_t symbol_bound() const noexcept {
    return compressed_side == Side::Vertices ? num_hyperedges : num_vertices;
  }
  bool operator==(const ArchiveHeader&) const = default;
};

// Header plus five byte-aligned segments, stored in this order.
struct HybridArchive {
  ArchiveHeader header;
  BitStream tree;
  BitStream degrees;
  BitStream huffman_counts;
  BitStream huffman_stream;  // B_hi
  BitStream bitwise_stream;  // B_lo

  // Bits of encoded symbols (both streams), excluding tree and metadata.
  std::uint64_t payload_bits() const noexcept { return huffman_stream.bit_length + bitwise_stream.bit_length; }
  std::uint64_t byte_size() const noexcept;

  std::vector<std::uint8_t> to_bytes() const;
  // Validates the header against the segment sizes; DecodeError naming the
  // offending segment otherwise.
  static HybridArchive from_bytes(std::span<const std::uint8_t> bytes);

  bool operator==(const HybridArchive&) const = default;
};

// Cardinality rule: compress hyperedge lists when n_v > n_h, vertex lists
// otherwise (ties included).
struct SideSelection {
  Side side = Side::Vertices;
  std::span<const EntityId> symbols;
  std::vector<std::uint64_t> degrees;
};

SideSelection select_side(const Hypergraph& h);

struct EncodeOptions {
  // Sort each list before encoding.
  bool canonical = false;
};

struct EncodeTimings {
  double profile_ms = 0.0;
  double tree_ms = 0.0;
  double encode_ms = 0.0;
};

// Exact segment sizes an encode at domain size m would produce.
struct ArchiveLayout {
  std::size_t huffman_domain_size = 0;
  std::uint64_t tree_bits = 0;
  std::uint64_t metadata_bits = 0;  // degree + count segments
  std::uint64_t huffman_bits = 0;
  std::uint64_t bitwise_bits = 0;
  std::uint64_t total_bytes = 0;  // header and byte-aligned segments

  std::uint64_t payload_bits() const noexcept { return huffman_bits + bitwise_bits; }
};

// Reusable encoder: selects the side and profiles its symbols once, then
// encodes or sizes any Huffman domain.
class HybridEncoder {
 public:
  explicit HybridEncoder(const Hypergraph& h, EncodeOptions options = {});

  const FrequencyProfile& profile() const noexcept { return profile_; }
  Side side() const noexcept { return side_; }
  double profile_ms() const noexcept { return profile_ms_; }

  HybridArchive encode_domain(std::size_t m, EncodeTimings* timings = nullptr) const;
  HybridArchive encode(double rho, EncodeTimings* timings = nullptr) const;
  // Computes sizes from code lengths and counts without emitting bits.
  ArchiveLayout layout(std::size_t m) const;

 private:
  const Hypergraph& graph_;
  EncodeOptions options_;
  Side side_;
  IncidenceLists sorted_;  // populated in canonical mode
  const IncidenceLists* lists_;
  FrequencyProfile profile_;
  unsigned metadata_width_ = 1;
  double profile_ms_ = 0.0;
};

HybridArchive encode(const Hypergraph& h, double rho, const EncodeOptions& options = {});
HybridArchive encode_domain(const Hypergraph& h, std::size_t m, const EncodeOptions& options = {});

// Rebuilds the hypergraph. Every stream must be consumed exactly.
Hypergraph decode(const HybridArchive& archive);

// Lazy per-entity view of the compressed side: entities in ID order, each
// yielding its Huffman-coded neighbours followed by its bitwise ones.
class AdjacencyStream {
 public:
  explicit AdjacencyStream(const HybridArchive& archive);

  // Advances to the next entity; false once all entities were produced
  // (after verifying that every stream was consumed exactly).
  bool next();
  std::uint64_t entity() const noexcept { return entity_; }
  std::span<const EntityId> neighbors() const noexcept { return buffer_; }
  std::uint64_t huffman_count() const noexcept { return huffman_count_; }
  Side side() const noexcept { return archive_->header.compressed_side; }

  struct Entry {
    std::uint64_t entity;
    std::span<const EntityId> neighbors;
  };

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Entry;
    using difference_type = std::ptrdiff_t;
    using pointer = const Entry*;
    using reference = Entry;

    iterator() = default;
    explicit iterator(AdjacencyStream* stream) : stream_(stream) { advance(); }

    Entry operator*() const { return {stream_->entity(), stream_->neighbors()}; }
    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    friend bool operator==(const iterator& a, const iterator& b) { return a.stream_ == b.stream_; }

   private:
    void advance() {
      if (stream_ && !stream_->next()) stream_ = nullptr;
    }
    AdjacencyStream* stream_ = nullptr;
  };

  // Single pass; a fresh AdjacencyStream restarts from entity 0.
  iterator begin() { return iterator(this); }
  iterator end() { return iterator(); }

 private:
  const HybridArchive* archive_;
  HuffmanBook book_;
  BitReader degrees_;
  BitReader counts_;
  BitReader huffman_;
  BitReader bitwise_;
  std::uint64_t next_entity_ = 0;
  std::uint64_t entity_ = 0;
  std::uint64_t huffman_count_ = 0;
  std::uint64_t seen_ = 0;
  std::vector<EntityId> buffer_;
};

// Serialized archive size in bytes.
std::uint64_t compressed_size(const HybridArchive& archive);

// (1 - compressed / original) * 100. original must be positive.
double compression_rate(std::uint64_t original_bytes, std::uint64_t compressed_bytes);

}  // namespace hybhuff
