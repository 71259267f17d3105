#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hybhuff/bitstream.hpp"
#include "hybhuff/frequency.hpp"

namespace hybhuff {

// Codes are held in a single 64-bit word; longer codes are rejected.
inline constexpr unsigned kMaxCodeLength = 64;
inline constexpr std::uint32_t kNoNode = std::numeric_limits<std::uint32_t>::max();

struct Codeword {
  std::uint64_t bits = 0;  // right-aligned, first bit is the most significant
  std::uint8_t length = 0;
  bool operator==(const Codeword&) const = default;
};

// Flat binary tree; internal nodes always have two children.
struct HuffmanNode {
  bool leaf = false;
  EntityId symbol = 0;
  std::uint32_t left = kNoNode;
  std::uint32_t right = kNoNode;
  bool operator==(const HuffmanNode&) const = default;
};

using CodeTable = std::vector<std::pair<EntityId, Codeword>>;  // sorted by symbol

struct HuffmanBook {
  std::vector<HuffmanNode> nodes;
  std::uint32_t root = kNoNode;
  CodeTable codes;
  unsigned symbol_width = 0;  // bits per serialized leaf symbol
  unsigned max_code_len = kMaxCodeLength;

  bool empty() const noexcept { return root == kNoNode; }
  std::size_t leaf_count() const noexcept { return codes.size(); }
  const Codeword* find(EntityId symbol) const;
  unsigned longest_code() const;
};

// Greedy min-heap merge over (weight, symbol) leaves. Ties are broken by
// the smallest symbol contained in each subtree; the first node extracted
// becomes the left child. A single leaf gets the one-bit code "0".
HuffmanBook build_huffman_from_weights(std::span<const std::pair<EntityId, std::uint64_t>> leaves);

// Book over the top floor(rho K) ranked symbols of `profile`.
HuffmanBook build_huffman(const FrequencyProfile& profile, double rho);
// Book over the top `domain_size` ranked symbols.
HuffmanBook build_huffman_domain(const FrequencyProfile& profile, std::size_t domain_size);

// Left edge 0, right edge 1. Verifies prefix-freeness and the length cap.
CodeTable assign_codes(std::span<const HuffmanNode> nodes, std::uint32_t root);

// Pre-order, one marker bit per node (1 leaf, 0 internal), each leaf
// followed by its symbol in `book.symbol_width` bits.
BitStream serialize_tree(const HuffmanBook& book);
void serialize_tree(const HuffmanBook& book, BitWriter& out);
std::uint64_t serialized_tree_bits(std::size_t leaves, unsigned symbol_width);

// Inverse of serialize_tree; an empty stream yields an empty book.
HuffmanBook deserialize_tree(const BitStream& bits, unsigned symbol_width);
HuffmanBook deserialize_tree(BitReader& in, unsigned symbol_width, std::size_t expected_leaves);

// Walks from the root one bit per step until a leaf.
EntityId decode_symbol(BitReader& in, const HuffmanBook& book);

}  // namespace hybhuff
