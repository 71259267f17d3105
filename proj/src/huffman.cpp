#include "hybhuff/huffman.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "hybhuff/error.hpp"

namespace hybhuff {

const Codeword* HuffmanBook::find(EntityId symbol) const {
  const auto it = std::lower_bound(codes.begin(), codes.end(), symbol,
                                   [](const auto& entry, EntityId s) { return entry.first < s; });
  return it != codes.end() && it->first == symbol ? &it->second : nullptr;
}

unsigned HuffmanBook::longest_code() const {
  unsigned longest = 0;
  for (const auto& [symbol, code] : codes) longest = std::max<unsigned>(longest, code.length);
  return longest;
}

HuffmanBook build_huffman_from_weights(std::span<const std::pair<EntityId, std::uint64_t>> leaves) {
  HuffmanBook book;
  if (leaves.empty()) return book;

  // (weight, smallest contained symbol, node index)
  using Entry = std::tuple<std::uint64_t, EntityId, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  book.nodes.reserve(2 * leaves.size() - 1);
  EntityId max_symbol = 0;
  for (const auto& [symbol, weight] : leaves) {
    heap.emplace(weight, symbol, static_cast<std::uint32_t>(book.nodes.size()));
    book.nodes.push_back({true, symbol, kNoNode, kNoNode});
    max_symbol = std::max(max_symbol, symbol);
  }
  while (heap.size() > 1) {
    const auto [wu, su, u] = heap.top();
    heap.pop();
    const auto [wv, sv, v] = heap.top();
    heap.pop();
    const auto w = static_cast<std::uint32_t>(book.nodes.size());
    book.nodes.push_back({false, 0, u, v});
    heap.emplace(wu + wv, std::min(su, sv), w);
  }
  book.root = std::get<2>(heap.top());
  book.symbol_width = bitwidth_for(max_symbol);
  book.codes = assign_codes(book.nodes, book.root);
  return book;
}

HuffmanBook build_huffman_domain(const FrequencyProfile& profile, std::size_t domain_size) {
  if (domain_size > profile.distinct()) {
    throw Error(ErrorKind::Domain, "Huffman domain larger than the symbol alphabet");
  }
  std::vector<std::pair<EntityId, std::uint64_t>> leaves;
  leaves.reserve(domain_size);
  for (std::size_t i = 0; i < domain_size; ++i) leaves.emplace_back(profile.ranked_symbols[i], profile.ranked_counts[i]);
  return build_huffman_from_weights(leaves);
}

HuffmanBook build_huffman(const FrequencyProfile& profile, double rho) {
  return build_huffman_domain(profile, huffman_domain_size(rho, profile.distinct()));
}

CodeTable assign_codes(std::span<const HuffmanNode> nodes, std::uint32_t root) {
  CodeTable codes;
  if (root == kNoNode) return codes;
  if (nodes[root].leaf) {
    codes.emplace_back(nodes[root].symbol, Codeword{0, 1});
    return codes;
  }
  struct Pending {
    std::uint32_t node;
    std::uint64_t bits;
    unsigned depth;
  };
  std::vector<Pending> stack{{root, 0, 0}};
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const HuffmanNode& n = nodes[p.node];
    if (n.leaf) {
      codes.emplace_back(n.symbol, Codeword{p.bits, static_cast<std::uint8_t>(p.depth)});
      continue;
    }
    if (p.depth + 1 > kMaxCodeLength) {
      throw Error(ErrorKind::Internal, "Huffman code exceeds " + std::to_string(kMaxCodeLength) + " bits");
    }
    stack.push_back({n.right, (p.bits << 1) | 1u, p.depth + 1});
    stack.push_back({n.left, p.bits << 1, p.depth + 1});
  }

  // Prefix check: after sorting left-aligned codes, any prefix relation
  // shows up between neighbours.
  std::vector<std::pair<std::uint64_t, unsigned>> aligned;
  aligned.reserve(codes.size());
  for (const auto& [symbol, code] : codes) {
    aligned.emplace_back(code.length == 64 ? code.bits : code.bits << (64 - code.length), code.length);
  }
  std::sort(aligned.begin(), aligned.end());
  for (std::size_t i = 1; i < aligned.size(); ++i) {
    const auto [prev, prev_len] = aligned[i - 1];
    const std::uint64_t mask = prev_len == 64 ? ~std::uint64_t{0} : ~(~std::uint64_t{0} >> prev_len);
    if ((aligned[i].first & mask) == prev) throw Error(ErrorKind::Internal, "Huffman code set is not prefix-free");
  }

  std::sort(codes.begin(), codes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < codes.size(); ++i) {
    if (codes[i].first == codes[i - 1].first) {
      throw Error(ErrorKind::Internal, "symbol " + std::to_string(codes[i].first) + " has two leaves");
    }
  }
  return codes;
}

std::uint64_t serialized_tree_bits(std::size_t leaves, unsigned symbol_width) {
  if (leaves == 0) return 0;
  return 2 * std::uint64_t{leaves} - 1 + std::uint64_t{leaves} * symbol_width;
}

void serialize_tree(const HuffmanBook& book, BitWriter& out) {
  if (book.empty()) return;
  std::vector<std::uint32_t> stack{book.root};
  while (!stack.empty()) {
    const HuffmanNode& n = book.nodes[stack.back()];
    stack.pop_back();
    if (n.leaf) {
      out.write_bit(true);
      out.write(n.symbol, book.symbol_width);
    } else {
      out.write_bit(false);
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
}

BitStream serialize_tree(const HuffmanBook& book) {
  BitWriter out;
  serialize_tree(book, out);
  return std::move(out).finish();
}

HuffmanBook deserialize_tree(BitReader& in, unsigned symbol_width, std::size_t expected_leaves) {
  HuffmanBook book;
  book.symbol_width = symbol_width;
  if (expected_leaves == 0) return book;
  if (symbol_width > 32) throw DecodeError(in.segment(), "leaf symbol width exceeds 32 bits");

  // Each entry is a child slot still waiting for a node: (parent, is_right).
  std::vector<std::pair<std::uint32_t, bool>> slots{{kNoNode, false}};
  std::size_t leaves = 0;
  while (!slots.empty()) {
    const auto [parent, is_right] = slots.back();
    slots.pop_back();
    const auto index = static_cast<std::uint32_t>(book.nodes.size());
    HuffmanNode node;
    node.leaf = in.read_bit();
    if (node.leaf) {
      node.symbol = static_cast<EntityId>(in.read(symbol_width));
      if (++leaves > expected_leaves) throw DecodeError(in.segment(), "more leaves than the declared domain size");
    } else {
      // An internal node needs at least two more leaves to follow.
      if (book.nodes.size() + slots.size() + 2 > 2 * expected_leaves) {
        throw DecodeError(in.segment(), "tree shape inconsistent with the declared domain size");
      }
      slots.emplace_back(index, true);
      slots.emplace_back(index, false);
    }
    book.nodes.push_back(node);
    if (parent == kNoNode) {
      book.root = index;
    } else if (is_right) {
      book.nodes[parent].right = index;
    } else {
      book.nodes[parent].left = index;
    }
  }
  if (leaves != expected_leaves) {
    throw DecodeError(in.segment(), "tree holds " + std::to_string(leaves) + " leaves, header declares " +
                                        std::to_string(expected_leaves));
  }
  try {
    book.codes = assign_codes(book.nodes, book.root);
  } catch (const Error& e) {
    throw DecodeError(in.segment(), e.what());
  }
  return book;
}

HuffmanBook deserialize_tree(const BitStream& bits, unsigned symbol_width) {
  if (bits.bit_length == 0) {
    HuffmanBook book;
    book.symbol_width = symbol_width;
    return book;
  }
  // Leaf count is implied by the stream: L leaves take (2L - 1) + L w bits.
  const std::uint64_t per_leaf = 2 + std::uint64_t{symbol_width};
  const std::uint64_t leaves = (bits.bit_length + 1) / per_leaf;
  if (serialized_tree_bits(leaves, symbol_width) != bits.bit_length) {
    throw DecodeError("tree", "bit length " + std::to_string(bits.bit_length) + " is not a whole tree");
  }
  BitReader in(bits, "tree");
  HuffmanBook book = deserialize_tree(in, symbol_width, leaves);
  if (!in.exhausted()) throw DecodeError("tree", "trailing bits after tree");
  return book;
}

EntityId decode_symbol(BitReader& in, const HuffmanBook& book) {
  if (book.empty()) throw DecodeError(in.segment(), "Huffman symbol requested but the tree is empty");
  const HuffmanNode* node = &book.nodes[book.root];
  if (node->leaf) {
    if (in.read_bit()) throw DecodeError(in.segment(), "invalid codeword for single-symbol tree");
    return node->symbol;
  }
  while (!node->leaf) node = &book.nodes[in.read_bit() ? node->right : node->left];
  return node->symbol;
}

}  // namespace hybhuff
