#include "hybhuff/archive.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>

#include "hybhuff/error.hpp"

namespace hybhuff {

namespace {

constexpr char kMagic[4] = {'H', 'Y', 'B', 'H'};
constexpr const char* kHeaderSegment = "header";
constexpr const char* kTreeSegment = "tree";
constexpr const char* kDegreeSegment = "degree metadata";
constexpr const char* kCountSegment = "count metadata";
constexpr const char* kHuffmanSegment = "huffman stream";
constexpr const char* kBitwiseSegment = "bitwise stream";

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::uint64_t bytes_for(std::uint64_t bits) { return (bits + 7) / 8; }

void check_segment(const BitStream& s, std::uint64_t declared_bits, const char* name) {
  if (s.bit_length != declared_bits) {
    throw DecodeError(name, "header declares " + std::to_string(declared_bits) + " bits, segment holds " +
                                std::to_string(s.bit_length));
  }
  if (s.bytes.size() != bytes_for(s.bit_length)) {
    throw DecodeError(name, "segment is " + std::to_string(s.bytes.size()) + " bytes, expected " +
                                std::to_string(bytes_for(s.bit_length)));
  }
}

// Consistency of header fields among themselves and with the segments.
void check_archive(const HybridArchive& a) {
  const ArchiveHeader& h = a.header;
  if (h.version != kArchiveVersion) {
    throw DecodeError(kHeaderSegment, "unsupported version " + std::to_string(h.version));
  }
  if (h.num_vertices > (std::uint64_t{1} << 32) || h.num_hyperedges > (std::uint64_t{1} << 32)) {
    throw DecodeError(kHeaderSegment, "entity counts exceed 32-bit IDs");
  }
  if (h.huffman_domain_size > h.distinct_symbols || h.distinct_symbols > h.num_incidences ||
      h.distinct_symbols > h.symbol_bound()) {
    throw DecodeError(kHeaderSegment, "inconsistent symbol counts");
  }
  if (h.bitwise_width > 32 || h.leaf_symbol_width > 32 || h.metadata_width == 0 || h.metadata_width > 64) {
    throw DecodeError(kHeaderSegment, "field width out of range");
  }
  const std::uint64_t entities = h.compressed_entities();
  if (h.degree_bits != entities * h.metadata_width) {
    throw DecodeError(kDegreeSegment, "length does not match entity count times metadata width");
  }
  if (h.count_bits != entities * h.metadata_width) {
    throw DecodeError(kCountSegment, "length does not match entity count times metadata width");
  }
  if (h.tree_bits != serialized_tree_bits(h.huffman_domain_size, static_cast<unsigned>(h.leaf_symbol_width))) {
    throw DecodeError(kTreeSegment, "length does not match the declared domain size");
  }
  if (h.bitwise_bits % std::max<std::uint64_t>(h.bitwise_width, 1) != 0 ||
      (h.bitwise_width == 0 && h.bitwise_bits != 0)) {
    throw DecodeError(kBitwiseSegment, "length is not a whole number of fields");
  }
  check_segment(a.tree, h.tree_bits, kTreeSegment);
  check_segment(a.degrees, h.degree_bits, kDegreeSegment);
  check_segment(a.huffman_counts, h.count_bits, kCountSegment);
  check_segment(a.huffman_stream, h.huffman_bits, kHuffmanSegment);
  check_segment(a.bitwise_stream, h.bitwise_bits, kBitwiseSegment);
}

HuffmanBook read_tree(const HybridArchive& a) {
  BitReader in(a.tree, kTreeSegment);
  HuffmanBook book = deserialize_tree(in, static_cast<unsigned>(a.header.leaf_symbol_width),
                                      a.header.huffman_domain_size);
  if (!in.exhausted()) throw DecodeError(kTreeSegment, "trailing bits after tree");
  for (const auto& [symbol, code] : book.codes) {
    if (symbol >= a.header.symbol_bound()) {
      throw DecodeError(kTreeSegment, "leaf symbol " + std::to_string(symbol) + " out of range");
    }
  }
  return book;
}

// Decodes one entity: k Huffman symbols then d - k fixed-width symbols.
void decode_entity(const HuffmanBook& book, BitReader& huffman, BitReader& bitwise, unsigned width,
                   std::uint64_t bound, std::uint64_t degree, std::uint64_t huffman_count, EntityId* out) {
  for (std::uint64_t j = 0; j < huffman_count; ++j) *out++ = decode_symbol(huffman, book);
  if (degree > huffman_count && width == 0) {
    throw DecodeError(kCountSegment, "bitwise symbols expected but the bitwise domain is empty");
  }
  for (std::uint64_t j = huffman_count; j < degree; ++j) {
    const std::uint64_t v = bitwise.read(width);
    if (v >= bound) throw DecodeError(kBitwiseSegment, "symbol " + std::to_string(v) + " out of range");
    *out++ = static_cast<EntityId>(v);
  }
}

void require_exhausted(const BitReader& r) {
  if (!r.exhausted()) {
    throw DecodeError(r.segment(), std::to_string(r.remaining()) + " unread bits after the last entity");
  }
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

}  // namespace

std::uint64_t HybridArchive::byte_size() const noexcept {
  return kArchiveHeaderBytes + tree.bytes.size() + degrees.bytes.size() + huffman_counts.bytes.size() +
         huffman_stream.bytes.size() + bitwise_stream.bytes.size();
}

std::vector<std::uint8_t> HybridArchive::to_bytes() const {
  std::vector<std::uint8_t> out(kArchiveHeaderBytes, 0);
  std::memcpy(out.data(), kMagic, 4);
  out[4] = header.version;
  out[5] = static_cast<std::uint8_t>(header.compressed_side);
  out[6] = header.canonical ? 1 : 0;
  out[7] = 0;
  const std::uint64_t fields[] = {header.num_vertices,     header.num_hyperedges,      header.num_incidences,
                                  header.distinct_symbols, header.huffman_domain_size, header.bitwise_width,
                                  header.leaf_symbol_width, header.metadata_width,     header.tree_bits,
                                  header.degree_bits,      header.count_bits,          header.huffman_bits,
                                  header.bitwise_bits};
  static_assert(8 + sizeof(fields) == kArchiveHeaderBytes);
  for (std::size_t i = 0; i < std::size(fields); ++i) put_u64(out.data() + 8 + 8 * i, fields[i]);
  out.reserve(byte_size());
  for (const BitStream* s : {&tree, &degrees, &huffman_counts, &huffman_stream, &bitwise_stream}) {
    out.insert(out.end(), s->bytes.begin(), s->bytes.end());
  }
  return out;
}

HybridArchive HybridArchive::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kArchiveHeaderBytes) throw DecodeError(kHeaderSegment, "archive shorter than its header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw DecodeError(kHeaderSegment, "missing HYBH magic");
  HybridArchive a;
  ArchiveHeader& h = a.header;
  h.version = bytes[4];
  if (bytes[5] > 1) throw DecodeError(kHeaderSegment, "unknown side tag " + std::to_string(bytes[5]));
  h.compressed_side = static_cast<Side>(bytes[5]);
  if (bytes[6] > 1 || bytes[7] != 0) throw DecodeError(kHeaderSegment, "unknown flag bits");
  h.canonical = bytes[6] == 1;
  std::uint64_t* fields[] = {&h.num_vertices,     &h.num_hyperedges,      &h.num_incidences,
                             &h.distinct_symbols, &h.huffman_domain_size, &h.bitwise_width,
                             &h.leaf_symbol_width, &h.metadata_width,     &h.tree_bits,
                             &h.degree_bits,      &h.count_bits,          &h.huffman_bits,
                             &h.bitwise_bits};
  for (std::size_t i = 0; i < std::size(fields); ++i) *fields[i] = get_u64(bytes.data() + 8 + 8 * i);

  std::size_t pos = kArchiveHeaderBytes;
  auto take = [&](BitStream& s, std::uint64_t bits, const char* name) {
    if (bits > (std::uint64_t{1} << 60)) throw DecodeError(name, "declared length is implausible");
    const std::uint64_t n = bytes_for(bits);
    if (bytes.size() - pos < n) {
      throw DecodeError(name, "truncated: needs " + std::to_string(n) + " bytes, " +
                                  std::to_string(bytes.size() - pos) + " remain");
    }
    s.bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
    s.bit_length = bits;
    pos += n;
  };
  take(a.tree, h.tree_bits, kTreeSegment);
  take(a.degrees, h.degree_bits, kDegreeSegment);
  take(a.huffman_counts, h.count_bits, kCountSegment);
  take(a.huffman_stream, h.huffman_bits, kHuffmanSegment);
  take(a.bitwise_stream, h.bitwise_bits, kBitwiseSegment);
  if (pos != bytes.size()) {
    throw DecodeError(kBitwiseSegment, std::to_string(bytes.size() - pos) + " trailing bytes after the last segment");
  }
  check_archive(a);
  return a;
}

SideSelection select_side(const Hypergraph& h) {
  SideSelection s;
  s.side = h.num_vertices > h.num_hyperedges ? Side::Hyperedges : Side::Vertices;
  const IncidenceLists& lists = h.side(s.side);
  s.symbols = lists.adjacency;
  s.degrees.resize(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) s.degrees[i] = lists.degree(i);
  return s;
}

HybridEncoder::HybridEncoder(const Hypergraph& h, EncodeOptions options)
    : graph_(h), options_(options), side_(select_side(h).side), lists_(&h.side(side_)) {
  const auto start = Clock::now();
  if (options_.canonical) {
    sorted_ = *lists_;
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
      std::sort(sorted_.adjacency.begin() + static_cast<std::ptrdiff_t>(sorted_.offsets[i]),
                sorted_.adjacency.begin() + static_cast<std::ptrdiff_t>(sorted_.offsets[i + 1]));
    }
    lists_ = &sorted_;
  }
  profile_ = build_frequency_profile(lists_->adjacency);
  std::uint64_t max_degree = 0;
  for (std::size_t i = 0; i < lists_->size(); ++i) max_degree = std::max(max_degree, lists_->degree(i));
  metadata_width_ = bitwidth_for(max_degree);
  profile_ms_ = elapsed_ms(start);
}

HybridArchive HybridEncoder::encode(double rho, EncodeTimings* timings) const {
  return encode_domain(huffman_domain_size(rho, profile_.distinct()), timings);
}

HybridArchive HybridEncoder::encode_domain(std::size_t m, EncodeTimings* timings) const {
  auto start = Clock::now();
  const HuffmanBook book = build_huffman_domain(profile_, m);
  // Dense symbol -> codeword table; length 0 marks the bitwise domain.
  std::vector<Codeword> table(profile_.distinct() == 0 ? 0 : std::size_t{profile_.max_symbol()} + 1);
  for (const auto& [symbol, code] : book.codes) table[symbol] = code;
  const unsigned width = tail_bitwidth(profile_, m);
  const double tree_ms = elapsed_ms(start);

  start = Clock::now();
  HybridArchive a;
  ArchiveHeader& h = a.header;
  h.compressed_side = side_;
  h.canonical = options_.canonical;
  h.num_vertices = graph_.num_vertices;
  h.num_hyperedges = graph_.num_hyperedges;
  h.num_incidences = profile_.total;
  h.distinct_symbols = profile_.distinct();
  h.huffman_domain_size = m;
  h.bitwise_width = width;
  h.leaf_symbol_width = book.symbol_width;
  h.metadata_width = metadata_width_;

  a.tree = serialize_tree(book);
  BitWriter degrees;
  BitWriter counts;
  BitWriter huffman;
  BitWriter bitwise;
  for (std::size_t i = 0; i < lists_->size(); ++i) {
    std::uint64_t k = 0;
    for (EntityId s : lists_->neighbors(i)) {
      const Codeword& code = table[s];
      if (code.length != 0) {
        huffman.write(code.bits, code.length);
        ++k;
      } else {
        bitwise.write(s, width);
      }
    }
    degrees.write(lists_->degree(i), metadata_width_);
    counts.write(k, metadata_width_);
  }
  a.degrees = std::move(degrees).finish();
  a.huffman_counts = std::move(counts).finish();
  a.huffman_stream = std::move(huffman).finish();
  a.bitwise_stream = std::move(bitwise).finish();
  h.tree_bits = a.tree.bit_length;
  h.degree_bits = a.degrees.bit_length;
  h.count_bits = a.huffman_counts.bit_length;
  h.huffman_bits = a.huffman_stream.bit_length;
  h.bitwise_bits = a.bitwise_stream.bit_length;
  if (timings) {
    timings->profile_ms = profile_ms_;
    timings->tree_ms = tree_ms;
    timings->encode_ms = elapsed_ms(start);
  }
  return a;
}

ArchiveLayout HybridEncoder::layout(std::size_t m) const {
  const HuffmanBook book = build_huffman_domain(profile_, m);
  ArchiveLayout out;
  out.huffman_domain_size = m;
  out.tree_bits = serialized_tree_bits(book.leaf_count(), book.symbol_width);
  for (std::size_t i = 0; i < m; ++i) {
    out.huffman_bits += profile_.ranked_counts[i] * book.find(profile_.ranked_symbols[i])->length;
  }
  out.bitwise_bits = std::uint64_t{tail_bitwidth(profile_, m)} * (profile_.total - profile_.prefix_count[m]);
  const std::uint64_t meta = std::uint64_t{lists_->size()} * metadata_width_;
  out.metadata_bits = 2 * meta;
  out.total_bytes = kArchiveHeaderBytes + bytes_for(out.tree_bits) + 2 * bytes_for(meta) +
                    bytes_for(out.huffman_bits) + bytes_for(out.bitwise_bits);
  return out;
}

HybridArchive encode(const Hypergraph& h, double rho, const EncodeOptions& options) {
  return HybridEncoder(h, options).encode(rho);
}

HybridArchive encode_domain(const Hypergraph& h, std::size_t m, const EncodeOptions& options) {
  return HybridEncoder(h, options).encode_domain(m);
}

Hypergraph decode(const HybridArchive& archive) {
  check_archive(archive);
  const ArchiveHeader& h = archive.header;
  const HuffmanBook book = read_tree(archive);
  const std::uint64_t entities = h.compressed_entities();
  const auto meta_width = static_cast<unsigned>(h.metadata_width);
  const auto width = static_cast<unsigned>(h.bitwise_width);

  // Degrees first so every list is pre-sized.
  IncidenceLists lists;
  lists.offsets.resize(entities + 1);
  lists.offsets[0] = 0;
  BitReader degrees(archive.degrees, kDegreeSegment);
  for (std::uint64_t i = 0; i < entities; ++i) {
    const std::uint64_t d = degrees.read(meta_width);
    lists.offsets[i + 1] = lists.offsets[i] + d;
    if (lists.offsets[i + 1] > h.num_incidences) {
      throw DecodeError(kDegreeSegment, "degrees exceed the declared incidence count");
    }
  }
  if (lists.offsets.back() != h.num_incidences) {
    throw DecodeError(kDegreeSegment, "degrees sum to " + std::to_string(lists.offsets.back()) + ", header declares " +
                                          std::to_string(h.num_incidences));
  }
  lists.adjacency.resize(h.num_incidences);

  BitReader counts(archive.huffman_counts, kCountSegment);
  BitReader huffman(archive.huffman_stream, kHuffmanSegment);
  BitReader bitwise(archive.bitwise_stream, kBitwiseSegment);
  for (std::uint64_t i = 0; i < entities; ++i) {
    const std::uint64_t d = lists.offsets[i + 1] - lists.offsets[i];
    const std::uint64_t k = counts.read(meta_width);
    if (k > d) {
      throw DecodeError(kCountSegment, "entity " + std::to_string(i) + " has Huffman count " + std::to_string(k) +
                                           " above its degree " + std::to_string(d));
    }
    decode_entity(book, huffman, bitwise, width, h.symbol_bound(), d, k, lists.adjacency.data() + lists.offsets[i]);
  }
  for (const BitReader* r : {&degrees, &counts, &huffman, &bitwise}) require_exhausted(*r);

  if (h.canonical) {
    for (std::uint64_t i = 0; i < entities; ++i) {
      std::sort(lists.adjacency.begin() + static_cast<std::ptrdiff_t>(lists.offsets[i]),
                lists.adjacency.begin() + static_cast<std::ptrdiff_t>(lists.offsets[i + 1]));
    }
  }
  return rebuild_dual(h.compressed_side, std::move(lists), h.num_vertices, h.num_hyperedges);
}

AdjacencyStream::AdjacencyStream(const HybridArchive& archive) : archive_(&archive) {
  check_archive(archive);
  book_ = read_tree(archive);
  degrees_ = BitReader(archive.degrees, kDegreeSegment);
  counts_ = BitReader(archive.huffman_counts, kCountSegment);
  huffman_ = BitReader(archive.huffman_stream, kHuffmanSegment);
  bitwise_ = BitReader(archive.bitwise_stream, kBitwiseSegment);
}

bool AdjacencyStream::next() {
  const ArchiveHeader& h = archive_->header;
  if (next_entity_ >= h.compressed_entities()) {
    if (next_entity_ == h.compressed_entities()) {
      ++next_entity_;
      for (const BitReader* r : {&degrees_, &counts_, &huffman_, &bitwise_}) require_exhausted(*r);
      if (seen_ != h.num_incidences) {
        throw DecodeError(kDegreeSegment, "degrees sum to " + std::to_string(seen_) + ", header declares " +
                                              std::to_string(h.num_incidences));
      }
      buffer_.clear();
    }
    return false;
  }
  const auto meta_width = static_cast<unsigned>(h.metadata_width);
  const std::uint64_t d = degrees_.read(meta_width);
  const std::uint64_t k = counts_.read(meta_width);
  if (k > d) throw DecodeError(kCountSegment, "Huffman count above degree at entity " + std::to_string(next_entity_));
  if (seen_ + d > h.num_incidences) throw DecodeError(kDegreeSegment, "degrees exceed the declared incidence count");
  seen_ += d;
  buffer_.resize(d);
  decode_entity(book_, huffman_, bitwise_, static_cast<unsigned>(h.bitwise_width), h.symbol_bound(), d, k,
                buffer_.data());
  if (h.canonical) std::sort(buffer_.begin(), buffer_.end());
  entity_ = next_entity_++;
  huffman_count_ = k;
  return true;
}

std::uint64_t compressed_size(const HybridArchive& archive) { return archive.byte_size(); }

double compression_rate(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  if (original_bytes == 0) throw Error(ErrorKind::Domain, "original size must be positive");
  return (1.0 - static_cast<double>(compressed_bytes) / static_cast<double>(original_bytes)) * 100.0;
}

}  // namespace hybhuff
