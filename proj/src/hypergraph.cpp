#include "hybhuff/hypergraph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <utility>

#include "hybhuff/error.hpp"

namespace hybhuff {

const char* to_string(Side side) { return side == Side::Vertices ? "vertices" : "hyperedges"; }

namespace {

constexpr std::string_view kTextHeader = "AdjacencyHypergraph";
constexpr std::string_view kBinaryMagic = "HGB1";

// Whitespace-separated unsigned integers with line tracking for diagnostics.
class TokenReader {
 public:
  explicit TokenReader(std::string_view text) : text_(text) {}

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::uint64_t integer(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) {
      throw Error(ErrorKind::Format, context() + "unexpected end of input while reading " + what);
    }
    std::uint64_t value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || (ptr != last && !is_space(*ptr))) {
      throw Error(ErrorKind::Format, context() + "expected a non-negative integer for " + what);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::string context() const { return "line " + std::to_string(line_) + ": "; }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void check_offsets(const std::vector<std::uint64_t>& offsets, const char* side) {
  if (offsets.empty()) throw Error(ErrorKind::Structure, std::string(side) + " offsets missing sentinel");
  if (offsets.front() != 0) {
    throw Error(ErrorKind::Structure, std::string(side) + " offsets must start at 0");
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] < offsets[i - 1]) {
      throw Error(ErrorKind::Structure, std::string(side) + " offsets decrease at entity " + std::to_string(i - 1) +
                                            " (" + std::to_string(offsets[i - 1]) + " > " +
                                            std::to_string(offsets[i]) + ")");
    }
  }
}

void check_ids(const std::vector<EntityId>& adjacency, std::uint64_t bound, const char* side, const char* target) {
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    if (adjacency[i] >= bound) {
      throw Error(ErrorKind::Range, std::string(side) + " adjacency entry " + std::to_string(i) + " references " +
                                        target + " " + std::to_string(adjacency[i]) + " but only " +
                                        std::to_string(bound) + " exist");
    }
  }
}

void require_id_width(std::uint64_t count, const char* what) {
  if (count > std::uint64_t{1} << 32) {
    throw Error(ErrorKind::Range, std::string(what) + " count " + std::to_string(count) + " exceeds 32-bit IDs");
  }
}

// Fills offsets (with sentinel) after validating monotonicity and bounds.
void finish_offsets(std::vector<std::uint64_t>& offsets, std::uint64_t adjacency_size, const char* side) {
  offsets.push_back(adjacency_size);
  check_offsets(offsets, side);
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t u64(const char* what) { return little_endian(8, what); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(little_endian(4, what)); }
  bool at_end() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::uint64_t little_endian(unsigned n, const char* what) {
    if (remaining() < n) {
      throw Error(ErrorKind::Format, "binary hypergraph truncated while reading " + std::string(what));
    }
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void validate_structure(const Hypergraph& h) {
  if (h.vertices.offsets.size() != h.num_vertices + 1) {
    throw Error(ErrorKind::Structure, "vertex offsets length does not match vertex count");
  }
  if (h.hyperedges.offsets.size() != h.num_hyperedges + 1) {
    throw Error(ErrorKind::Structure, "hyperedge offsets length does not match hyperedge count");
  }
  check_offsets(h.vertices.offsets, "vertex");
  check_offsets(h.hyperedges.offsets, "hyperedge");
  if (h.vertices.offsets.back() != h.vertices.adjacency.size() ||
      h.hyperedges.offsets.back() != h.hyperedges.adjacency.size()) {
    throw Error(ErrorKind::Structure, "offset sentinel does not equal adjacency length");
  }
  if (h.vertices.adjacency.size() != h.hyperedges.adjacency.size()) {
    throw Error(ErrorKind::Structure, "vertex and hyperedge sides hold different incidence counts (" +
                                          std::to_string(h.vertices.adjacency.size()) + " vs " +
                                          std::to_string(h.hyperedges.adjacency.size()) + ")");
  }
  check_ids(h.vertices.adjacency, h.num_hyperedges, "vertex", "hyperedge");
  check_ids(h.hyperedges.adjacency, h.num_vertices, "hyperedge", "vertex");
}

void check_duality(const Hypergraph& h) {
  using Pair = std::pair<EntityId, EntityId>;  // (vertex, hyperedge)
  std::vector<Pair> from_vertices;
  std::vector<Pair> from_hyperedges;
  from_vertices.reserve(h.num_incidences());
  from_hyperedges.reserve(h.num_incidences());
  for (std::size_t v = 0; v < h.vertices.size(); ++v) {
    for (EntityId e : h.vertices.neighbors(v)) from_vertices.emplace_back(static_cast<EntityId>(v), e);
  }
  for (std::size_t e = 0; e < h.hyperedges.size(); ++e) {
    for (EntityId v : h.hyperedges.neighbors(e)) from_hyperedges.emplace_back(v, static_cast<EntityId>(e));
  }
  std::sort(from_vertices.begin(), from_vertices.end());
  std::sort(from_hyperedges.begin(), from_hyperedges.end());
  if (from_vertices.size() != from_hyperedges.size()) {
    throw Error(ErrorKind::Consistency, "sides hold different incidence counts");
  }
  auto [a, b] = std::mismatch(from_vertices.begin(), from_vertices.end(), from_hyperedges.begin());
  if (a != from_vertices.end()) {
    const Pair p = std::min(*a, *b);
    throw Error(ErrorKind::Consistency, "incidence (vertex " + std::to_string(p.first) + ", hyperedge " +
                                            std::to_string(p.second) + ") is not listed on both sides");
  }
}

Hypergraph parse_adjacency_hypergraph(std::string_view text, const ParseOptions& options) {
  TokenReader in(text);
  const std::string_view tag = in.word();
  if (tag != kTextHeader) {
    throw Error(ErrorKind::Format, "line 1: expected header 'AdjacencyHypergraph', found '" + std::string(tag) + "'");
  }
  Hypergraph h;
  h.num_vertices = in.integer("vertex count");
  const std::uint64_t mv = in.integer("vertex adjacency length");
  h.num_hyperedges = in.integer("hyperedge count");
  const std::uint64_t mh = in.integer("hyperedge adjacency length");
  require_id_width(h.num_vertices, "vertex");
  require_id_width(h.num_hyperedges, "hyperedge");
  if (mv != mh) {
    throw Error(ErrorKind::Structure, "vertex adjacency length " + std::to_string(mv) +
                                          " differs from hyperedge adjacency length " + std::to_string(mh));
  }

  auto read_side = [&](IncidenceLists& lists, std::uint64_t n, std::uint64_t m, std::uint64_t bound,
                       const char* side) {
    lists.offsets.clear();
    lists.offsets.reserve(n + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t off = in.integer("offset");
      if (off > m) {
        throw Error(ErrorKind::Structure, in.context() + side + " offset " + std::to_string(off) +
                                              " exceeds adjacency length " + std::to_string(m));
      }
      lists.offsets.push_back(off);
    }
    lists.adjacency.resize(m);
    for (auto& id : lists.adjacency) {
      const std::uint64_t v = in.integer("adjacency entry");
      if (v >= bound) {
        throw Error(ErrorKind::Range, in.context() + side + " adjacency entry " + std::to_string(v) +
                                          " out of range (limit " + std::to_string(bound) + ")");
      }
      id = static_cast<EntityId>(v);
    }
    finish_offsets(lists.offsets, m, side);
  };
  read_side(h.vertices, h.num_vertices, mv, h.num_hyperedges, "vertex");
  read_side(h.hyperedges, h.num_hyperedges, mh, h.num_vertices, "hyperedge");
  if (!in.at_end()) throw Error(ErrorKind::Format, in.context() + "trailing data after hyperedge adjacency");
  if (options.strict) check_duality(h);
  return h;
}

std::string serialize_adjacency_hypergraph(const Hypergraph& h) {
  std::string out;
  out.reserve(32 + 8 * (h.num_vertices + h.num_hyperedges + 2 * h.num_incidences()));
  out.append(kTextHeader);
  out.push_back('\n');
  char buf[24];
  auto put = [&](std::uint64_t v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
    out.push_back('\n');
  };
  put(h.num_vertices);
  put(h.vertices.adjacency.size());
  put(h.num_hyperedges);
  put(h.hyperedges.adjacency.size());
  for (const IncidenceLists* lists : {&h.vertices, &h.hyperedges}) {
    for (std::size_t i = 0; i + 1 < lists->offsets.size(); ++i) put(lists->offsets[i]);
    for (EntityId id : lists->adjacency) put(id);
  }
  return out;
}

Hypergraph parse_binary_hypergraph(std::span<const std::uint8_t> bytes, const ParseOptions& options) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBinaryMagic.data(), 4) != 0) {
    throw Error(ErrorKind::Format, "missing HGB1 magic");
  }
  ByteCursor in(bytes.subspan(4));
  Hypergraph h;
  h.num_vertices = in.u64("vertex count");
  const std::uint64_t mv = in.u64("vertex adjacency length");
  h.num_hyperedges = in.u64("hyperedge count");
  const std::uint64_t mh = in.u64("hyperedge adjacency length");
  require_id_width(h.num_vertices, "vertex");
  require_id_width(h.num_hyperedges, "hyperedge");
  if (mv != mh) throw Error(ErrorKind::Structure, "vertex and hyperedge adjacency lengths differ");
  const std::uint64_t need = 8 * (h.num_vertices + h.num_hyperedges) + 4 * (mv + mh);
  if (in.remaining() != need) {
    throw Error(ErrorKind::Format, "binary hypergraph payload is " + std::to_string(in.remaining()) +
                                       " bytes, expected " + std::to_string(need));
  }
  auto read_side = [&](IncidenceLists& lists, std::uint64_t n, std::uint64_t m, const char* side) {
    lists.offsets.resize(n);
    for (auto& o : lists.offsets) o = in.u64("offset");
    lists.adjacency.resize(m);
    for (auto& id : lists.adjacency) id = in.u32("adjacency entry");
    finish_offsets(lists.offsets, m, side);
  };
  read_side(h.vertices, h.num_vertices, mv, "vertex");
  read_side(h.hyperedges, h.num_hyperedges, mh, "hyperedge");
  validate_structure(h);
  if (options.strict) check_duality(h);
  return h;
}

std::vector<std::uint8_t> serialize_binary_hypergraph(const Hypergraph& h) {
  std::vector<std::uint8_t> out(kBinaryMagic.begin(), kBinaryMagic.end());
  out.reserve(4 + 32 + 8 * (h.num_vertices + h.num_hyperedges) + 8 * h.num_incidences());
  append_u64(out, h.num_vertices);
  append_u64(out, h.vertices.adjacency.size());
  append_u64(out, h.num_hyperedges);
  append_u64(out, h.hyperedges.adjacency.size());
  for (const IncidenceLists* lists : {&h.vertices, &h.hyperedges}) {
    for (std::size_t i = 0; i + 1 < lists->offsets.size(); ++i) append_u64(out, lists->offsets[i]);
    for (EntityId id : lists->adjacency) append_u32(out, id);
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path + "'");
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

void write_file(const std::string& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Hypergraph load_hypergraph(const std::string& path, const ParseOptions& options) {
  const auto bytes = read_file(path);
  try {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kBinaryMagic.data(), 4) == 0) {
      return parse_binary_hypergraph(bytes, options);
    }
    return parse_adjacency_hypergraph(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                                      options);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

IncidenceLists invert_incidence(const IncidenceLists& lists, std::uint64_t num_targets) {
  IncidenceLists out;
  out.offsets.assign(num_targets + 1, 0);
  for (std::size_t i = 0; i < lists.adjacency.size(); ++i) {
    const EntityId t = lists.adjacency[i];
    if (t >= num_targets) {
      throw Error(ErrorKind::Range, "adjacency entry " + std::to_string(i) + " references ID " + std::to_string(t) +
                                        " but only " + std::to_string(num_targets) + " exist");
    }
    ++out.offsets[t + 1];
  }
  std::partial_sum(out.offsets.begin(), out.offsets.end(), out.offsets.begin());
  out.adjacency.resize(lists.adjacency.size());
  std::vector<std::uint64_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (std::size_t src = 0; src < lists.size(); ++src) {
    for (EntityId t : lists.neighbors(src)) out.adjacency[cursor[t]++] = static_cast<EntityId>(src);
  }
  return out;
}

Hypergraph rebuild_dual(Side side, IncidenceLists lists, std::uint64_t num_vertices, std::uint64_t num_hyperedges) {
  const std::uint64_t sources = side == Side::Vertices ? num_vertices : num_hyperedges;
  const std::uint64_t targets = side == Side::Vertices ? num_hyperedges : num_vertices;
  if (lists.offsets.size() != sources + 1) {
    throw Error(ErrorKind::Structure, std::string(to_string(side)) + " side has " +
                                          std::to_string(lists.offsets.size() - 1) + " entities, expected " +
                                          std::to_string(sources));
  }
  check_offsets(lists.offsets, to_string(side));
  if (lists.offsets.back() != lists.adjacency.size()) {
    throw Error(ErrorKind::Structure, "offset sentinel does not equal adjacency length");
  }
  Hypergraph h;
  h.num_vertices = num_vertices;
  h.num_hyperedges = num_hyperedges;
  IncidenceLists dual = invert_incidence(lists, targets);
  if (side == Side::Vertices) {
    h.vertices = std::move(lists);
    h.hyperedges = std::move(dual);
  } else {
    h.hyperedges = std::move(lists);
    h.vertices = std::move(dual);
  }
  return h;
}

Hypergraph canonicalize(Hypergraph h) {
  for (IncidenceLists* lists : {&h.vertices, &h.hyperedges}) {
    for (std::size_t i = 0; i < lists->size(); ++i) {
      std::sort(lists->adjacency.begin() + static_cast<std::ptrdiff_t>(lists->offsets[i]),
                lists->adjacency.begin() + static_cast<std::ptrdiff_t>(lists->offsets[i + 1]));
    }
  }
  return h;
}

bool same_incidence(const Hypergraph& a, const Hypergraph& b) {
  if (a.num_vertices != b.num_vertices || a.num_hyperedges != b.num_hyperedges) return false;
  return canonicalize(a) == canonicalize(b);
}

Hypergraph generate_zipfian_hypergraph(const ZipfianSpec& spec) {
  const std::uint64_t nv = spec.num_vertices;
  const std::uint64_t nh = spec.num_hyperedges;
  const std::uint64_t total = spec.num_incidences;
  if (!(spec.skew > 0.0) || !std::isfinite(spec.skew)) {
    throw Error(ErrorKind::Generation, "skew exponent must be positive");
  }
  require_id_width(nv, "vertex");
  require_id_width(nh, "hyperedge");
  if (total < nh) {
    throw Error(ErrorKind::Generation, "need at least one incidence per hyperedge (" + std::to_string(total) + " < " +
                                           std::to_string(nh) + ")");
  }
  if (nv == 0 ? total > 0 : total / nv > nh || (total / nv == nh && total % nv != 0)) {
    throw Error(ErrorKind::Generation, std::to_string(total) + " incidences cannot fit in " + std::to_string(nh) +
                                           " hyperedges over " + std::to_string(nv) + " distinct vertices");
  }

  std::mt19937_64 rng(spec.seed);
  auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // Hyperedge sizes: one each, the remainder scattered uniformly.
  std::vector<std::uint64_t> sizes(nh, 1);
  for (std::uint64_t extra = total - nh; extra > 0; --extra) {
    std::uint64_t e = rng() % nh;
    while (sizes[e] == nv) e = (e + 1) % nh;
    ++sizes[e];
  }

  std::vector<double> cdf(nv);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < nv; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -spec.skew);
    cdf[i] = acc;
  }
  auto draw = [&]() -> EntityId {
    const double u = uniform01() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<EntityId>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(nv) - 1));
  };

  IncidenceLists lists;
  lists.offsets.reserve(nh + 1);
  lists.adjacency.reserve(total);
  std::vector<std::uint64_t> stamp(nv, 0);
  for (std::uint64_t e = 0; e < nh; ++e) {
    const std::uint64_t want = sizes[e];
    const std::uint64_t mark = e + 1;
    std::uint64_t have = 0;
    std::uint64_t budget = 32 * want + 1024;
    while (have < want && budget-- > 0) {
      const EntityId v = draw();
      if (stamp[v] == mark) continue;
      stamp[v] = mark;
      lists.adjacency.push_back(v);
      ++have;
    }
    // Rejection stalled (hyperedge nearly as large as the vertex set): take
    // the most probable unused vertices.
    for (EntityId v = 0; have < want; ++v) {
      if (stamp[v] == mark) continue;
      stamp[v] = mark;
      lists.adjacency.push_back(v);
      ++have;
    }
    lists.offsets.push_back(lists.adjacency.size());
  }
  return rebuild_dual(Side::Hyperedges, std::move(lists), nv, nh);
}

}  // namespace hybhuff
