#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hybhuff/archive.hpp"
#include "hybhuff/error.hpp"
#include "hybhuff/frequency.hpp"
#include "hybhuff/optimizer.hpp"
#include "hybhuff/workloads.hpp"

using namespace hybhuff;

namespace {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kIoError = 3,
  kInputError = 4,
  kDecodeError = 5,
  kArgumentError = 6,
  kGenerationError = 7,
  kInternalError = 8,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
      return kIoError;
    case ErrorKind::Format:
    case ErrorKind::Structure:
    case ErrorKind::Range:
    case ErrorKind::Consistency:
      return kInputError;
    case ErrorKind::Decode:
      return kDecodeError;
    case ErrorKind::Domain:
      return kArgumentError;
    case ErrorKind::Generation:
      return kGenerationError;
    default:
      return kInternalError;
  }
}

class Stopwatch {
 public:
  double ms() const { return std::chrono::duration<double, std::milli>(clock::now() - start_).count(); }
  void reset() { start_ = clock::now(); }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::string ms3(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void row(const std::string& key, const std::string& value) {
  std::printf("%-18s %s\n", key.c_str(), value.c_str());
}

double resolve_alpha(const std::optional<double>& flag) {
  if (flag) {
    if (!(*flag >= 0.0)) throw Error(ErrorKind::Domain, "--alpha must be non-negative");
    return *flag;
  }
  if (const char* env = std::getenv("HYBHUFF_ALPHA"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v >= 0.0))
      throw Error(ErrorKind::Domain, std::string("HYBHUFF_ALPHA is not a non-negative number: ") + env);
    return v;
  }
  return kDefaultAlpha;
}

bool is_archive(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "HYBH");
}

HybridArchive load_archive(const std::string& path) {
  return HybridArchive::from_bytes(read_file(path));
}

std::string side_name(Side s) { return to_string(s); }

std::vector<EntityId> sorted(std::span<const EntityId> s) {
  std::vector<EntityId> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

// ---------------------------------------------------------------- compress

struct CompressArgs {
  std::string input;
  std::string output;
  std::optional<double> rho;
  bool automatic = false;
  bool canonical = false;
  bool strict = false;
  std::optional<double> alpha;
};

int cmd_compress(const CompressArgs& args) {
  Stopwatch load_clock;
  const Hypergraph h = load_hypergraph(args.input, {.strict = args.strict});
  const double load_ms = load_clock.ms();
  const std::uint64_t original = read_file(args.input).size();

  const HybridEncoder encoder(h, {.canonical = args.canonical});
  const FrequencyProfile& p = encoder.profile();
  std::size_t m = 0;
  double search_ms = 0.0;
  std::optional<SearchReport> report;
  if (args.automatic) {
    Stopwatch search_clock;
    report = coarse_to_fine_search(p, resolve_alpha(args.alpha));
    search_ms = search_clock.ms();
    m = report->best_m;
  } else {
    m = huffman_domain_size(args.rho.value_or(0.0), p.distinct());
  }

  EncodeTimings timings;
  const HybridArchive archive = encoder.encode_domain(m, &timings);
  const auto bytes = archive.to_bytes();
  write_file(args.output, bytes);

  const double rho = p.distinct() == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(p.distinct());
  const std::uint64_t raw32 = 4 * h.num_incidences();
  row("input", args.input);
  row("output", args.output);
  row("compressed_side", side_name(encoder.side()));
  row("incidences", std::to_string(h.num_incidences()));
  row("distinct_symbols", std::to_string(p.distinct()));
  row("rho", fixed(rho, 6));
  row("huffman_domain", std::to_string(m));
  row("bitwise_width", std::to_string(archive.header.bitwise_width));
  row("payload_bits", std::to_string(archive.payload_bits()));
  row("tree_bits", std::to_string(archive.tree.bit_length));
  row("original_bytes", std::to_string(original));
  row("compressed_bytes", std::to_string(bytes.size()));
  row("compression_rate", original == 0 ? "n/a" : fixed(compression_rate(original, bytes.size()), 3) + "%");
  row("raw32_bytes", std::to_string(raw32));
  row("raw32_rate", raw32 == 0 ? "n/a" : fixed(compression_rate(raw32, bytes.size()), 3) + "%");
  if (report) {
    row("search_evals", std::to_string(report->evaluations()));
    row("estimated_bits", fixed(report->best_bits, 1));
    row("search_ms", ms3(search_ms));
  }
  row("load_ms", ms3(load_ms));
  row("profile_ms", ms3(timings.profile_ms));
  row("tree_ms", ms3(timings.tree_ms));
  row("encode_ms", ms3(timings.encode_ms));
  return kOk;
}

// -------------------------------------------------------------- decompress

struct DecompressArgs {
  std::string input;
  std::string output;
  bool binary = false;
};

int cmd_decompress(const DecompressArgs& args) {
  const HybridArchive archive = load_archive(args.input);
  Stopwatch clock;
  const Hypergraph h = decode(archive);
  const double decode_ms = clock.ms();
  if (args.binary) {
    write_file(args.output, serialize_binary_hypergraph(h));
  } else {
    write_file(args.output, serialize_adjacency_hypergraph(h));
  }
  row("output", args.output);
  row("vertices", std::to_string(h.num_vertices));
  row("hyperedges", std::to_string(h.num_hyperedges));
  row("incidences", std::to_string(h.num_incidences()));
  row("decode_ms", ms3(decode_ms));
  return kOk;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string input;
  std::string reference;
  std::optional<double> alpha;
};

// Streams the archive and compares each entity with the reference, naming
// the stream responsible for the first mismatch.
bool verify_archive_against(const HybridArchive& archive, const Hypergraph& reference) {
  const ArchiveHeader& hdr = archive.header;
  if (hdr.num_vertices != reference.num_vertices || hdr.num_hyperedges != reference.num_hyperedges ||
      hdr.num_incidences != reference.num_incidences()) {
    std::printf("FAIL header: counts differ from the reference\n");
    return false;
  }
  const HuffmanBook book = deserialize_tree(archive.tree, static_cast<unsigned>(hdr.leaf_symbol_width));
  const IncidenceLists& side = reference.side(hdr.compressed_side);
  AdjacencyStream stream(archive);
  std::uint64_t entity = 0;
  try {
    while (stream.next()) {
      entity = stream.entity();
      const auto want = side.neighbors(entity);
      const auto got = stream.neighbors();
      if (sorted(got) == sorted(want)) continue;
      std::printf("FAIL entity %llu (%s side): ", static_cast<unsigned long long>(entity),
                  side_name(hdr.compressed_side).c_str());
      if (got.size() != want.size()) {
        std::printf("degree %zu, reference %zu [degree metadata]\n", got.size(), want.size());
        return false;
      }
      std::vector<EntityId> want_hi;
      std::vector<EntityId> want_lo;
      for (EntityId s : want) (book.find(s) ? want_hi : want_lo).push_back(s);
      const std::size_t k = stream.huffman_count();
      const bool hi_ok = sorted(got.first(k)) == sorted(want_hi);
      const bool lo_ok = sorted(got.subspan(k)) == sorted(want_lo);
      std::string where;
      if (!hi_ok) where = "huffman stream";
      if (!lo_ok) where += where.empty() ? "bitwise stream" : " and bitwise stream";
      if (where.empty()) where = "count metadata";
      std::printf("neighbours differ [%s]\n", where.c_str());
      return false;
    }
  } catch (const DecodeError& e) {
    std::printf("FAIL entity %llu: %s\n", static_cast<unsigned long long>(entity), e.what());
    return false;
  }
  return true;
}

int cmd_verify(const VerifyArgs& args) {
  const auto bytes = read_file(args.input);
  if (is_archive(bytes)) {
    HybridArchive archive;
    try {
      archive = HybridArchive::from_bytes(bytes);
      if (args.reference.empty()) {
        decode(archive);
        std::printf("PASS archive decodes, all streams exhausted\n");
        return kOk;
      }
    } catch (const DecodeError& e) {
      std::printf("FAIL %s\n", e.what());
      return kVerifyFailed;
    }
    const Hypergraph reference = load_hypergraph(args.reference);
    if (!verify_archive_against(archive, reference)) return kVerifyFailed;
    std::printf("PASS archive matches %s\n", args.reference.c_str());
    return kOk;
  }

  const Hypergraph h = load_hypergraph(args.input, {.strict = true});
  std::printf("PASS structure and incidence duality\n");
  const HybridEncoder encoder(h);
  std::vector<std::size_t> domains;
  for (double rho : {0.0, 0.05, 0.25, 0.5, 1.0}) domains.push_back(huffman_domain_size(rho, encoder.profile().distinct()));
  domains.push_back(coarse_to_fine_search(encoder.profile(), resolve_alpha(args.alpha)).best_m);

  bool ok = true;
  for (std::size_t m : domains) {
    const std::string label = "m=" + std::to_string(m);
    try {
      const HybridArchive archive = HybridArchive::from_bytes(encoder.encode_domain(m).to_bytes());
      const Hypergraph back = decode(archive);
      if (!same_incidence(back, h)) {
        std::printf("FAIL %s: decoded incidence differs\n", label.c_str());
        ok = false;
        continue;
      }
      AdjacencyStream stream(archive);
      while (stream.next()) {
      }
      std::printf("PASS %s: roundtrip, %llu bytes\n", label.c_str(),
                  static_cast<unsigned long long>(archive.byte_size()));
    } catch (const DecodeError& e) {
      std::printf("FAIL %s: %s\n", label.c_str(), e.what());
      ok = false;
    }
  }

  const HybridEncoder canonical(h, {.canonical = true});
  const auto first = canonical.encode(0.25).to_bytes();
  const Hypergraph back = decode(HybridArchive::from_bytes(first));
  if (back == canonicalize(h) && encode(back, 0.25, {.canonical = true}).to_bytes() == first) {
    std::printf("PASS canonical archive is byte-reproducible\n");
  } else {
    std::printf("FAIL canonical archive is not byte-reproducible\n");
    ok = false;
  }
  return ok ? kOk : kVerifyFailed;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string input;
  double step = 0.05;
  std::string csv;
  std::string model_csv;
  bool canonical = false;
  std::optional<double> alpha;
};

int cmd_sweep(const SweepArgs& args) {
  const Hypergraph h = load_hypergraph(args.input);
  const HybridEncoder encoder(h, {.canonical = args.canonical});
  const FrequencyProfile& p = encoder.profile();
  const double alpha = resolve_alpha(args.alpha);
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / args.step));
  if (std::abs(static_cast<double>(steps) * args.step - 1.0) > 1e-9)
    throw Error(ErrorKind::Domain, "--step must divide 1 evenly");

  std::ostringstream out;
  out << "rho,actual_bytes,estimated_bytes,encode_ms,decode_ms\n";
  for (std::size_t i = 0; i <= steps; ++i) {
    const double rho = std::min(1.0, static_cast<double>(i) * args.step);
    const std::size_t m = huffman_domain_size(rho, p.distinct());
    EncodeTimings timings;
    const HybridArchive archive = encoder.encode_domain(m, &timings);
    Stopwatch clock;
    decode(archive);
    const double decode_ms = clock.ms();
    const double encode_ms = timings.profile_ms + timings.tree_ms + timings.encode_ms;
    out << fixed(rho, 6) << ',' << archive.byte_size() << ',' << fixed(estimate_cost(p, m, alpha) / 8.0, 1) << ','
        << ms3(encode_ms) << ',' << ms3(decode_ms) << '\n';
  }
  if (args.csv.empty()) {
    std::cout << out.str();
  } else {
    write_file(args.csv, out.str());
  }

  if (!args.model_csv.empty()) {
    std::ostringstream model;
    model << "m,rho,estimated_bits,actual_bits\n";
    for (std::size_t m = 0; m <= p.distinct(); ++m) {
      const ArchiveLayout l = encoder.layout(m);
      const double rho = p.distinct() == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(p.distinct());
      model << m << ',' << fixed(rho, 6) << ',' << fixed(estimate_cost(p, m, alpha), 1) << ','
            << l.payload_bits() + l.tree_bits << '\n';
    }
    write_file(args.model_csv, model.str());
  }
  return kOk;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string input;
  bool exhaustive = false;
  bool actual = false;
  std::string csv;
  std::optional<double> alpha;
};

int cmd_optimize(const OptimizeArgs& args) {
  const Hypergraph h = load_hypergraph(args.input);
  const HybridEncoder encoder(h);
  const double alpha = resolve_alpha(args.alpha);
  Stopwatch clock;
  const SearchReport r = args.exhaustive ? exhaustive_scan(encoder.profile(), alpha)
                                         : coarse_to_fine_search(encoder.profile(), alpha);
  const double search_ms = clock.ms();

  row("mode", args.exhaustive ? "exhaustive" : "coarse-to-fine");
  row("alpha", fixed(alpha, 3));
  row("distinct_symbols", std::to_string(encoder.profile().distinct()));
  row("best_m", std::to_string(r.best_m));
  row("best_rho", fixed(r.best_rho, 6));
  row("estimated_bits", fixed(r.best_bits, 1));
  row("evaluations", std::to_string(r.evaluations()));
  if (!args.exhaustive) {
    std::string grid;
    for (std::size_t m : r.coarse_points) grid += (grid.empty() ? "" : " ") + std::to_string(m);
    row("coarse_grid_m", grid);
    row("refine_interval", "[" + std::to_string(r.refine_lo) + ", " + std::to_string(r.refine_hi) + "]");
  }
  row("search_ms", ms3(search_ms));
  if (args.actual) {
    const HybridArchive archive = encoder.encode_domain(r.best_m);
    row("actual_bits", std::to_string(archive.payload_bits() + archive.tree.bit_length));
    row("actual_bytes", std::to_string(archive.byte_size()));
  }
  if (!args.csv.empty()) {
    std::ostringstream out;
    out << "m,rho,estimated_bits\n";
    const double k = static_cast<double>(encoder.profile().distinct());
    for (const CostSample& s : r.evaluated_points)
      out << s.m << ',' << fixed(k == 0 ? 0.0 : static_cast<double>(s.m) / k, 6) << ',' << fixed(s.estimated_bits, 1)
          << '\n';
    write_file(args.csv, out.str());
  }
  return kOk;
}

// --------------------------------------------------------------------- run

struct RunArgs {
  std::string app;
  std::string input;
  std::uint64_t root = 0;
  std::uint64_t k = 2;
  unsigned iters = 20;
  double damping = kDefaultDamping;
  std::string out;
};

int cmd_run(const RunArgs& args) {
  const auto bytes = read_file(args.input);
  std::optional<HybridArchive> archive;
  std::optional<Hypergraph> raw;
  std::unique_ptr<TraversalSource> src;
  Stopwatch clock;
  if (is_archive(bytes)) {
    archive = HybridArchive::from_bytes(bytes);
    src = std::make_unique<ArchiveSource>(*archive);
  } else {
    raw = load_hypergraph(args.input);
    src = std::make_unique<RawSource>(*raw);
  }
  const double prepare_ms = clock.ms();

  std::ostringstream values;
  clock.reset();
  if (args.app == "bfs") {
    if (args.root > std::numeric_limits<EntityId>::max()) throw Error(ErrorKind::Domain, "--root out of range");
    for (std::uint64_t level : bfs(*src, static_cast<EntityId>(args.root))) {
      if (level == kUnreached) {
        values << "inf\n";
      } else {
        values << level << '\n';
      }
    }
  } else if (args.app == "pagerank") {
    char buf[32];
    for (double x : pagerank(*src, args.damping, args.iters)) {
      std::snprintf(buf, sizeof buf, "%.17g\n", x);
      values << buf;
    }
  } else {
    for (std::uint8_t label : kcore_label_propagation(*src, args.k)) values << static_cast<int>(label) << '\n';
  }
  const double compute_ms = clock.ms();

  if (args.out.empty()) {
    std::cout << values.str();
  } else {
    write_file(args.out, values.str());
  }
  std::fprintf(stderr, "backend %s\n%s_ms %s\ncompute_ms %s\ntotal_ms %s\n", archive ? "archive" : "raw",
               archive ? "decode" : "load", ms3(prepare_ms).c_str(), ms3(compute_ms).c_str(),
               ms3(prepare_ms + compute_ms).c_str());
  return kOk;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string output;
  ZipfianSpec spec{10'000, 2'000, 100'000, 1.5, 42};
  bool binary = false;
};

int cmd_generate(const GenerateArgs& args) {
  Stopwatch clock;
  const Hypergraph h = generate_zipfian_hypergraph(args.spec);
  const double gen_ms = clock.ms();
  if (args.binary) {
    write_file(args.output, serialize_binary_hypergraph(h));
  } else {
    write_file(args.output, serialize_adjacency_hypergraph(h));
  }
  row("output", args.output);
  row("vertices", std::to_string(h.num_vertices));
  row("hyperedges", std::to_string(h.num_hyperedges));
  row("incidences", std::to_string(h.num_incidences()));
  row("generate_ms", ms3(gen_ms));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid Huffman + bitwise compressor for hypergraph adjacency"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hybhuff 0.1.0");

  CompressArgs compress;
  auto* c = app.add_subcommand("compress", "Encode a hypergraph into a HYBH archive");
  c->add_option("--input", compress.input, "AdjacencyHypergraph or HGB1 file")->required()->check(CLI::ExistingFile);
  c->add_option("--output", compress.output, "Archive path")->required();
  auto* rho_opt = c->add_option("--rho", compress.rho, "Huffman domain fraction")->check(CLI::Range(0.0, 1.0));
  auto* auto_opt = c->add_flag("--auto", compress.automatic, "Pick rho with the coarse-to-fine search");
  rho_opt->excludes(auto_opt);
  c->add_flag("--canonical", compress.canonical, "Sort every list before encoding");
  c->add_flag("--strict", compress.strict, "Check incidence duality on load");
  c->add_option("--alpha", compress.alpha, "Per-symbol table cost in bits (overrides HYBHUFF_ALPHA)");

  DecompressArgs decompress;
  auto* d = app.add_subcommand("decompress", "Decode an archive back to a hypergraph file");
  d->add_option("--input", decompress.input, "HYBH archive")->required()->check(CLI::ExistingFile);
  d->add_option("--output", decompress.output, "Output path")->required();
  d->add_flag("--binary", decompress.binary, "Write the HGB1 binary format");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a hypergraph roundtrip or an archive's integrity");
  v->add_option("--input", verify.input, "Hypergraph or HYBH archive")->required()->check(CLI::ExistingFile);
  v->add_option("--reference", verify.reference, "Original hypergraph to compare an archive against")
      ->check(CLI::ExistingFile);
  v->add_option("--alpha", verify.alpha, "Per-symbol table cost in bits");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Encode across a rho grid and emit CSV");
  s->add_option("--input", sweep.input, "Hypergraph file")->required()->check(CLI::ExistingFile);
  s->add_option("--step", sweep.step, "Grid spacing in rho")->check(CLI::Range(1e-6, 1.0))->capture_default_str();
  s->add_option("--csv", sweep.csv, "Write the sweep CSV here instead of stdout");
  s->add_option("--model-csv", sweep.model_csv, "Write estimated vs actual bits for every m");
  s->add_flag("--canonical", sweep.canonical, "Sort every list before encoding");
  s->add_option("--alpha", sweep.alpha, "Per-symbol table cost in bits");

  OptimizeArgs optimize;
  auto* o = app.add_subcommand("optimize", "Search for the best Huffman domain size");
  o->add_option("--input", optimize.input, "Hypergraph file")->required()->check(CLI::ExistingFile);
  o->add_flag("--exhaustive", optimize.exhaustive, "Scan every domain size");
  o->add_flag("--actual", optimize.actual, "Also encode at the chosen size");
  o->add_option("--csv", optimize.csv, "Dump evaluated points");
  o->add_option("--alpha", optimize.alpha, "Per-symbol table cost in bits");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run a traversal workload on a hypergraph or archive");
  r->add_option("--app", run.app, "bfs, pagerank or kcore")
      ->required()
      ->check(CLI::IsMember({"bfs", "pagerank", "kcore"}));
  r->add_option("--input", run.input, "Hypergraph or HYBH archive")->required()->check(CLI::ExistingFile);
  r->add_option("--root", run.root, "BFS root vertex")->capture_default_str();
  r->add_option("--k", run.k, "k-core threshold")->capture_default_str();
  r->add_option("--iters", run.iters, "PageRank iterations")->capture_default_str();
  r->add_option("--damping", run.damping, "PageRank damping")->capture_default_str();
  r->add_option("--out", run.out, "Write values here instead of stdout");

  GenerateArgs generate;
  auto* g = app.add_subcommand("generate", "Write a Zipfian synthetic hypergraph");
  g->add_option("--output", generate.output, "Output path")->required();
  g->add_option("--vertices", generate.spec.num_vertices, "n_v")->capture_default_str();
  g->add_option("--hyperedges", generate.spec.num_hyperedges, "n_h")->capture_default_str();
  g->add_option("--incidences", generate.spec.num_incidences, "N")->capture_default_str();
  g->add_option("--skew", generate.spec.skew, "Zipf exponent z")->capture_default_str();
  g->add_option("--seed", generate.spec.seed, "RNG seed")->capture_default_str();
  g->add_flag("--binary", generate.binary, "Write the HGB1 binary format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c) {
      if (!compress.rho && !compress.automatic) throw Error(ErrorKind::Domain, "compress needs --rho or --auto");
      return cmd_compress(compress);
    }
    if (*d) return cmd_decompress(decompress);
    if (*v) return cmd_verify(verify);
    if (*s) return cmd_sweep(sweep);
    if (*o) return cmd_optimize(optimize);
    if (*r) return cmd_run(run);
    if (*g) return cmd_generate(generate);
  } catch (const DecodeError& e) {
    std::fprintf(stderr, "error: decode: %s\n", e.what());
    return kDecodeError;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternalError;
  }
  return kUsage;
}
