#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hybhuff/archive.hpp"
#include "hybhuff/error.hpp"
#include "hybhuff/optimizer.hpp"
#include "hybhuff/workloads.hpp"

namespace py = pybind11;
using namespace hybhuff;

namespace {

PyObject* error_type = nullptr;
PyObject* decode_error_type = nullptr;

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<std::uint64_t> offsets_of(const IncidenceLists& l) { return to_array(l.offsets); }

Hypergraph from_hyperedges(std::uint64_t num_vertices, const std::vector<std::vector<EntityId>>& edges) {
  IncidenceLists lists;
  for (const auto& e : edges) {
    lists.adjacency.insert(lists.adjacency.end(), e.begin(), e.end());
    lists.offsets.push_back(lists.adjacency.size());
  }
  Hypergraph h = rebuild_dual(Side::Hyperedges, std::move(lists), num_vertices, edges.size());
  validate_structure(h);
  return h;
}

std::vector<std::vector<EntityId>> lists_of(const IncidenceLists& l) {
  std::vector<std::vector<EntityId>> out;
  out.reserve(l.size());
  for (std::uint64_t i = 0; i < l.size(); ++i) {
    const auto n = l.neighbors(i);
    out.emplace_back(n.begin(), n.end());
  }
  return out;
}

py::dict report_dict(const SearchReport& r) {
  py::dict d;
  d["best_m"] = r.best_m;
  d["best_rho"] = r.best_rho;
  d["best_bits"] = r.best_bits;
  d["evaluations"] = r.evaluations();
  std::vector<std::pair<std::size_t, double>> points;
  for (const auto& s : r.evaluated_points) points.emplace_back(s.m, s.estimated_bits);
  d["evaluated_points"] = points;
  d["coarse_points"] = r.coarse_points;
  d["refine_interval"] = std::make_pair(r.refine_lo, r.refine_hi);
  d["exhaustive"] = r.exhaustive;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid Huffman + bitwise compression of hypergraph adjacency";

  error_type = py::exception<Error>(m, "HybhuffError", PyExc_ValueError).release().ptr();
  decode_error_type = py::exception<DecodeError>(m, "DecodeError", error_type).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DecodeError& e) {
      PyErr_SetString(decode_error_type, e.what());
    } catch (const Error& e) {
      PyErr_SetString(error_type, e.what());
    }
  });

  py::enum_<Side>(m, "Side").value("VERTICES", Side::Vertices).value("HYPEREDGES", Side::Hyperedges);

  py::class_<Hypergraph>(m, "Hypergraph")
      .def_readonly("num_vertices", &Hypergraph::num_vertices)
      .def_readonly("num_hyperedges", &Hypergraph::num_hyperedges)
      .def_property_readonly("num_incidences", &Hypergraph::num_incidences)
      .def_property_readonly("vertex_offsets", [](const Hypergraph& h) { return offsets_of(h.vertices); })
      .def_property_readonly("vertex_adjacency", [](const Hypergraph& h) { return to_array(h.vertices.adjacency); })
      .def_property_readonly("hyperedge_offsets", [](const Hypergraph& h) { return offsets_of(h.hyperedges); })
      .def_property_readonly("hyperedge_adjacency",
                             [](const Hypergraph& h) { return to_array(h.hyperedges.adjacency); })
      .def("hyperedges", [](const Hypergraph& h) { return lists_of(h.hyperedges); })
      .def("vertex_lists", [](const Hypergraph& h) { return lists_of(h.vertices); })
      .def("same_incidence", [](const Hypergraph& a, const Hypergraph& b) { return same_incidence(a, b); })
      .def("canonical", [](const Hypergraph& h) { return canonicalize(h); })
      .def("to_text", &serialize_adjacency_hypergraph)
      .def("to_binary",
           [](const Hypergraph& h) {
             const auto b = serialize_binary_hypergraph(h);
             return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
           })
      .def(py::self == py::self)
      .def("__repr__", [](const Hypergraph& h) {
        return "Hypergraph(num_vertices=" + std::to_string(h.num_vertices) +
               ", num_hyperedges=" + std::to_string(h.num_hyperedges) +
               ", num_incidences=" + std::to_string(h.num_incidences()) + ")";
      });

  m.def("from_hyperedges", &from_hyperedges, py::arg("num_vertices"), py::arg("hyperedges"));
  m.def(
      "parse_text", [](const std::string& text, bool strict) { return parse_adjacency_hypergraph(text, {strict}); },
      py::arg("text"), py::arg("strict") = false);
  m.def(
      "parse_binary",
      [](py::bytes data, bool strict) {
        const std::string_view v(data);
        return parse_binary_hypergraph(std::span(reinterpret_cast<const std::uint8_t*>(v.data()), v.size()), {strict});
      },
      py::arg("data"), py::arg("strict") = false);
  m.def(
      "load", [](const std::string& path, bool strict) { return load_hypergraph(path, {strict}); }, py::arg("path"),
      py::arg("strict") = false);
  m.def(
      "generate_zipfian",
      [](std::uint64_t nv, std::uint64_t nh, std::uint64_t n, double skew, std::uint64_t seed) {
        return generate_zipfian_hypergraph({nv, nh, n, skew, seed});
      },
      py::arg("num_vertices"), py::arg("num_hyperedges"), py::arg("num_incidences"), py::arg("skew") = 1.5,
      py::arg("seed") = 0);

  py::class_<HybridArchive>(m, "Archive")
      .def_property_readonly("compressed_side", [](const HybridArchive& a) { return a.header.compressed_side; })
      .def_property_readonly("num_incidences", [](const HybridArchive& a) { return a.header.num_incidences; })
      .def_property_readonly("distinct_symbols", [](const HybridArchive& a) { return a.header.distinct_symbols; })
      .def_property_readonly("huffman_domain_size",
                             [](const HybridArchive& a) { return a.header.huffman_domain_size; })
      .def_property_readonly("bitwise_width", [](const HybridArchive& a) { return a.header.bitwise_width; })
      .def_property_readonly("canonical", [](const HybridArchive& a) { return a.header.canonical; })
      .def_property_readonly("payload_bits", &HybridArchive::payload_bits)
      .def_property_readonly("tree_bits", [](const HybridArchive& a) { return a.tree.bit_length; })
      .def_property_readonly("byte_size", &HybridArchive::byte_size)
      .def("to_bytes",
           [](const HybridArchive& a) {
             const auto b = a.to_bytes();
             return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
           })
      .def_static("from_bytes",
                  [](py::bytes data) {
                    const std::string_view v(data);
                    return HybridArchive::from_bytes(
                        std::span(reinterpret_cast<const std::uint8_t*>(v.data()), v.size()));
                  })
      .def("neighbor_lists",
           [](const HybridArchive& a) {
             std::vector<std::vector<EntityId>> out;
             for (auto entry : AdjacencyStream(a)) out.emplace_back(entry.neighbors.begin(), entry.neighbors.end());
             return out;
           })
      .def("__len__", &HybridArchive::byte_size);

  m.def(
      "encode", [](const Hypergraph& h, double rho, bool canonical) { return encode(h, rho, {canonical}); },
      py::arg("hypergraph"), py::arg("rho"), py::arg("canonical") = false);
  m.def(
      "encode_domain",
      [](const Hypergraph& h, std::size_t size, bool canonical) { return encode_domain(h, size, {canonical}); },
      py::arg("hypergraph"), py::arg("m"), py::arg("canonical") = false);
  m.def("decode", &decode, py::arg("archive"));
  m.def("compression_rate", &compression_rate, py::arg("original_bytes"), py::arg("compressed_bytes"));
  m.def(
      "select_side", [](const Hypergraph& h) { return select_side(h).side; }, py::arg("hypergraph"));

  py::class_<FrequencyProfile>(m, "FrequencyProfile")
      .def_readonly("total", &FrequencyProfile::total)
      .def_property_readonly("distinct", &FrequencyProfile::distinct)
      .def_property_readonly("ranked_symbols", [](const FrequencyProfile& p) { return to_array(p.ranked_symbols); })
      .def_property_readonly("ranked_counts", [](const FrequencyProfile& p) { return to_array(p.ranked_counts); })
      .def("count_of", &FrequencyProfile::count_of);

  m.def(
      "frequency_profile", [](const std::vector<EntityId>& symbols) { return build_frequency_profile(symbols); },
      py::arg("symbols"));
  m.def(
      "profile_of", [](const Hypergraph& h) { return build_frequency_profile(select_side(h).symbols); },
      py::arg("hypergraph"));
  m.def("estimate_cost", &estimate_cost, py::arg("profile"), py::arg("m"), py::arg("alpha") = kDefaultAlpha);
  m.def("huffman_domain_size", &huffman_domain_size, py::arg("rho"), py::arg("distinct"));
  m.def(
      "optimize",
      [](const FrequencyProfile& p, double alpha, bool exhaustive) {
        return report_dict(exhaustive ? exhaustive_scan(p, alpha) : coarse_to_fine_search(p, alpha));
      },
      py::arg("profile"), py::arg("alpha") = kDefaultAlpha, py::arg("exhaustive") = false);
  m.def("search_evaluation_budget", &search_evaluation_budget, py::arg("distinct"));
  m.def(
      "fit_size_curve",
      [](const std::vector<std::pair<double, double>>& points) {
        std::vector<CurvePoint> pts;
        for (const auto& [x, y] : points) pts.push_back({x, y});
        const SizeCurveFit f = fit_size_curve(pts);
        py::dict d;
        d["a"] = f.a;
        d["b"] = f.b;
        d["c"] = f.c;
        d["d"] = f.d;
        d["residual_norm"] = f.residual_norm;
        return d;
      },
      py::arg("points"));

  auto bfs_levels = [](const TraversalSource& src, EntityId root) {
    std::vector<std::optional<std::uint64_t>> out;
    for (std::uint64_t l : bfs(src, root)) out.push_back(l == kUnreached ? std::nullopt : std::optional(l));
    return out;
  };
  m.def(
      "bfs", [=](const Hypergraph& h, EntityId root) { return bfs_levels(RawSource(h), root); }, py::arg("source"),
      py::arg("root"));
  m.def(
      "bfs", [=](const HybridArchive& a, EntityId root) { return bfs_levels(ArchiveSource(a), root); },
      py::arg("source"), py::arg("root"));
  m.def(
      "pagerank",
      [](const Hypergraph& h, double damping, unsigned iterations) {
        return to_array(pagerank(RawSource(h), damping, iterations));
      },
      py::arg("source"), py::arg("damping") = kDefaultDamping, py::arg("iterations") = 20);
  m.def(
      "pagerank",
      [](const HybridArchive& a, double damping, unsigned iterations) {
        return to_array(pagerank(ArchiveSource(a), damping, iterations));
      },
      py::arg("source"), py::arg("damping") = kDefaultDamping, py::arg("iterations") = 20);
  m.def(
      "kcore", [](const Hypergraph& h, std::uint64_t k) { return to_array(kcore_label_propagation(RawSource(h), k)); },
      py::arg("source"), py::arg("k"));
  m.def(
      "kcore",
      [](const HybridArchive& a, std::uint64_t k) { return to_array(kcore_label_propagation(ArchiveSource(a), k)); },
      py::arg("source"), py::arg("k"));
}
