#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rwr/errors.hpp"
#include "rwr/generators.hpp"
#include "rwr/graph.hpp"
#include "rwr/index.hpp"
#include "rwr/rwr.hpp"
#include "rwr/search.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::array_t<double> to_numpy(std::vector<double> values) {
  auto* heap = new std::vector<double>(std::move(values));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

rwr::NodeId resolve(const rwr::ProximityIndex& idx, const py::object& node) {
  if (py::isinstance<py::str>(node)) return idx.require(node.cast<std::string>());
  auto id = node.cast<std::int64_t>();
  if (id < 0 || id >= static_cast<std::int64_t>(idx.node_count())) {
    throw rwr::LookupError("node id " + std::to_string(id) + " out of range");
  }
  return static_cast<rwr::NodeId>(id);
}

rwr::NodeId resolve(const rwr::Graph& g, const py::object& node) {
  if (py::isinstance<py::str>(node)) {
    auto label = node.cast<std::string>();
    if (auto id = g.find(label)) return *id;
    throw rwr::LookupError("unknown node '" + label + "'");
  }
  auto id = node.cast<std::int64_t>();
  if (id < 0 || id >= static_cast<std::int64_t>(g.node_count())) {
    throw rwr::LookupError("node id " + std::to_string(id) + " out of range");
  }
  return static_cast<rwr::NodeId>(id);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact top-K random walk with restart search";
  m.attr("__version__") = RWRTOPK_VERSION;

  // Translators run newest first, so the base class goes in first.
  py::register_exception<rwr::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<rwr::LookupError>(m, "LookupError", PyExc_KeyError);
  py::register_exception<rwr::ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<rwr::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<rwr::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<rwr::ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<rwr::Graph>(m, "Graph")
      .def_static(
          "from_edges",
          [](rwr::NodeId n, const std::vector<std::tuple<rwr::NodeId, rwr::NodeId, double>>& edges) {
            std::vector<rwr::Edge> out;
            out.reserve(edges.size());
            for (const auto& [s, d, w] : edges) out.push_back({s, d, w});
            return rwr::Graph::from_edges(n, std::move(out));
          },
          "n"_a, "edges"_a, "Build from (src, dst, weight) tuples over ids [0, n).")
      .def_property_readonly("node_count", &rwr::Graph::node_count)
      .def_property_readonly("edge_count", &rwr::Graph::edge_count)
      .def_property_readonly("labels", &rwr::Graph::labels)
      .def_property_readonly("edges",
                             [](const rwr::Graph& g) {
                               std::vector<std::tuple<rwr::NodeId, rwr::NodeId, double>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.src, e.dst, e.weight);
                               return out;
                             })
      .def("__repr__", [](const rwr::Graph& g) {
        return "<Graph n=" + std::to_string(g.node_count()) + " m=" + std::to_string(g.edge_count()) +
               ">";
      });

  m.def("load_edge_list", py::overload_cast<const std::filesystem::path&>(&rwr::load_edge_list),
        "path"_a);
  m.def(
      "parse_edge_list",
      [](const std::string& text) {
        std::istringstream in(text);
        return rwr::load_edge_list(in);
      },
      "text"_a);

  m.def(
      "planted_partition",
      [](rwr::NodeId n, std::uint32_t blocks, double p_in, double p_out, std::uint64_t seed) {
        return rwr::gen::planted_partition({n, blocks, p_in, p_out, seed});
      },
      "n"_a, "blocks"_a, "p_in"_a, "p_out"_a, "seed"_a = 0);
  m.def(
      "erdos_renyi",
      [](rwr::NodeId n, std::uint64_t edges, bool weighted, bool self_loops, std::uint64_t seed) {
        return rwr::gen::erdos_renyi({n, edges, weighted, self_loops, seed});
      },
      "n"_a, "m"_a, "weighted"_a = false, "self_loops"_a = false, "seed"_a = 0);

  py::class_<rwr::QueryResult>(m, "QueryResult")
      .def_property_readonly("nodes",
                             [](const rwr::QueryResult& r) {
                               std::vector<rwr::NodeId> out;
                               for (const auto& x : r.ranked) out.push_back(x.node);
                               return out;
                             })
      .def_property_readonly("proximities",
                             [](const rwr::QueryResult& r) {
                               std::vector<double> out;
                               for (const auto& x : r.ranked) out.push_back(x.proximity);
                               return out;
                             })
      .def_property_readonly("nodes_visited",
                             [](const rwr::QueryResult& r) { return r.stats.nodes_visited; })
      .def_property_readonly("proximities_computed",
                             [](const rwr::QueryResult& r) { return r.stats.proximities_computed; })
      .def_property_readonly("terminated_at_layer",
                             [](const rwr::QueryResult& r) { return r.stats.terminated_at_layer; });

  py::class_<rwr::ProximityIndex>(m, "ProximityIndex")
      .def_property_readonly("node_count", &rwr::ProximityIndex::node_count)
      .def_property_readonly("edge_count", &rwr::ProximityIndex::edge_count)
      .def_property_readonly("restart", &rwr::ProximityIndex::restart)
      .def_property_readonly("kappa", &rwr::ProximityIndex::kappa)
      .def_property_readonly("ordering",
                             [](const rwr::ProximityIndex& idx) {
                               return std::string(rwr::to_string(idx.strategy()));
                             })
      .def_property_readonly("nnz_lower_inverse",
                             [](const rwr::ProximityIndex& idx) { return idx.lower_inverse().nnz(); })
      .def_property_readonly("nnz_upper_inverse",
                             [](const rwr::ProximityIndex& idx) { return idx.upper_inverse().nnz(); })
      .def_property_readonly("labels", &rwr::ProximityIndex::labels)
      .def(
          "topk",
          [](const rwr::ProximityIndex& idx, const py::object& node, std::size_t k, bool pruning) {
            const auto q = resolve(idx, node);
            py::gil_scoped_release release;
            return rwr::topk_search(idx, q, k, {pruning, nullptr});
          },
          "node"_a, "k"_a = 5, "pruning"_a = true,
          "Exact top-K nodes by proximity to `node` (label or id).")
      .def(
          "proximities",
          [](const rwr::ProximityIndex& idx, const py::object& node) {
            return to_numpy(rwr::full_vector(idx, resolve(idx, node)).values);
          },
          "node"_a, "Proximity of every node to `node`.")
      .def(
          "save", [](const rwr::ProximityIndex& idx, const std::filesystem::path& path) {
            rwr::save_index(path, idx);
          },
          "path"_a)
      .def("__eq__", [](const rwr::ProximityIndex& a, const rwr::ProximityIndex& b) { return a == b; });

  m.def(
      "build_index",
      [](const rwr::Graph& g, double c, const std::string& order, double drop_tol,
         std::uint64_t seed) {
        rwr::IndexOptions opts{c, rwr::parse_ordering_strategy(order), drop_tol, seed};
        py::gil_scoped_release release;
        return rwr::build_index(g, opts);
      },
      "graph"_a, "c"_a = rwr::kDefaultRestart, "order"_a = "hybrid", "drop_tol"_a = 0.0,
      "seed"_a = 0);
  m.def(
      "load_index",
      [](const std::filesystem::path& path) { return rwr::load_index(path); }, "path"_a);

  m.def(
      "iterative_rwr",
      [](const rwr::Graph& g, const py::object& node, double c, double tol, std::size_t max_iter) {
        const auto a = rwr::column_normalize(g);
        auto p = rwr::iterative_rwr(a, resolve(g, node), c, tol, max_iter);
        if (!p.converged) throw rwr::Error("iteration did not converge");
        return to_numpy(std::move(p.values));
      },
      "graph"_a, "node"_a, "c"_a = rwr::kDefaultRestart, "tol"_a = rwr::kDefaultOracleTolerance,
      "max_iter"_a = rwr::kDefaultOracleMaxIter,
      "Proximity vector by fixed-point iteration (reference solver).");
}
