#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semstore/agents.hpp"
#include "semstore/capture.hpp"
#include "semstore/error.hpp"
#include "semstore/io.hpp"
#include "semstore/path.hpp"
#include "semstore/schema.hpp"
#include "semstore/snap.hpp"

namespace py = pybind11;
using namespace semstore;

namespace {

PyObject* g_error = nullptr;

Iri resolve(const std::string& text) { return curie::expand(text, ns::kStore); }

py::dict node(const Graph& g, const Iri& iri) {
  py::dict d;
  d["iri"] = iri.str();
  d["curie"] = curie::compact(iri);
  for (const auto& t : g.match({iri, vocab::label(), std::nullopt})) {
    if (t.object.is_literal()) {
      d["label"] = t.object.literal().lexical;
      break;
    }
  }
  return d;
}

// Immutable handle; every mutating call returns a new store.
class Store {
 public:
  explicit Store(Graph g) : catalog_(std::make_shared<const Graph>(std::move(g))) {}

  static Store from_triples(const std::string& text) { return Store(io::parse_triples(text)); }
  static Store from_rdfxml(const std::string& text) { return Store(io::parse_rdfxml_subset(text)); }

  const Graph& graph() const { return catalog_.graph(); }
  std::size_t size() const { return graph().size(); }

  Store merged(const Store& other) const {
    Graph g = graph();
    g.insert_all(other.graph().triples());
    return Store(std::move(g));
  }

  Store with_flat_xml(const std::string& text, const std::string& id_attr, const std::string& prefix) const {
    Graph g = graph();
    g.insert_all(io::parse_flat_xml(text, id_attr, prefix));
    return Store(std::move(g));
  }

  std::string export_triples() const { return io::emit_triples(graph()); }
  std::string export_rdfxml(const std::string& base) const { return io::emit_rdfxml(graph(), base); }

  py::list search(const std::string& q, std::size_t limit) const {
    py::list out;
    for (const auto& r : agents::search(catalog_, q, limit)) {
      auto d = node(graph(), r.iri);
      d["rank"] = r.rank;
      d["score"] = boost::rational_cast<double>(r.score);
      d["score_exact"] = agents::format_score(r.score);
      d["matched_via"] = std::string(agents::to_string(r.matched_via));
      out.append(d);
    }
    return out;
  }

  std::vector<std::string> path_query(const std::string& from, const std::string& expr) const {
    std::vector<std::string> out;
    for (const auto& n : path::eval_path(graph(), path::compile_path(path::parse_path(expr)), resolve(from)))
      out.push_back(n.str());
    return out;
  }

  std::vector<std::string> subclasses(const std::string& c) const {
    std::vector<std::string> out;
    for (const auto& n : schema::subclass_closure(graph(), resolve(c))) out.push_back(n.str());
    return out;
  }

  std::vector<std::string> instances(const std::string& c) const {
    std::vector<std::string> out;
    for (const auto& n : schema::instances_of(graph(), resolve(c))) out.push_back(n.str());
    return out;
  }

  py::dict validate() const {
    const auto r = schema::validate_schema(graph());
    auto issues = [](const std::vector<schema::Issue>& v) {
      py::list l;
      for (const auto& i : v) {
        py::dict d;
        d["code"] = i.code;
        d["subject"] = i.subject;
        d["message"] = i.message;
        l.append(d);
      }
      return l;
    };
    py::dict d;
    d["errors"] = issues(r.errors);
    d["warnings"] = issues(r.warnings);
    d["accepted"] = r.accepted();
    return d;
  }

  py::list recommend(const std::vector<std::tuple<std::string, std::string, std::string>>& fluents,
                     const std::string& rules_text, std::size_t limit) const {
    snap::Situation s("py");
    for (const auto& [cat, key, value] : fluents) {
      const auto c = snap::parse_category(cat);
      if (!c) throw Error("unknown_category", "unknown category '" + cat + "'");
      s = snap::assert_fluent(s, {*c, key, value});
    }
    py::list out;
    for (const auto& r : agents::recommend(graph(), s, snap::parse_rules(rules_text), limit)) {
      auto d = node(graph(), r.product);
      d["need"] = r.need.target.str();
      d["priority"] = r.need.priority;
      d["rule"] = r.need.source_rule;
      d["score"] = boost::rational_cast<double>(r.score);
      d["score_exact"] = agents::format_score(r.score);
      out.append(d);
    }
    return out;
  }

 private:
  agents::Catalog catalog_;
};

py::tuple run_capture(const std::string& summary, const std::string& terms, const std::string& schematic,
                  const std::string& prefix) {
  auto r = capture::run_capture_pipeline(summary, terms, schematic, prefix);
  const bool ok = r.report.ok();
  return py::make_tuple(Store(std::move(r.graph)), ok, r.report.render());
}

}  // namespace

PYBIND11_MODULE(semstore, m) {
  m.doc() = "Semantic store core: capture, search, path queries, recommendations, serializers.";

  g_error = PyErr_NewException("semstore.SemstoreError", PyExc_ValueError, nullptr);
  m.attr("SemstoreError") = py::handle(g_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(g_error)(e.what());
      exc.attr("code") = e.code();
      exc.attr("position") = e.position();
      PyErr_SetObject(g_error, exc.ptr());
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(g_error)(e.what());
      exc.attr("code") = e.code();
      PyErr_SetObject(g_error, exc.ptr());
    }
  });

  m.attr("STORE_NS") = std::string(ns::kStore);

  py::class_<Store>(m, "Store")
      .def(py::init([] { return Store(Graph{}); }))
      .def_static("from_triples", &Store::from_triples, py::arg("text"))
      .def_static("from_rdfxml", &Store::from_rdfxml, py::arg("text"))
      .def("__len__", &Store::size)
      .def("merged", &Store::merged, py::arg("other"))
      .def("with_flat_xml", &Store::with_flat_xml, py::arg("text"), py::arg("id_attr"), py::arg("prefix"))
      .def("export_triples", &Store::export_triples)
      .def("export_rdfxml", &Store::export_rdfxml, py::arg("base") = std::string(ns::kStore))
      .def("search", &Store::search, py::arg("q"), py::arg("limit") = 10)
      .def("path_query", &Store::path_query, py::arg("start"), py::arg("path"))
      .def("subclasses", &Store::subclasses, py::arg("cls"))
      .def("instances", &Store::instances, py::arg("cls"))
      .def("validate", &Store::validate)
      .def("recommend", &Store::recommend, py::arg("fluents"), py::arg("rules"), py::arg("limit") = 10);

  m.def("capture", &run_capture, py::arg("summary"), py::arg("terms"), py::arg("schematic"),
        py::arg("prefix") = std::string(ns::kStore),
        "Runs the five capture stages. Returns (store, ok, report_text).");
  m.def("tokenize", &agents::tokenize, py::arg("text"));
  m.def("parse_path", [](const std::string& s) { return path::parse_path(s).to_string(); }, py::arg("text"),
        "Parses a path expression and returns its canonical text.");
}
