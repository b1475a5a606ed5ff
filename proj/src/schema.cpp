#include "semstore/schema.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace semstore::schema {

namespace {

template <typename Step>
std::set<Iri> reach(const Iri& start, Step step) {
  std::set<Iri> seen{start};
  std::deque<Iri> queue{start};
  while (!queue.empty()) {
    Iri cur = std::move(queue.front());
    queue.pop_front();
    for (auto& next : step(cur)) {
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return seen;
}

std::string join_curies(const std::vector<Iri>& iris) {
  std::string out;
  for (const auto& i : iris) {
    if (!out.empty()) out += ", ";
    out += curie::compact(i);
  }
  return out;
}

}  // namespace

std::set<Iri> subclass_closure(const Graph& g, const Iri& c) {
  return reach(c, [&g](const Iri& x) { return g.subjects(vocab::sub_class_of(), x); });
}

std::set<Iri> superclass_closure(const Graph& g, const Iri& c) {
  return reach(c, [&g](const Iri& x) { return g.objects(x, vocab::sub_class_of()); });
}

std::set<Iri> instances_of(const Graph& g, const Iri& c) {
  std::set<Iri> out;
  for (const auto& d : subclass_closure(g, c)) {
    for (auto& x : g.subjects(vocab::type(), d)) out.insert(std::move(x));
  }
  return out;
}

std::map<Iri, std::size_t> subclass_distances(const Graph& g, const Iri& root) {
  std::map<Iri, std::size_t> dist{{root, 0}};
  std::deque<Iri> queue{root};
  while (!queue.empty()) {
    Iri cur = std::move(queue.front());
    queue.pop_front();
    const std::size_t d = dist.at(cur);
    for (auto& child : g.subjects(vocab::sub_class_of(), cur)) {
      if (dist.emplace(child, d + 1).second) queue.push_back(std::move(child));
    }
  }
  return dist;
}

bool is_declared_class(const Graph& g, const Iri& c) {
  return g.contains(Triple{c, vocab::type(), vocab::rdfs_class()});
}

std::set<Iri> declared_classes(const Graph& g) {
  auto v = g.subjects(vocab::type(), vocab::rdfs_class());
  return {v.begin(), v.end()};
}

std::vector<Triple> infer_types(const Graph& g) {
  std::map<Iri, std::vector<Iri>> domains;
  std::map<Iri, std::vector<Iri>> ranges;
  for (const auto& t : g.match({std::nullopt, vocab::domain(), std::nullopt})) {
    if (const Iri* c = t.object.as_iri()) domains[t.subject].push_back(*c);
  }
  for (const auto& t : g.match({std::nullopt, vocab::range(), std::nullopt})) {
    if (const Iri* c = t.object.as_iri()) ranges[t.subject].push_back(*c);
  }
  if (domains.empty() && ranges.empty()) return {};

  // Worklist: every triple, asserted or inferred, is examined exactly once.
  std::set<Triple> inferred;
  std::deque<Triple> work(g.triples().begin(), g.triples().end());
  auto emit = [&](const Iri& subject, const Iri& cls) {
    Triple t{subject, vocab::type(), Term(cls)};
    if (g.contains(t) || !inferred.insert(t).second) return;
    work.push_back(std::move(t));
  };
  while (!work.empty()) {
    const Triple t = std::move(work.front());
    work.pop_front();
    if (auto it = domains.find(t.predicate); it != domains.end()) {
      for (const auto& c : it->second) emit(t.subject, c);
    }
    if (auto it = ranges.find(t.predicate); it != ranges.end()) {
      if (const Iri* o = t.object.as_iri()) {
        for (const auto& c : it->second) emit(*o, c);
      }
    }
  }
  return {inferred.begin(), inferred.end()};
}

bool is_builtin_predicate(const Iri& p) {
  return p == vocab::type() || p == vocab::sub_class_of() || p == vocab::label() ||
         p == vocab::comment() || p == vocab::domain() || p == vocab::range() ||
         p == vocab::synonym() || p == vocab::description();
}

ValidationReport validate_schema(const Graph& g) {
  ValidationReport report;
  const auto classes = declared_classes(g);

  auto require_class = [&](const Triple& edge, const Term& end) {
    const Iri* c = end.as_iri();
    if (c == nullptr) {
      report.errors.push_back({"invalid_class_reference", edge.subject,
                               curie::compact(edge.predicate) + " has a literal object"});
    } else if (!classes.contains(*c)) {
      report.errors.push_back({"undeclared_class", edge.subject,
                               curie::compact(edge.subject) + " " + curie::compact(edge.predicate) +
                                   " references undeclared class " + curie::compact(*c)});
    }
  };

  for (const auto& t : g.match({std::nullopt, vocab::sub_class_of(), std::nullopt})) {
    require_class(t, Term(t.subject));
    require_class(t, t.object);
  }
  for (const auto* p : {&vocab::domain(), &vocab::range()}) {
    for (const auto& t : g.match({std::nullopt, *p, std::nullopt})) require_class(t, t.object);
  }

  // A property counts as declared when typed rdf:Property or given a
  // domain/range.
  std::set<Iri> declared_props;
  for (auto& p : g.subjects(vocab::type(), vocab::property())) declared_props.insert(std::move(p));
  for (const auto* p : {&vocab::domain(), &vocab::range()}) {
    for (const auto& t : g.match({std::nullopt, *p, std::nullopt})) declared_props.insert(t.subject);
  }
  std::set<Iri> used;
  for (const auto& t : g.triples()) used.insert(t.predicate);
  for (const auto& p : used) {
    if (!is_builtin_predicate(p) && !declared_props.contains(p)) {
      report.errors.push_back(
          {"undeclared_property", p, "property " + curie::compact(p) + " is used but never declared"});
    }
  }

  // Tarjan over subClassOf edges (child -> parent). Self-loops are harmless.
  std::map<Iri, std::vector<Iri>> parents;
  for (const auto& t : g.match({std::nullopt, vocab::sub_class_of(), std::nullopt})) {
    if (const Iri* o = t.object.as_iri(); o && *o != t.subject) {
      parents[t.subject].push_back(*o);
      parents.try_emplace(*o);
    }
  }
  std::map<Iri, std::size_t> index, low;
  std::set<Iri> on_stack;
  std::vector<Iri> stack;
  std::size_t counter = 0;
  std::function<void(const Iri&)> strongconnect = [&](const Iri& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : parents[v]) {
      if (!index.contains(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.contains(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] != index[v]) return;
    std::vector<Iri> component;
    for (;;) {
      Iri w = stack.back();
      stack.pop_back();
      on_stack.erase(w);
      component.push_back(w);
      if (w == v) break;
    }
    if (component.size() > 1) {
      std::sort(component.begin(), component.end());
      report.warnings.push_back(
          {"subclass_cycle", component.front(), "subclass cycle among {" + join_curies(component) + "}"});
    }
  };
  for (const auto& [v, _] : parents) {
    if (!index.contains(v)) strongconnect(v);
  }

  for (const auto& c : classes) {
    if (g.match({c, vocab::label(), std::nullopt}).empty()) {
      report.warnings.push_back({"missing_label", c, "class " + curie::compact(c) + " has no rdfs:label"});
    }
  }
  return report;
}

}  // namespace semstore::schema
