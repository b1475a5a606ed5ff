#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "semstore/graph.hpp"

namespace semstore::schema {

// c plus every class reachable downwards over rdfs:subClassOf.
std::set<Iri> subclass_closure(const Graph& g, const Iri& c);
// c plus every class reachable upwards.
std::set<Iri> superclass_closure(const Graph& g, const Iri& c);
// Entailed instances: x with (x rdf:type d) for some d in subclass_closure(c).
std::set<Iri> instances_of(const Graph& g, const Iri& c);

// Shortest rdfs:subClassOf distance from `root` down to each member of its
// subclass closure (root itself at 0).
std::map<Iri, std::size_t> subclass_distances(const Graph& g, const Iri& root);

bool is_declared_class(const Graph& g, const Iri& c);
std::set<Iri> declared_classes(const Graph& g);

// Type assertions entailed by rdfs:domain / rdfs:range declarations, run to
// fixpoint. Returns only triples absent from `g`; `g` is not modified.
std::vector<Triple> infer_types(const Graph& g);

struct Issue {
  std::string code;
  Iri subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool accepted() const noexcept { return errors.empty(); }
};

// Errors: undeclared classes on subClassOf/domain/range edges, properties
// used without any declaration. Warnings: subclass cycles, unlabeled classes.
ValidationReport validate_schema(const Graph& g);

// Predicates every graph may use without declaring them.
bool is_builtin_predicate(const Iri& p);

}  // namespace semstore::schema
