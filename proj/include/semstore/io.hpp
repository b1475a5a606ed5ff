#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semstore/graph.hpp"

namespace semstore::io {

// One `<s> <p> <o> .` line per triple, lines sorted bytewise, each
// terminated by '\n'. Literals are `"lexical"` or `"lexical"^^<datatype>`
// with \\ \" \n \r \t escapes.
std::string emit_triples(const Graph& g);
std::string format_triple(const Triple& t);

// Accepts canonical or unsorted lines; blank lines and lines starting with
// '#' are skipped. Throws ParseError with the offending line number.
Graph parse_triples(std::string_view text);

// RDF/XML subset: one rdf:Description per subject (sorted), rdf:type first,
// remaining properties in canonical order. Subjects and resources under
// `base` are written as rdf:ID / "#name". Throws Error("unrepresentable_predicate")
// when a predicate cannot be written as an XML qualified name.
std::string emit_rdfxml(const Graph& g, std::string_view base = ns::kStore);

// Inverse of emit_rdfxml. Prefixes rdf:, rdfs:, store: are fixed; other
// xmlns declarations on the root are honored. "#name" and rdf:ID resolve
// against xml:base (default: the store namespace). Anything else raises
// Error("unsupported_construct") naming the element or attribute.
Graph parse_rdfxml_subset(std::string_view text);

// One record element whose `id_attribute` names the subject; each leaf
// child becomes (prefix+id, prefix+element, "trimmed text").
std::vector<Triple> parse_flat_xml(std::string_view text, std::string_view id_attribute,
                                   std::string_view prefix);

// Writes `contents` to `path` via a temporary file in the same directory
// and an atomic rename.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace semstore::io
