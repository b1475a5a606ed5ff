#include "semstore/term.hpp"

#include <array>
#include <stdexcept>

#include "semstore/error.hpp"

namespace semstore {

namespace {

bool forbidden_in_iri(unsigned char c) {
  if (c <= 0x20) return true;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '\\': case '^': case '`':
      return true;
    default:
      return false;
  }
}

struct PrefixEntry {
  std::string_view prefix;
  std::string_view ns;
};

constexpr std::array<PrefixEntry, 3> kPrefixes{{
    {"rdf", ns::kRdf},
    {"rdfs", ns::kRdfs},
    {"store", ns::kStore},
}};

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw std::invalid_argument("IRI must not be empty");
  for (unsigned char c : value_) {
    if (forbidden_in_iri(c)) {
      throw std::invalid_argument("IRI contains a forbidden character: " + value_);
    }
  }
}

namespace curie {

namespace {
Iri make(std::string text) {
  try {
    return Iri(std::move(text));
  } catch (const std::invalid_argument& e) {
    throw Error("invalid_iri", e.what());
  }
}
}  // namespace

Iri expand(std::string_view text, std::optional<std::string_view> default_namespace) {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
    return make(std::string(text.substr(1, text.size() - 2)));
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    if (default_namespace) return make(std::string(*default_namespace) + std::string(text));
    throw Error("unknown_prefix", "name has no prefix: " + std::string(text));
  }
  const auto prefix = text.substr(0, colon);
  for (const auto& entry : kPrefixes) {
    if (entry.prefix == prefix) {
      return make(std::string(entry.ns) + std::string(text.substr(colon + 1)));
    }
  }
  if (text.substr(colon).starts_with("://") || prefix == "urn") return make(std::string(text));
  throw Error("unknown_prefix", "unknown prefix '" + std::string(prefix) + "' in " + std::string(text));
}

std::string compact(const Iri& iri) {
  const std::string& s = iri.str();
  for (const auto& entry : kPrefixes) {
    if (s.size() > entry.ns.size() && s.starts_with(entry.ns)) {
      return std::string(entry.prefix) + ":" + s.substr(entry.ns.size());
    }
  }
  return s;
}

}  // namespace curie

namespace vocab {

Iri rdf(std::string_view local) { return Iri(std::string(ns::kRdf) + std::string(local)); }
Iri rdfs(std::string_view local) { return Iri(std::string(ns::kRdfs) + std::string(local)); }
Iri store(std::string_view local) { return Iri(std::string(ns::kStore) + std::string(local)); }

#define SEMSTORE_VOCAB_TERM(fn, ns_fn, local) \
  const Iri& fn() {                           \
    static const Iri value = ns_fn(local);    \
    return value;                             \
  }

SEMSTORE_VOCAB_TERM(type, rdf, "type")
SEMSTORE_VOCAB_TERM(property, rdf, "Property")
SEMSTORE_VOCAB_TERM(rdfs_class, rdfs, "Class")
SEMSTORE_VOCAB_TERM(sub_class_of, rdfs, "subClassOf")
SEMSTORE_VOCAB_TERM(label, rdfs, "label")
SEMSTORE_VOCAB_TERM(comment, rdfs, "comment")
SEMSTORE_VOCAB_TERM(domain, rdfs, "domain")
SEMSTORE_VOCAB_TERM(range, rdfs, "range")
SEMSTORE_VOCAB_TERM(synonym, store, "synonym")
SEMSTORE_VOCAB_TERM(description, store, "description")

#undef SEMSTORE_VOCAB_TERM

}  // namespace vocab
}  // namespace semstore
