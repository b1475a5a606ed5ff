#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace semstore {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kStore = "http://example.org/semantic-auto-store#";
}  // namespace ns

// An absolute IRI. Stored without angle brackets; compared bytewise.
class Iri {
 public:
  // Throws std::invalid_argument on empty text, whitespace, or characters
  // that cannot appear inside `<...>`.
  explicit Iri(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

 private:
  std::string value_;
};

struct Literal {
  std::string lexical;
  std::optional<Iri> datatype;  // absent: plain string

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// Object position of a triple: either a node or a data value.
class Term {
 public:
  Term(Iri iri) : value_(std::move(iri)) {}          // NOLINT(google-explicit-constructor)
  Term(Literal lit) : value_(std::move(lit)) {}      // NOLINT(google-explicit-constructor)

  bool is_iri() const noexcept { return value_.index() == 0; }
  bool is_literal() const noexcept { return value_.index() == 1; }
  const Iri& iri() const { return std::get<Iri>(value_); }
  const Literal& literal() const { return std::get<Literal>(value_); }
  const Iri* as_iri() const noexcept { return std::get_if<Iri>(&value_); }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  std::variant<Iri, Literal> value_;
};

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Fixed prefix table: rdf:, rdfs:, store:.
namespace curie {

// Resolves `prefix:local`, `<absolute>` or an absolute IRI (`scheme://...`,
// `urn:...`). A bare name without a colon resolves against
// `default_namespace` when one is given. Throws semstore::Error with code
// "unknown_prefix" or "invalid_iri".
Iri expand(std::string_view text, std::optional<std::string_view> default_namespace = std::nullopt);

// Shortest CURIE for `iri` under the fixed table, or the full IRI.
std::string compact(const Iri& iri);

}  // namespace curie

namespace vocab {
Iri rdf(std::string_view local);
Iri rdfs(std::string_view local);
Iri store(std::string_view local);

const Iri& type();
const Iri& property();
const Iri& rdfs_class();
const Iri& sub_class_of();
const Iri& label();
const Iri& comment();
const Iri& domain();
const Iri& range();
const Iri& synonym();
const Iri& description();
}  // namespace vocab

inline Term lit(std::string lexical) { return Term(Literal{std::move(lexical), std::nullopt}); }

}  // namespace semstore
