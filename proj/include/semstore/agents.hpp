#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "semstore/graph.hpp"
#include "semstore/snap.hpp"

namespace semstore::agents {

using Score = boost::rational<std::int64_t>;

// Splits on non-alphanumeric ASCII, lowercases ASCII letters. Bytes >= 0x80
// are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);
// Tokens joined by single spaces.
std::string normalize_label(std::string_view text);

enum class Field { Label, Synonym, Description };

// Controlled-vocabulary postings built from rdfs:label, store:synonym and
// store:description literals.
class LabelIndex {
 public:
  using Posting = std::pair<Iri, Field>;

  std::uint64_t version() const noexcept { return version_; }
  bool empty() const noexcept { return postings_.empty(); }
  const std::map<std::string, std::set<Posting>>& postings() const noexcept { return postings_; }
  const std::set<Posting>& lookup(const std::string& token) const;
  // IRIs having an rdfs:label whose normalized form equals `normalized`.
  const std::set<Iri>& exact_label(const std::string& normalized) const;

 private:
  friend LabelIndex index_labels(const Graph& g);

  std::uint64_t version_ = 0;
  std::map<std::string, std::set<Posting>> postings_;
  std::map<std::string, std::set<Iri>> exact_labels_;
};

LabelIndex index_labels(const Graph& g);

struct ScoringWeights {
  std::int64_t exact_label = 100;
  std::int64_t token_label = 10;
  std::int64_t synonym = 5;
};

// Ordered by precedence: the strongest mechanism that touched a result.
enum class MatchedVia { ExactLabel, TokenLabel, Synonym, TaxonomyExpansion };
std::string_view to_string(MatchedVia m);

struct SearchResult {
  Iri iri;
  Score score;
  MatchedVia matched_via;
  std::size_t rank = 0;  // 1-based
};

// Shortest subclass distances below a class, as schema::subclass_distances.
using DistanceFn = std::function<const std::map<Iri, std::size_t>&(const Iri&)>;

// Direct hits score exact-label, per-token label and per-token synonym
// weights. Every class-typed hit then spreads its direct score to each
// subclass at distance k as score/(1+k), and to each instance of such a
// class as score/(2+k). Sorted by descending score, ascending IRI.
// Throws Error("empty_query") if the query has no tokens.
std::vector<SearchResult> search(const LabelIndex& index, const Graph& g, std::string_view query,
                                 std::size_t limit, const ScoringWeights& weights = {});

// Read-only view over one graph snapshot with its index and subclass
// distances precomputed. Safe to share between threads.
class Catalog {
 public:
  explicit Catalog(std::shared_ptr<const Graph> graph);

  const Graph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const Graph>& snapshot() const noexcept { return graph_; }
  std::uint64_t version() const noexcept { return graph_->version(); }
  const LabelIndex& index() const noexcept { return index_; }
  const std::map<Iri, std::size_t>& subclass_distances(const Iri& cls) const;

 private:
  std::shared_ptr<const Graph> graph_;
  LabelIndex index_;
  std::map<Iri, std::map<Iri, std::size_t>> distances_;
};

std::vector<SearchResult> search(const Catalog& catalog, std::string_view query, std::size_t limit,
                                 const ScoringWeights& weights = {});

struct Description {
  Iri iri;
  std::optional<std::string> label;
  std::vector<Iri> types;          // asserted rdf:type objects
  std::vector<Iri> superclasses;   // closure, excluding the term
  std::vector<Iri> subclasses;     // direct children
  std::vector<Iri> descendants;    // closure, excluding the term
  std::vector<Iri> instances;      // entailed
  std::vector<std::pair<Iri, Iri>> relations;         // (predicate, node)
  std::vector<std::pair<Iri, Literal>> attributes;    // (predicate, literal)
};

// Throws NotFound when the term occurs nowhere in the graph.
Description describe(const Graph& g, const Iri& term);

// RDF/XML of every triple whose subject is among the top `limit` search
// results.
std::string answer_as_rdf(const Graph& g, std::string_view query, std::size_t limit = 10,
                          const ScoringWeights& weights = {});

struct Recommendation {
  Iri product;
  snap::Need need;
  Score score;
};

// One entry per (fired rule, entailed instance of its target). Score is
// (priority+1)/(1+d) where d is the subclass distance from the target to the
// instance's most specific type. Sorted by descending score, ascending
// product, then rule name.
std::vector<Recommendation> recommend(const Graph& g, const snap::Situation& s,
                                      const std::vector<snap::NeedRule>& rules, std::size_t limit);

std::string format_score(const Score& s);

}  // namespace semstore::agents
