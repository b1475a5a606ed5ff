#include "semstore/agents.hpp"

#include <algorithm>
#include <cctype>

#include "semstore/error.hpp"
#include "semstore/io.hpp"
#include "semstore/schema.hpp"

namespace semstore::agents {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::string normalize_label(std::string_view text) {
  std::string out;
  for (const auto& t : tokenize(text)) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string_view to_string(MatchedVia m) {
  switch (m) {
    case MatchedVia::ExactLabel: return "ExactLabel";
    case MatchedVia::TokenLabel: return "TokenLabel";
    case MatchedVia::Synonym: return "Synonym";
    case MatchedVia::TaxonomyExpansion: return "TaxonomyExpansion";
  }
  return "?";
}

std::string format_score(const Score& s) {
  if (s.denominator() == 1) return std::to_string(s.numerator());
  return std::to_string(s.numerator()) + "/" + std::to_string(s.denominator());
}

// ---------------------------------------------------------------------------
// Label index

const std::set<LabelIndex::Posting>& LabelIndex::lookup(const std::string& token) const {
  static const std::set<Posting> kNone;
  auto it = postings_.find(token);
  return it == postings_.end() ? kNone : it->second;
}

const std::set<Iri>& LabelIndex::exact_label(const std::string& normalized) const {
  static const std::set<Iri> kNone;
  auto it = exact_labels_.find(normalized);
  return it == exact_labels_.end() ? kNone : it->second;
}

LabelIndex index_labels(const Graph& g) {
  LabelIndex index;
  index.version_ = g.version();
  const std::pair<const Iri*, Field> sources[] = {
      {&vocab::label(), Field::Label}, {&vocab::synonym(), Field::Synonym}, {&vocab::description(), Field::Description}};
  for (const auto& [predicate, field] : sources) {
    for (const auto& t : g.match({std::nullopt, *predicate, std::nullopt})) {
      if (!t.object.is_literal()) continue;
      const std::string& text = t.object.literal().lexical;
      for (auto& token : tokenize(text)) index.postings_[std::move(token)].emplace(t.subject, field);
      if (field == Field::Label) {
        auto normalized = normalize_label(text);
        if (!normalized.empty()) index.exact_labels_[std::move(normalized)].insert(t.subject);
      }
    }
  }
  return index;
}

// ---------------------------------------------------------------------------
// Search

namespace {

std::vector<SearchResult> run_search(const LabelIndex& index, const Graph& g, std::string_view query,
                                     std::size_t limit, const ScoringWeights& w, const DistanceFn& distances) {
  const auto tokens = tokenize(query);
  if (tokens.empty()) throw Error("empty_query", "query has no searchable terms");
  const std::set<std::string> unique(tokens.begin(), tokens.end());

  std::map<Iri, Score> direct;
  std::map<Iri, MatchedVia> via;
  auto credit = [&](const Iri& iri, std::int64_t weight, MatchedVia how) {
    direct[iri] += weight;
    auto [it, fresh] = via.emplace(iri, how);
    if (!fresh) it->second = std::min(it->second, how);
  };

  for (const auto& iri : index.exact_label(normalize_label(query))) credit(iri, w.exact_label, MatchedVia::ExactLabel);
  for (const auto& token : unique) {
    for (const auto& [iri, field] : index.lookup(token)) {
      if (field == Field::Label) credit(iri, w.token_label, MatchedVia::TokenLabel);
      else if (field == Field::Synonym) credit(iri, w.synonym, MatchedVia::Synonym);
    }
  }

  std::map<Iri, Score> total = direct;
  for (const auto& [hit, score] : direct) {
    if (score.numerator() == 0 || !schema::is_declared_class(g, hit)) continue;
    const auto& dist = distances(hit);
    std::map<Iri, std::size_t> instance_dist;
    for (const auto& [cls, k] : dist) {
      if (k > 0) {
        total[cls] += score / Score(static_cast<std::int64_t>(1 + k));
        via.emplace(cls, MatchedVia::TaxonomyExpansion);
      }
      // An instance sits one level below its class.
      for (auto& x : g.subjects(vocab::type(), cls)) {
        auto [it, fresh] = instance_dist.emplace(std::move(x), k + 1);
        if (!fresh) it->second = std::min(it->second, k + 1);
      }
    }
    for (const auto& [x, k] : instance_dist) {
      total[x] += score / Score(static_cast<std::int64_t>(1 + k));
      via.emplace(x, MatchedVia::TaxonomyExpansion);
    }
  }

  std::vector<SearchResult> results;
  for (const auto& [iri, score] : total) {
    if (score.numerator() > 0) results.push_back({iri, score, via.at(iri), 0});
  }
  std::sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.iri < b.iri;
  });
  if (results.size() > limit) results.erase(results.begin() + static_cast<std::ptrdiff_t>(limit), results.end());
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = i + 1;
  return results;
}

}  // namespace

std::vector<SearchResult> search(const LabelIndex& index, const Graph& g, std::string_view query,
                                 std::size_t limit, const ScoringWeights& weights) {
  std::map<Iri, std::map<Iri, std::size_t>> memo;
  DistanceFn distances = [&](const Iri& cls) -> const std::map<Iri, std::size_t>& {
    auto it = memo.find(cls);
    if (it == memo.end()) it = memo.emplace(cls, schema::subclass_distances(g, cls)).first;
    return it->second;
  };
  return run_search(index, g, query, limit, weights, distances);
}

Catalog::Catalog(std::shared_ptr<const Graph> graph) : graph_(std::move(graph)), index_(index_labels(*graph_)) {
  for (const auto& cls : schema::declared_classes(*graph_)) {
    distances_.emplace(cls, schema::subclass_distances(*graph_, cls));
  }
}

const std::map<Iri, std::size_t>& Catalog::subclass_distances(const Iri& cls) const {
  static const std::map<Iri, std::size_t> kNone;
  auto it = distances_.find(cls);
  return it == distances_.end() ? kNone : it->second;
}

std::vector<SearchResult> search(const Catalog& catalog, std::string_view query, std::size_t limit,
                                 const ScoringWeights& weights) {
  DistanceFn distances = [&catalog](const Iri& cls) -> const std::map<Iri, std::size_t>& {
    return catalog.subclass_distances(cls);
  };
  return run_search(catalog.index(), catalog.graph(), query, limit, weights, distances);
}

// ---------------------------------------------------------------------------
// Ontology agent

Description describe(const Graph& g, const Iri& term) {
  if (!g.mentions(term)) throw NotFound("unknown term " + curie::compact(term));
  Description d{term, std::nullopt, {}, {}, {}, {}, {}, {}, {}};
  for (const auto& t : g.match({term, std::nullopt, std::nullopt})) {
    if (t.predicate == vocab::label() && t.object.is_literal() && !d.label) {
      d.label = t.object.literal().lexical;
    }
    if (t.predicate == vocab::type()) {
      if (const Iri* o = t.object.as_iri()) d.types.push_back(*o);
    } else if (t.predicate == vocab::sub_class_of()) {
      continue;
    } else if (const Iri* o = t.object.as_iri()) {
      d.relations.emplace_back(t.predicate, *o);
    } else {
      d.attributes.emplace_back(t.predicate, t.object.literal());
    }
  }
  auto without_self = [&term](const std::set<Iri>& s) {
    std::vector<Iri> out;
    std::copy_if(s.begin(), s.end(), std::back_inserter(out), [&term](const Iri& i) { return i != term; });
    return out;
  };
  d.superclasses = without_self(schema::superclass_closure(g, term));
  d.descendants = without_self(schema::subclass_closure(g, term));
  auto children = g.subjects(vocab::sub_class_of(), term);
  std::set<Iri> direct(children.begin(), children.end());
  d.subclasses = without_self(direct);
  const auto inst = schema::instances_of(g, term);
  d.instances.assign(inst.begin(), inst.end());
  return d;
}

std::string answer_as_rdf(const Graph& g, std::string_view query, std::size_t limit,
                          const ScoringWeights& weights) {
  const auto results = search(index_labels(g), g, query, limit, weights);
  Graph answer;
  for (const auto& r : results) answer.insert_all(g.match({r.iri, std::nullopt, std::nullopt}));
  return io::emit_rdfxml(answer);
}

std::vector<Recommendation> recommend(const Graph& g, const snap::Situation& s,
                                      const std::vector<snap::NeedRule>& rules, std::size_t limit) {
  std::vector<Recommendation> out;
  for (const auto& need : snap::derive_needs(s, rules)) {
    const auto dist = schema::subclass_distances(g, need.target);
    for (const auto& product : schema::instances_of(g, need.target)) {
      std::size_t deepest = 0;
      for (const auto& type : g.objects(product, vocab::type())) {
        if (auto it = dist.find(type); it != dist.end()) deepest = std::max(deepest, it->second);
      }
      out.push_back({product, need,
                     Score(need.priority + 1) / Score(static_cast<std::int64_t>(1 + deepest))});
    }
  }
  std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.product != b.product) return a.product < b.product;
    return a.need.source_rule < b.need.source_rule;
  });
  if (out.size() > limit) out.erase(out.begin() + static_cast<std::ptrdiff_t>(limit), out.end());
  return out;
}

}  // namespace semstore::agents
