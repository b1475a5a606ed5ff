#include "semstore/graph.hpp"

#include <algorithm>

namespace semstore {

bool TriplePattern::matches(const Triple& t) const {
  return (!subject || *subject == t.subject) && (!predicate || *predicate == t.predicate) &&
         (!object || *object == t.object);
}

bool Graph::insert(Triple t) {
  auto [it, inserted] = triples_.insert(std::move(t));
  if (!inserted) return false;
  const Triple& stored = *it;
  by_subject_[stored.subject].insert(stored);
  by_predicate_[stored.predicate].insert(stored);
  by_object_[stored.object].insert(stored);
  ++version_;
  return true;
}

void Graph::unindex(const Triple& t) {
  auto drop = [&t](auto& index, const auto& key) {
    auto it = index.find(key);
    if (it == index.end()) return;
    it->second.erase(t);
    if (it->second.empty()) index.erase(it);
  };
  drop(by_subject_, t.subject);
  drop(by_predicate_, t.predicate);
  drop(by_object_, t.object);
}

std::size_t Graph::remove(const TriplePattern& pattern) {
  const auto doomed = match(pattern);
  for (const auto& t : doomed) {
    unindex(t);
    triples_.erase(t);
  }
  if (!doomed.empty()) ++version_;
  return doomed.size();
}

std::vector<Triple> Graph::match(const TriplePattern& pattern) const {
  static const std::set<Triple> kNone;
  const std::set<Triple>* candidates = &triples_;
  auto narrow = [&candidates](const auto& index, const auto& key) {
    auto it = index.find(key);
    const std::set<Triple>* bucket = it == index.end() ? &kNone : &it->second;
    if (bucket->size() < candidates->size()) candidates = bucket;
  };
  if (pattern.subject) narrow(by_subject_, *pattern.subject);
  if (pattern.predicate) narrow(by_predicate_, *pattern.predicate);
  if (pattern.object) narrow(by_object_, *pattern.object);

  std::vector<Triple> out;
  std::copy_if(candidates->begin(), candidates->end(), std::back_inserter(out),
               [&pattern](const Triple& t) { return pattern.matches(t); });
  return out;
}

std::vector<Iri> Graph::objects(const Iri& s, const Iri& p) const {
  std::vector<Iri> out;
  for (const auto& t : match({s, p, std::nullopt})) {
    if (const Iri* o = t.object.as_iri()) out.push_back(*o);
  }
  return out;
}

std::vector<Iri> Graph::subjects(const Iri& p, const Term& o) const {
  std::vector<Iri> out;
  for (const auto& t : match({std::nullopt, p, o})) out.push_back(t.subject);
  return out;
}

bool Graph::mentions(const Iri& iri) const {
  return by_subject_.contains(iri) || by_predicate_.contains(iri) || by_object_.contains(Term(iri));
}

}  // namespace semstore
