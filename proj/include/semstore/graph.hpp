#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "semstore/term.hpp"

namespace semstore {

// Unbound positions are wildcards.
struct TriplePattern {
  std::optional<Iri> subject;
  std::optional<Iri> predicate;
  std::optional<Term> object;

  static TriplePattern all() { return {}; }
  static TriplePattern exact(const Triple& t) { return {t.subject, t.predicate, t.object}; }
  bool matches(const Triple& t) const;
};

// Set of triples with subject, predicate and object indexes.
//
// Graph is a plain value: copying it yields an independent store with the
// same version. Concurrent access goes through SharedGraph.
class Graph {
 public:
  Graph() = default;

  // Returns true iff `t` was absent. The version advances only on change.
  bool insert(Triple t);
  template <typename Range>
  std::size_t insert_all(const Range& triples) {
    std::size_t n = 0;
    for (const auto& t : triples) n += insert(t) ? 1 : 0;
    return n;
  }

  std::size_t remove(const TriplePattern& pattern);

  // Sorted ascending. Probes the smallest index bucket among bound positions.
  std::vector<Triple> match(const TriplePattern& pattern) const;

  bool contains(const Triple& t) const { return triples_.contains(t); }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::uint64_t version() const noexcept { return version_; }
  const std::set<Triple>& triples() const noexcept { return triples_; }

  // Node objects of (s, p, *).
  std::vector<Iri> objects(const Iri& s, const Iri& p) const;
  // Subjects of (*, p, o).
  std::vector<Iri> subjects(const Iri& p, const Term& o) const;
  // True iff `iri` occurs in any position.
  bool mentions(const Iri& iri) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

 private:
  void unindex(const Triple& t);

  std::set<Triple> triples_;
  std::map<Iri, std::set<Triple>> by_subject_;
  std::map<Iri, std::set<Triple>> by_predicate_;
  std::map<Term, std::set<Triple>> by_object_;
  std::uint64_t version_ = 0;
};

// Reader/writer wrapper: readers take immutable snapshots, writers copy,
// mutate and publish. A mutation is never visible half-applied.
class SharedGraph {
 public:
  explicit SharedGraph(Graph g = {}) : current_(std::make_shared<const Graph>(std::move(g))) {}

  std::shared_ptr<const Graph> snapshot() const {
    std::lock_guard lock(pointer_mutex_);
    return current_;
  }

  // Applies `fn(Graph&)` to a private copy, then publishes it. Writers are
  // serialized. Returns whatever `fn` returns.
  template <typename Fn>
  auto update(Fn&& fn) {
    std::lock_guard writer(writer_mutex_);
    auto next = std::make_shared<Graph>(*snapshot());
    if constexpr (std::is_void_v<decltype(fn(*next))>) {
      fn(*next);
      publish(std::move(next));
    } else {
      auto result = fn(*next);
      publish(std::move(next));
      return result;
    }
  }

  void replace(Graph g) {
    std::lock_guard writer(writer_mutex_);
    publish(std::make_shared<Graph>(std::move(g)));
  }

 private:
  void publish(std::shared_ptr<Graph> next) {
    std::lock_guard lock(pointer_mutex_);
    current_ = std::move(next);
  }

  mutable std::mutex pointer_mutex_;
  std::mutex writer_mutex_;
  std::shared_ptr<const Graph> current_;
};

}  // namespace semstore
