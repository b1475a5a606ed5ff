#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semstore/graph.hpp"

namespace semstore::path {

// Derived-relation expression over graph predicates. Immutable; copies share
// structure.
class PathExpr {
 public:
  enum class Kind { Base, Inverse, Seq, Alt, Star, Plus, Opt };

  static PathExpr base(Iri predicate);
  static PathExpr inverse(PathExpr inner);
  static PathExpr seq(PathExpr left, PathExpr right);
  static PathExpr alt(PathExpr left, PathExpr right);
  static PathExpr star(PathExpr inner);
  static PathExpr plus(PathExpr inner);
  static PathExpr opt(PathExpr inner);

  Kind kind() const noexcept;
  const Iri& predicate() const;       // Base
  const PathExpr& operand() const;    // Inverse, Star, Plus, Opt
  const PathExpr& left() const;       // Seq, Alt
  const PathExpr& right() const;      // Seq, Alt

  // Operators plus atoms.
  std::size_t node_count() const;
  std::size_t depth() const;
  // Fully parenthesized text that parse_path accepts back.
  std::string to_string() const;

  friend bool operator==(const PathExpr& a, const PathExpr& b);

 private:
  struct Node;
  explicit PathExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Throws ParseError (byte offset) on malformed or empty text. Bare names
// resolve against the store: namespace.
PathExpr parse_path(std::string_view text);

enum class Direction { Forward, Inverse };

struct Label {
  Iri predicate;
  Direction direction = Direction::Forward;

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

struct Transition {
  std::size_t from = 0;
  std::optional<Label> label;  // nullopt: epsilon
  std::size_t to = 0;
};

class PathAutomaton {
 public:
  PathAutomaton(std::size_t state_count, std::size_t start, std::set<std::size_t> accept,
                std::vector<Transition> transitions);

  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t start() const noexcept { return start_; }
  const std::set<std::size_t>& accept() const noexcept { return accept_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  // Indices into transitions() leaving `state`.
  const std::vector<std::size_t>& outgoing(std::size_t state) const { return outgoing_.at(state); }

  std::set<std::size_t> epsilon_closure(std::set<std::size_t> states) const;
  bool accepts(std::span<const Label> word) const;

 private:
  std::size_t state_count_;
  std::size_t start_;
  std::set<std::size_t> accept_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

// Thompson construction: at most two states per expression node.
PathAutomaton compile_path(const PathExpr& e);

struct EvalStats {
  std::size_t visited_pairs = 0;  // distinct (node, state) pairs expanded
};

// Nodes reachable from `start` along a path whose label word is accepted.
// Literal objects are never reached.
std::set<Iri> eval_path(const Graph& g, const PathAutomaton& a, const Iri& start,
                        EvalStats* stats = nullptr);

bool holds_path(const Graph& g, const PathExpr& e, const Iri& a, const Iri& b);

}  // namespace semstore::path
