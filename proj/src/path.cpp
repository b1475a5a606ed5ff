#include "semstore/path.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "semstore/error.hpp"

namespace semstore::path {

struct PathExpr::Node {
  Kind kind;
  std::optional<Iri> predicate;
  std::optional<PathExpr> left;
  std::optional<PathExpr> right;
};

PathExpr PathExpr::base(Iri predicate) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Base, std::move(predicate), {}, {}}));
}
PathExpr PathExpr::inverse(PathExpr inner) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Inverse, {}, std::move(inner), {}}));
}
PathExpr PathExpr::seq(PathExpr l, PathExpr r) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Seq, {}, std::move(l), std::move(r)}));
}
PathExpr PathExpr::alt(PathExpr l, PathExpr r) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Alt, {}, std::move(l), std::move(r)}));
}
PathExpr PathExpr::star(PathExpr inner) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Star, {}, std::move(inner), {}}));
}
PathExpr PathExpr::plus(PathExpr inner) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Plus, {}, std::move(inner), {}}));
}
PathExpr PathExpr::opt(PathExpr inner) {
  return PathExpr(std::make_shared<const Node>(Node{Kind::Opt, {}, std::move(inner), {}}));
}

PathExpr::Kind PathExpr::kind() const noexcept { return node_->kind; }

const Iri& PathExpr::predicate() const {
  if (node_->kind != Kind::Base) throw std::logic_error("predicate() on non-base path");
  return *node_->predicate;
}
const PathExpr& PathExpr::operand() const {
  if (node_->right || !node_->left) throw std::logic_error("operand() on non-unary path");
  return *node_->left;
}
const PathExpr& PathExpr::left() const {
  if (!node_->right) throw std::logic_error("left() on non-binary path");
  return *node_->left;
}
const PathExpr& PathExpr::right() const {
  if (!node_->right) throw std::logic_error("right() on non-binary path");
  return *node_->right;
}

std::size_t PathExpr::node_count() const {
  std::size_t n = 1;
  if (node_->left) n += node_->left->node_count();
  if (node_->right) n += node_->right->node_count();
  return n;
}

std::size_t PathExpr::depth() const {
  std::size_t d = 0;
  if (node_->left) d = std::max(d, node_->left->depth());
  if (node_->right) d = std::max(d, node_->right->depth());
  return d + 1;
}

std::string PathExpr::to_string() const {
  switch (node_->kind) {
    case Kind::Base:
      return "<" + node_->predicate->str() + ">";
    case Kind::Inverse:
      return "^(" + operand().to_string() + ")";
    case Kind::Seq:
      return "(" + left().to_string() + "/" + right().to_string() + ")";
    case Kind::Alt:
      return "(" + left().to_string() + "|" + right().to_string() + ")";
    case Kind::Star:
      return "(" + operand().to_string() + ")*";
    case Kind::Plus:
      return "(" + operand().to_string() + ")+";
    case Kind::Opt:
      return "(" + operand().to_string() + ")?";
  }
  return {};
}

bool operator==(const PathExpr& a, const PathExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.predicate == y.predicate && x.left == y.left && x.right == y.right;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PathParser {
 public:
  explicit PathParser(std::string_view text) : text_(text) {}

  PathExpr parse() {
    skip_space();
    if (at_end()) fail("empty path expression");
    PathExpr e = alternation();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  static bool is_operator(char c) {
    return c == '|' || c == '/' || c == '*' || c == '+' || c == '?' || c == '^' || c == '(' ||
           c == ')' || c == '<' || c == '>';
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax_error", what, ParseError::Unit::Offset, pos_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PathExpr alternation() {
    PathExpr e = sequence();
    while (accept('|')) e = PathExpr::alt(std::move(e), sequence());
    return e;
  }

  PathExpr sequence() {
    PathExpr e = factor();
    while (accept('/')) e = PathExpr::seq(std::move(e), factor());
    return e;
  }

  PathExpr factor() {
    PathExpr e = atom();
    for (;;) {
      if (accept('*')) e = PathExpr::star(std::move(e));
      else if (accept('+')) e = PathExpr::plus(std::move(e));
      else if (accept('?')) e = PathExpr::opt(std::move(e));
      else return e;
    }
  }

  PathExpr atom() {
    skip_space();
    if (at_end()) fail("expected a predicate name");
    if (accept('^')) return PathExpr::inverse(atom());
    if (accept('(')) {
      PathExpr e = alternation();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    return name();
  }

  PathExpr name() {
    const std::size_t begin = pos_;
    if (text_[pos_] == '<') {
      const auto close = text_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated '<'");
      pos_ = close + 1;
    } else {
      while (!at_end() && !is_operator(text_[pos_]) && text_[pos_] != ' ' && text_[pos_] != '\t' &&
             text_[pos_] != '\n') {
        ++pos_;
      }
    }
    if (pos_ == begin) fail(std::string("unexpected '") + text_[pos_] + "'");
    try {
      return PathExpr::base(curie::expand(text_.substr(begin, pos_ - begin), ns::kStore));
    } catch (const Error& e) {
      pos_ = begin;
      fail(e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Thompson construction

struct Fragment {
  std::size_t start;
  std::size_t end;
};

class Builder {
 public:
  Fragment build(const PathExpr& e, bool inverted) {
    using Kind = PathExpr::Kind;
    switch (e.kind()) {
      case Kind::Base: {
        Fragment f{fresh(), fresh()};
        const auto dir = inverted ? Direction::Inverse : Direction::Forward;
        transitions_.push_back({f.start, Label{e.predicate(), dir}, f.end});
        return f;
      }
      case Kind::Inverse:
        return build(e.operand(), !inverted);
      case Kind::Seq: {
        // Reversal swaps the order of the factors.
        const PathExpr& first = inverted ? e.right() : e.left();
        const PathExpr& second = inverted ? e.left() : e.right();
        Fragment f{fresh(), fresh()};
        Fragment a = build(first, inverted);
        Fragment b = build(second, inverted);
        epsilon(f.start, a.start);
        epsilon(a.end, b.start);
        epsilon(b.end, f.end);
        return f;
      }
      case Kind::Alt: {
        Fragment f{fresh(), fresh()};
        Fragment a = build(e.left(), inverted);
        Fragment b = build(e.right(), inverted);
        epsilon(f.start, a.start);
        epsilon(f.start, b.start);
        epsilon(a.end, f.end);
        epsilon(b.end, f.end);
        return f;
      }
      case Kind::Star:
      case Kind::Plus:
      case Kind::Opt: {
        Fragment f{fresh(), fresh()};
        Fragment inner = build(e.operand(), inverted);
        epsilon(f.start, inner.start);
        epsilon(inner.end, f.end);
        if (e.kind() != Kind::Plus) epsilon(f.start, f.end);
        if (e.kind() != Kind::Opt) epsilon(inner.end, inner.start);
        return f;
      }
    }
    throw std::logic_error("unhandled path kind");
  }

  std::size_t states() const { return next_; }
  std::vector<Transition> take_transitions() { return std::move(transitions_); }

 private:
  std::size_t fresh() { return next_++; }
  void epsilon(std::size_t from, std::size_t to) { transitions_.push_back({from, std::nullopt, to}); }

  std::size_t next_ = 0;
  std::vector<Transition> transitions_;
};

}  // namespace

PathExpr parse_path(std::string_view text) { return PathParser(text).parse(); }

PathAutomaton::PathAutomaton(std::size_t state_count, std::size_t start, std::set<std::size_t> accept,
                             std::vector<Transition> transitions)
    : state_count_(state_count),
      start_(start),
      accept_(std::move(accept)),
      transitions_(std::move(transitions)),
      outgoing_(state_count) {
  if (start_ >= state_count_) throw std::invalid_argument("start state out of range");
  for (auto s : accept_) {
    if (s >= state_count_) throw std::invalid_argument("accept state out of range");
  }
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.from >= state_count_ || t.to >= state_count_) {
      throw std::invalid_argument("transition state out of range");
    }
    outgoing_[t.from].push_back(i);
  }
}

std::set<std::size_t> PathAutomaton::epsilon_closure(std::set<std::size_t> states) const {
  std::vector<std::size_t> stack(states.begin(), states.end());
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (auto i : outgoing_[s]) {
      const auto& t = transitions_[i];
      if (!t.label && states.insert(t.to).second) stack.push_back(t.to);
    }
  }
  return states;
}

bool PathAutomaton::accepts(std::span<const Label> word) const {
  auto current = epsilon_closure({start_});
  for (const auto& letter : word) {
    std::set<std::size_t> next;
    for (auto s : current) {
      for (auto i : outgoing_[s]) {
        const auto& t = transitions_[i];
        if (t.label && *t.label == letter) next.insert(t.to);
      }
    }
    if (next.empty()) return false;
    current = epsilon_closure(std::move(next));
  }
  return std::any_of(current.begin(), current.end(), [this](auto s) { return accept_.contains(s); });
}

PathAutomaton compile_path(const PathExpr& e) {
  Builder b;
  Fragment f = b.build(e, false);
  const auto n = b.states();
  return PathAutomaton(n, f.start, {f.end}, b.take_transitions());
}

std::set<Iri> eval_path(const Graph& g, const PathAutomaton& a, const Iri& start, EvalStats* stats) {
  using Pair = std::pair<Iri, std::size_t>;
  std::set<Pair> seen;
  std::deque<Pair> queue;
  std::set<Iri> result;

  auto visit = [&](const Iri& node, std::size_t state) {
    if (seen.emplace(node, state).second) queue.emplace_back(node, state);
  };
  visit(start, a.start());

  while (!queue.empty()) {
    auto [node, state] = std::move(queue.front());
    queue.pop_front();
    if (a.accept().contains(state)) result.insert(node);
    for (auto i : a.outgoing(state)) {
      const auto& t = a.transitions()[i];
      if (!t.label) {
        visit(node, t.to);
      } else if (t.label->direction == Direction::Forward) {
        for (const auto& next : g.objects(node, t.label->predicate)) visit(next, t.to);
      } else {
        for (const auto& prev : g.subjects(t.label->predicate, Term(node))) visit(prev, t.to);
      }
    }
  }
  if (stats) stats->visited_pairs = seen.size();
  return result;
}

bool holds_path(const Graph& g, const PathExpr& e, const Iri& a, const Iri& b) {
  return eval_path(g, compile_path(e), a).contains(b);
}

}  // namespace semstore::path
