#include "semstore/snap.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "semstore/error.hpp"

namespace semstore::snap {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::LifeStage: return "LifeStage";
    case Category::Demographic: return "Demographic";
    case Category::LifeStyle: return "LifeStyle";
    case Category::Obligation: return "Obligation";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view token) {
  for (auto c : {Category::LifeStage, Category::Demographic, Category::LifeStyle, Category::Obligation}) {
    if (to_string(c) == token) return c;
  }
  return std::nullopt;
}

std::string_view to_string(EventKind k) { return k == EventKind::Action ? "action" : "behavior"; }

std::optional<EventKind> parse_event_kind(std::string_view token) {
  if (token == "action") return EventKind::Action;
  if (token == "behavior") return EventKind::Behavior;
  return std::nullopt;
}

std::optional<std::string> holds(const Situation& s, Category category, std::string_view key) {
  auto it = s.fluents().find(FluentKey{category, std::string(key)});
  if (it == s.fluents().end()) return std::nullopt;
  return it->second;
}

Situation assert_fluent(const Situation& s, const Fluent& f) {
  Situation next = s;
  next.timestamp_ = s.timestamp_ + 1;
  next.fluents_[FluentKey{f.category, f.key}] = f.value;
  return next;
}

// ---------------------------------------------------------------------------
// Rule files

namespace {

struct Token {
  enum class Type { Word, String, Symbol, End } type;
  std::string text;
};

class RuleLexer {
 public:
  RuleLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  Token next() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    if (pos_ >= line_.size() || line_[pos_] == '#') return {Token::Type::End, {}};
    const char c = line_[pos_];
    if (c == '"') return quoted();
    if (c == '!' && pos_ + 1 < line_.size() && line_[pos_ + 1] == '=') {
      pos_ += 2;
      return {Token::Type::Symbol, "!="};
    }
    if (c == '=' || c == ':' || c == '.') {
      ++pos_;
      return {Token::Type::Symbol, std::string(1, c)};
    }
    if (c == '<') {
      const auto close = line_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated '<'");
      std::string word(line_.substr(pos_, close + 1 - pos_));
      pos_ = close + 1;
      return {Token::Type::Word, word};
    }
    const std::size_t begin = pos_;
    while (pos_ < line_.size()) {
      const char d = line_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '"' || d == '=' || d == '!' || d == '#') break;
      // ':' and '.' split words, except inside a CURIE such as store:CarCare.
      if ((d == ':' || d == '.') &&
          (pos_ + 1 >= line_.size() || std::isspace(static_cast<unsigned char>(line_[pos_ + 1])) ||
           d == '.')) {
        break;
      }
      ++pos_;
    }
    if (pos_ == begin) fail(std::string("unexpected character '") + c + "'");
    return {Token::Type::Word, std::string(line_.substr(begin, pos_ - begin))};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax_error", what, ParseError::Unit::Line, line_no_);
  }

 private:
  Token quoted() {
    std::string out;
    ++pos_;
    while (pos_ < line_.size()) {
      const char c = line_[pos_++];
      if (c == '"') return {Token::Type::String, out};
      if (c == '\\' && pos_ < line_.size()) {
        out.push_back(line_[pos_++]);
      } else {
        out.push_back(c);
      }
    }
    fail("unterminated string");
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

class RuleLineParser {
 public:
  RuleLineParser(std::string_view line, std::size_t line_no) : lex_(line, line_no), line_no_(line_no) {
    advance();
  }

  bool blank() const { return tok_.type == Token::Type::End; }

  NeedRule parse() {
    expect_word("rule");
    std::string name = take_word("rule name");
    expect_symbol(":");
    expect_word("when");
    std::vector<Condition> conditions{condition()};
    while (is_word("and")) {
      advance();
      conditions.push_back(condition());
    }
    expect_word("then");
    expect_word("need");
    const std::string concept_name = take_word("need concept");
    std::optional<Iri> target;
    try {
      target = curie::expand(concept_name);
    } catch (const Error& e) {
      lex_.fail(e.what());
    }
    int priority = 0;
    if (is_word("priority")) {
      advance();
      const std::string n = take_word("priority value");
      if (n.empty() || n.size() > 9 ||
          !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        lex_.fail("priority must be a non-negative integer, got '" + n + "'");
      }
      priority = std::stoi(n);
    }
    if (tok_.type != Token::Type::End) lex_.fail("unexpected '" + tok_.text + "' after rule");
    return NeedRule{std::move(name), std::move(conditions), std::move(*target), priority};
  }

 private:
  Condition condition() {
    Condition c;
    const std::string cat = take_word("fluent category");
    // Shape first, so "when then ..." is a syntax error rather than a category.
    expect_symbol(".");
    auto parsed = parse_category(cat);
    if (!parsed) {
      throw ParseError("unknown_category", "unknown category '" + cat + "'", ParseError::Unit::Line, line_no_);
    }
    c.category = *parsed;
    c.key = take_word("fluent key");
    if (is_symbol("=")) {
      c.op = Condition::Op::Equal;
    } else if (is_symbol("!=")) {
      c.op = Condition::Op::NotEqual;
    } else {
      lex_.fail("expected '=' or '!='");
    }
    advance();
    if (tok_.type != Token::Type::String) lex_.fail("expected a quoted value");
    c.value = tok_.text;
    advance();
    return c;
  }

  void advance() { tok_ = lex_.next(); }
  bool is_word(std::string_view w) const { return tok_.type == Token::Type::Word && tok_.text == w; }
  bool is_symbol(std::string_view s) const { return tok_.type == Token::Type::Symbol && tok_.text == s; }

  void expect_word(std::string_view w) {
    if (!is_word(w)) lex_.fail("expected '" + std::string(w) + "'");
    advance();
  }
  void expect_symbol(std::string_view s) {
    if (!is_symbol(s)) lex_.fail("expected '" + std::string(s) + "'");
    advance();
  }
  std::string take_word(std::string_view what) {
    if (tok_.type != Token::Type::Word) lex_.fail("expected " + std::string(what));
    std::string w = tok_.text;
    advance();
    return w;
  }

  RuleLexer lex_;
  std::size_t line_no_;
  Token tok_{Token::Type::End, {}};
};

}  // namespace

std::vector<NeedRule> parse_rules(std::string_view text) {
  std::vector<NeedRule> rules;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = eol + 1;

    RuleLineParser parser(line, line_no);
    if (parser.blank()) continue;
    NeedRule rule = parser.parse();
    if (!names.insert(rule.name).second) {
      throw ParseError("duplicate_rule", "duplicate rule name '" + rule.name + "'", ParseError::Unit::Line,
                       line_no);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<Need> derive_needs(const Situation& s, const std::vector<NeedRule>& rules) {
  std::vector<Need> needs;
  for (const auto& rule : rules) {
    const bool fires = std::all_of(rule.conditions.begin(), rule.conditions.end(), [&s](const Condition& c) {
      auto v = holds(s, c.category, c.key);
      if (!v) return false;
      return c.op == Condition::Op::Equal ? *v == c.value : *v != c.value;
    });
    if (fires) needs.push_back({rule.need_target, rule.priority, rule.name});
  }
  std::sort(needs.begin(), needs.end(), [](const Need& a, const Need& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.source_rule < b.source_rule;
  });
  return needs;
}

std::vector<Event> record_event(std::vector<Event> log, Event e) {
  if (!log.empty() && e.timestamp < log.back().timestamp) {
    throw Error("non_monotonic_timestamp", "event timestamp " + std::to_string(e.timestamp) +
                                               " precedes last logged timestamp " +
                                               std::to_string(log.back().timestamp));
  }
  log.push_back(std::move(e));
  return log;
}

}  // namespace semstore::snap
