#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semstore/term.hpp"

namespace semstore::snap {

enum class Category { LifeStage, Demographic, LifeStyle, Obligation };

std::string_view to_string(Category c);
// Accepts the category token exactly as written in rule files.
std::optional<Category> parse_category(std::string_view token);

struct Fluent {
  Category category;
  std::string key;
  std::string value;

  friend bool operator==(const Fluent&, const Fluent&) = default;
};

using FluentKey = std::pair<Category, std::string>;

// Time slice of the world. Never changes once built; assert_fluent derives
// a successor.
class Situation {
 public:
  explicit Situation(std::string id = {}, std::uint64_t timestamp = 0) : id_(std::move(id)), timestamp_(timestamp) {}

  const std::string& id() const noexcept { return id_; }
  std::uint64_t timestamp() const noexcept { return timestamp_; }
  const std::map<FluentKey, std::string>& fluents() const noexcept { return fluents_; }
  std::size_t size() const noexcept { return fluents_.size(); }

  friend bool operator==(const Situation&, const Situation&) = default;

 private:
  friend Situation assert_fluent(const Situation& s, const Fluent& f);

  std::string id_;
  std::uint64_t timestamp_;
  std::map<FluentKey, std::string> fluents_;
};

std::optional<std::string> holds(const Situation& s, Category category, std::string_view key);

// New situation one tick later with `f` upserted by (category, key).
Situation assert_fluent(const Situation& s, const Fluent& f);

struct Condition {
  enum class Op { Equal, NotEqual };

  Category category;
  std::string key;
  Op op = Op::Equal;
  std::string value;
};

struct NeedRule {
  std::string name;
  std::vector<Condition> conditions;  // conjunctive, non-empty
  Iri need_target;
  int priority = 0;
};

struct Need {
  Iri target;
  int priority = 0;
  std::string source_rule;

  friend bool operator==(const Need&, const Need&) = default;
};

// One rule per line:
//   rule NAME: when CAT.key = "v" [and CAT.key != "v"]* then need CONCEPT [priority INT]
// '#' outside quotes starts a comment. Throws ParseError with a line number.
std::vector<NeedRule> parse_rules(std::string_view text);

// '=' and '!=' both require the fluent to be present. Sorted by descending
// priority, then rule name.
std::vector<Need> derive_needs(const Situation& s, const std::vector<NeedRule>& rules);

enum class EventKind { Action, Behavior };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view token);

struct Event {
  EventKind kind;
  std::string name;
  std::uint64_t timestamp = 0;
  std::vector<std::pair<std::string, std::string>> payload;

  friend bool operator==(const Event&, const Event&) = default;
};

// Append-only. Throws semstore::Error("non_monotonic_timestamp") when `e`
// is older than the last entry.
std::vector<Event> record_event(std::vector<Event> log, Event e);

}  // namespace semstore::snap
