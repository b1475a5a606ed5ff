#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "semstore/error.hpp"
#include "semstore/io.hpp"
#include "semstore/snap.hpp"

using namespace semstore;
using namespace semstore::snap;
using namespace testsupport;

namespace {
std::string code_of(const std::string& text, std::size_t* line = nullptr) {
  try {
    parse_rules(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.code();
  }
  return "";
}
}  // namespace

TEST_CASE("holds and assert_fluent") {
  Situation s0("c1");
  CHECK_FALSE(holds(s0, Category::Demographic, "marital_status"));
  auto s1 = assert_fluent(s0, {Category::Demographic, "marital_status", "married"});
  CHECK(holds(s1, Category::Demographic, "marital_status") == "married");
  CHECK_FALSE(holds(s1, Category::Demographic, "income"));
  CHECK_FALSE(holds(s1, Category::LifeStage, "marital_status"));
  CHECK(s1.size() == 1);
  CHECK(s0.timestamp() == 0);
  CHECK(s1.timestamp() == 1);

  auto s2 = assert_fluent(s1, {Category::Demographic, "marital_status", "single"});
  CHECK(s2.size() == 1);
  CHECK(holds(s2, Category::Demographic, "marital_status") == "single");
  CHECK(holds(s1, Category::Demographic, "marital_status") == "married");
  CHECK(s0.size() == 0);
}

TEST_CASE("situation immutability under random derivations") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_situation(rng);
    const Situation copy = s;
    auto next = extend_situation(rng, s);
    next = assert_fluent(next, {Category::Obligation, "car_loan", "ok"});
    CHECK(s == copy);
    CHECK(next.timestamp() > s.timestamp());
  }
}

TEST_CASE("categories and event kinds") {
  for (auto c : {Category::LifeStage, Category::Demographic, Category::LifeStyle, Category::Obligation})
    CHECK(parse_category(to_string(c)) == c);
  CHECK_FALSE(parse_category("Mood"));
  CHECK(parse_event_kind("action") == EventKind::Action);
  CHECK(parse_event_kind("behavior") == EventKind::Behavior);
  CHECK_FALSE(parse_event_kind("click"));
}

TEST_CASE("rule parsing") {
  auto rules = parse_rules("rule r1: when LifeStage.stage = \"new_driver\" then need store:CarCare\n");
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].name == "r1");
  REQUIRE(rules[0].conditions.size() == 1);
  CHECK(rules[0].conditions[0].category == Category::LifeStage);
  CHECK(rules[0].conditions[0].key == "stage");
  CHECK(rules[0].conditions[0].op == Condition::Op::Equal);
  CHECK(rules[0].conditions[0].value == "new_driver");
  CHECK(rules[0].need_target == vocab::store("CarCare"));
  CHECK(rules[0].priority == 0);

  CHECK(parse_rules("").empty());
  CHECK(parse_rules("# only a comment\n\n").empty());

  auto two = parse_rules(
      "rule b: when Demographic.city != \"x # y\" and LifeStyle.hobby = \"golf\" then need store:Exterior priority 3 # trailing\n"
      "rule a: when Obligation.loan = \"none\" then need <http://x.org/C>\n");
  REQUIRE(two.size() == 2);
  CHECK(two[0].name == "b");
  CHECK(two[0].conditions.size() == 2);
  CHECK(two[0].conditions[0].op == Condition::Op::NotEqual);
  CHECK(two[0].conditions[0].value == "x # y");
  CHECK(two[0].priority == 3);
  CHECK(two[1].need_target == Iri("http://x.org/C"));

  std::size_t line = 0;
  CHECK(code_of("rule r1: when LifeStage.stage = \"a\" then need store:A\n"
                "rule r1: when LifeStage.stage = \"b\" then need store:B\n",
                &line) == "duplicate_rule");
  CHECK(line == 2);
  CHECK(code_of("\nrule r: when Mood.x = \"a\" then need store:A\n", &line) == "unknown_category");
  CHECK(line == 2);
  CHECK(code_of("rule r: when LifeStage.stage = \"a\" then need\n") == "syntax_error");
  CHECK(code_of("rule r when LifeStage.stage = \"a\" then need store:A\n") == "syntax_error");
  CHECK(code_of("rule r: when then need store:A\n") == "syntax_error");
  CHECK(code_of("rule r: when LifeStage.stage = \"a then need store:A\n") == "syntax_error");
}

TEST_CASE("seed rules parse") {
  auto rules = parse_rules(io::read_file(std::string(SEMSTORE_SEED_DIR) + "/rules.txt"));
  CHECK(rules.size() >= 1);
  CHECK(rules[0].name == "new_driver_care");
}

TEST_CASE("derive_needs") {
  auto rules = parse_rules(
      "rule r1: when LifeStage.stage = \"new_driver\" then need store:CarCare\n"
      "rule r2: when Demographic.climate != \"dry\" then need store:Exterior priority 2\n");
  Situation s;
  CHECK(derive_needs(s, rules).empty());  // absent fluent fails both operators
  CHECK(derive_needs(s, {}).empty());
  s = assert_fluent(s, {Category::LifeStage, "stage", "new_driver"});
  auto needs = derive_needs(s, rules);
  REQUIRE(needs.size() == 1);
  CHECK(needs[0] == Need{vocab::store("CarCare"), 0, "r1"});
  s = assert_fluent(s, {Category::Demographic, "climate", "rainy"});
  needs = derive_needs(s, rules);
  REQUIRE(needs.size() == 2);
  CHECK(needs[0].source_rule == "r2");
}

TEST_CASE("derive_needs equals condition scan; '=' rules are monotone") {
  Rng rng(43);
  const std::vector<Iri> targets{ex("A"), ex("B"), ex("C")};
  for (int set = 0; set < 50; ++set) {
    const bool eq_only = set % 2 == 0;
    auto rules = random_rules(rng, uniform(rng, 0, 12), eq_only, targets);
    for (int k = 0; k < 50; ++k) {
      const auto s = random_situation(rng);
      const auto got = derive_needs(s, rules);
      CHECK(got == oracle_derive_needs(s, rules));
      CHECK(got == derive_needs(s, rules));
      if (eq_only) {
        const auto bigger = derive_needs(extend_situation(rng, s), rules);
        for (const auto& n : got) CHECK(std::find(bigger.begin(), bigger.end(), n) != bigger.end());
      }
    }
  }
}

TEST_CASE("event log") {
  std::vector<Event> log;
  log = record_event(log, {EventKind::Action, "search", 5, {{"q", "rims"}}});
  CHECK(log.size() == 1);
  log = record_event(log, {EventKind::Behavior, "view", 5, {}});
  CHECK(log.size() == 2);
  try {
    record_event(log, {EventKind::Action, "late", 4, {}});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == "non_monotonic_timestamp");
  }
  CHECK(log.size() == 2);

  Rng rng(47);
  std::vector<Event> l2;
  std::uint64_t ts = 0;
  for (int i = 0; i < 300; ++i) {
    const auto before = l2;
    std::uint64_t t = ts + static_cast<std::uint64_t>(uniform(rng, 0, 3));
    const bool regress = ts > 0 && coin(rng, 0.2);
    if (regress) t = ts - 1;
    try {
      l2 = record_event(l2, {coin(rng) ? EventKind::Action : EventKind::Behavior, "e", t, {}});
      CHECK_FALSE(regress);
      ts = t;
      CHECK(std::equal(before.begin(), before.end(), l2.begin()));
      CHECK(l2.size() == before.size() + 1);
    } catch (const Error&) {
      CHECK(regress);
      CHECK(l2 == before);
    }
  }
  for (std::size_t i = 1; i < l2.size(); ++i) CHECK(l2[i - 1].timestamp <= l2[i].timestamp);
}
