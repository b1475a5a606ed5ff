#include "doctest.h"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "semstore/error.hpp"
#include "semstore/path.hpp"

using namespace semstore;
using namespace semstore::path;
using namespace testsupport;

namespace {
PathExpr B(const std::string& local) { return PathExpr::base(vocab::store(local)); }

std::set<Iri> eval(const Graph& g, const PathExpr& e, const Iri& a) { return eval_path(g, compile_path(e), a); }
}  // namespace

TEST_CASE("parser precedence") {
  CHECK(parse_path("rdfs:subClassOf*") == PathExpr::star(PathExpr::base(vocab::sub_class_of())));
  CHECK(parse_path("a/b|c") == PathExpr::alt(PathExpr::seq(B("a"), B("b")), B("c")));
  CHECK(parse_path("^(a|b)+") == PathExpr::plus(PathExpr::inverse(PathExpr::alt(B("a"), B("b")))));
  CHECK(parse_path("a/b/c") == PathExpr::seq(PathExpr::seq(B("a"), B("b")), B("c")));
  CHECK(parse_path("a*?") == PathExpr::opt(PathExpr::star(B("a"))));
  CHECK(parse_path(" <http://x.org/p> / store:q ") ==
        PathExpr::seq(PathExpr::base(Iri("http://x.org/p")), B("q")));
  CHECK(parse_path("^^a") == PathExpr::inverse(PathExpr::inverse(B("a"))));
}

TEST_CASE("parser errors carry byte offsets") {
  auto offset_of = [](const std::string& text) -> long {
    try {
      parse_path(text);
    } catch (const ParseError& e) {
      CHECK(e.code() == "syntax_error");
      CHECK(e.unit() == ParseError::Unit::Offset);
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(offset_of("") == 0);
  CHECK(offset_of("a/") == 2);
  CHECK(offset_of("(a|b") == 4);
  CHECK(offset_of("a)") == 1);
  CHECK(offset_of("a||b") == 2);
  CHECK(offset_of("*a") == 0);
  CHECK_THROWS_AS(parse_path("foo:bar"), Error);
}

TEST_CASE("to_string round trips through the parser") {
  Rng rng(5);
  const std::vector<Iri> preds{vocab::store("p"), vocab::rdfs("label"), Iri("http://x.org/q")};
  for (int i = 0; i < 300; ++i) {
    auto e = random_path(rng, preds, 5);
    CHECK(parse_path(e.to_string()) == e);
  }
}

TEST_CASE("compile: base case and epsilon") {
  auto a = compile_path(B("p"));
  CHECK(a.state_count() == 2);
  REQUIRE(a.transitions().size() == 1);
  CHECK(a.transitions()[0].label == Label{vocab::store("p"), Direction::Forward});
  const std::vector<Label> empty;
  CHECK(compile_path(PathExpr::star(B("p"))).accepts(empty));
  CHECK_FALSE(compile_path(PathExpr::plus(B("p"))).accepts(empty));
}

TEST_CASE("automaton language equals structural membership on short words") {
  Rng rng(17);
  const std::vector<Iri> preds{ex("a"), ex("b")};
  std::vector<Label> alphabet;
  for (const auto& p : preds)
    for (auto d : {Direction::Forward, Direction::Inverse}) alphabet.push_back({p, d});

  std::vector<std::vector<Label>> words{{}};
  for (std::size_t len = 1, start = 0; len <= 6; ++len) {
    const std::size_t end = words.size();
    for (std::size_t i = start; i < end; ++i)
      for (const auto& l : alphabet) {
        auto w = words[i];
        w.push_back(l);
        words.push_back(std::move(w));
      }
    start = end;
  }
  REQUIRE(words.size() == 5461);

  for (int i = 0; i < 60; ++i) {
    const auto e = random_path(rng, preds, 4);
    const auto a = compile_path(e);
    CHECK(a.state_count() <= 2 * e.node_count());
    CHECK(a.start() < a.state_count());
    for (auto s : a.accept()) CHECK(s < a.state_count());
    std::size_t mismatches = 0;
    for (const auto& w : words)
      if (a.accepts(w) != word_member(e, w)) ++mismatches;
    CHECK_MESSAGE(mismatches == 0, e.to_string());
  }
}

TEST_CASE("eval basics") {
  Graph g;
  g.insert({ex("n1"), ex("p"), ex("n2")});
  g.insert({ex("n2"), ex("p"), ex("n3")});
  g.insert({ex("n3"), ex("p"), lit("leaf")});
  const auto star = PathExpr::star(PathExpr::base(ex("p")));
  CHECK(eval(g, star, ex("n1")) == std::set<Iri>{ex("n1"), ex("n2"), ex("n3")});
  CHECK(eval(g, star, ex("nowhere")) == std::set<Iri>{ex("nowhere")});
  CHECK(eval(g, PathExpr::inverse(PathExpr::base(ex("p"))), ex("n3")) == std::set<Iri>{ex("n2")});
  CHECK(eval(g, PathExpr::base(ex("unknown")), ex("n1")).empty());
  CHECK(holds_path(g, star, ex("n2"), ex("n2")));
}

TEST_CASE("seed: subclass paths") {
  auto seed = capture_seed(SEMSTORE_SEED_DIR);
  REQUIRE(seed.report.ok());
  const auto psw = vocab::store("PowerSteeringWheel");
  CHECK(eval(seed.graph, parse_path("rdfs:subClassOf*"), psw).contains(vocab::store("SteeringWheel")));
  CHECK(holds_path(seed.graph, parse_path("rdfs:subClassOf"), psw, vocab::store("SteeringWheel")));
  CHECK(holds_path(seed.graph, parse_path("rdf:type/rdfs:subClassOf*"), vocab::store("AlloyRims16"),
                   vocab::store("AutoProduct")));
  CHECK(eval(seed.graph, parse_path("^soldBy"), vocab::store("SemanticAuto")).size() == 7);
}

TEST_CASE("eval matches both oracles; algebraic laws hold") {
  Rng rng(29);
  for (int round = 0; round < 80; ++round) {
    auto lg = random_labeled_graph(rng);
    const auto p = random_path(rng, lg.predicates, 4);
    const auto q = random_path(rng, lg.predicates, 3);
    for (const auto& a : lg.nodes) {
      EvalStats stats;
      const auto ca = compile_path(p);
      const auto got = eval_path(lg.graph, ca, a, &stats);
      CHECK(got == word_oracle_eval(lg.graph, p, a));
      CHECK(got == relational_oracle_eval(lg.graph, p, a));
      CHECK(stats.visited_pairs <= (lg.nodes.size() + 1) * ca.state_count());

      auto uq = eval(lg.graph, q, a);
      std::set<Iri> uni = got;
      uni.insert(uq.begin(), uq.end());
      CHECK(eval(lg.graph, PathExpr::alt(p, q), a) == uni);

      std::set<Iri> cat;
      for (const auto& m : got) {
        auto r = eval(lg.graph, q, m);
        cat.insert(r.begin(), r.end());
      }
      CHECK(eval(lg.graph, PathExpr::seq(p, q), a) == cat);

      std::set<Iri> opt = got;
      opt.insert(a);
      CHECK(eval(lg.graph, PathExpr::opt(p), a) == opt);
      CHECK(eval(lg.graph, PathExpr::plus(p), a) == eval(lg.graph, PathExpr::seq(p, PathExpr::star(p)), a));

      for (const auto& b : lg.nodes)
        CHECK(got.contains(b) == eval(lg.graph, PathExpr::inverse(p), b).contains(a));

      // Star is the least set containing a and closed under p.
      const auto st = eval(lg.graph, PathExpr::star(p), a);
      std::set<Iri> least{a};
      std::vector<Iri> frontier{a};
      while (!frontier.empty()) {
        const Iri m = frontier.back();
        frontier.pop_back();
        for (const auto& n : eval(lg.graph, p, m))
          if (least.insert(n).second) frontier.push_back(n);
      }
      CHECK(st == least);
    }
  }
}
