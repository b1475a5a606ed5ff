#include <atomic>
#include <thread>

#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "semstore/error.hpp"
#include "semstore/graph.hpp"

using namespace semstore;
using namespace testsupport;

namespace {
const Iri kFaculty("http://www.hr.com/humanresources#faculty");
const Iri kAssoc("http://www.hr.com/humanresources#AssociateProfessor");

Graph faculty_graph() {
  Graph g;
  g.insert({kFaculty, vocab::type(), vocab::rdfs_class()});
  g.insert({kAssoc, vocab::type(), vocab::rdfs_class()});
  g.insert({kAssoc, vocab::sub_class_of(), kFaculty});
  return g;
}
}  // namespace

TEST_CASE("iri validation") {
  CHECK_THROWS_AS(Iri(""), std::invalid_argument);
  CHECK_THROWS_AS(Iri("has space"), std::invalid_argument);
  CHECK_THROWS_AS(Iri("<x>"), std::invalid_argument);
  CHECK_THROWS_AS(Iri("a\"b"), std::invalid_argument);
  CHECK(Iri("urn:x").str() == "urn:x");
  CHECK(Iri("http://a/b#c") != Iri("http://a/b#C"));
}

TEST_CASE("curie expansion and compaction") {
  CHECK(curie::expand("rdfs:subClassOf") == vocab::sub_class_of());
  CHECK(curie::expand("store:Rims").str() == "http://example.org/semantic-auto-store#Rims");
  CHECK(curie::expand("<http://x.org/a>").str() == "http://x.org/a");
  CHECK(curie::expand("http://x.org/a").str() == "http://x.org/a");
  CHECK(curie::expand("Rims", ns::kStore) == vocab::store("Rims"));
  try {
    curie::expand("foaf:name");
    FAIL("expected unknown_prefix");
  } catch (const Error& e) {
    CHECK(e.code() == "unknown_prefix");
  }
  CHECK(curie::compact(vocab::store("Rims")) == "store:Rims");
  CHECK(curie::compact(Iri("http://x.org/a")) == "http://x.org/a");
}

TEST_CASE("insert semantics") {
  Graph g;
  const Triple t{ex("x"), ex("p"), ex("y")};
  CHECK(g.insert(t));
  CHECK(g.size() == 1);
  const auto v = g.version();
  CHECK_FALSE(g.insert(t));
  CHECK(g.size() == 1);
  CHECK(g.version() == v);
}

TEST_CASE("faculty class lookup") {
  Graph g;
  g.insert({kFaculty, vocab::type(), vocab::rdfs_class()});
  auto m = g.match({kFaculty, std::nullopt, std::nullopt});
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Triple{kFaculty, vocab::type(), vocab::rdfs_class()});

  auto sub = faculty_graph().match({std::nullopt, vocab::sub_class_of(), std::nullopt});
  REQUIRE(sub.size() == 1);
  CHECK(sub[0] == Triple{kAssoc, vocab::sub_class_of(), kFaculty});
}

TEST_CASE("remove") {
  Graph g;
  CHECK(g.remove(TriplePattern::all()) == 0);
  CHECK(g.version() == 0);
  for (int i = 0; i < 3; ++i) g.insert({ex("s" + std::to_string(i)), ex("p"), lit("v")});
  g.insert({ex("s0"), ex("q"), lit("v")});
  const auto v = g.version();
  CHECK(g.remove({std::nullopt, ex("p"), std::nullopt}) == 3);
  CHECK(g.size() == 1);
  CHECK(g.version() > v);
  CHECK(g.match({std::nullopt, ex("p"), std::nullopt}).empty());
  CHECK(g.objects(ex("s1"), ex("p")).empty());

  Rng rng(7);
  Graph big;
  while (big.size() < 50) big.insert({ex("s" + std::to_string(uniform(rng, 0, 20))), ex("p"), lit(std::to_string(uniform(rng, 0, 1000)))});
  const auto before = naive_match(big, TriplePattern::all()).size();
  CHECK(big.remove(TriplePattern::all()) == before);
  CHECK(before == 50);
  CHECK(big.empty());
}

TEST_CASE("index coherence against full scan") {
  Rng rng(11);
  for (int round = 0; round < 60; ++round) {
    Graph g = random_triple_graph(rng, 200);
    // Mutate a bit so indexes see removals too.
    if (!g.empty()) g.remove(TriplePattern::exact(*g.triples().begin()));
    g.remove({std::nullopt, ex("p1"), std::nullopt});

    std::vector<TriplePattern> patterns{TriplePattern::all()};
    for (const auto& t : g.triples()) {
      patterns.push_back({t.subject, std::nullopt, std::nullopt});
      patterns.push_back({std::nullopt, t.predicate, std::nullopt});
      patterns.push_back({std::nullopt, std::nullopt, t.object});
      patterns.push_back({t.subject, t.predicate, std::nullopt});
      patterns.push_back({std::nullopt, t.predicate, t.object});
      patterns.push_back({t.subject, std::nullopt, t.object});
      patterns.push_back(TriplePattern::exact(t));
      if (patterns.size() > 80) break;
    }
    patterns.push_back({ex("absent"), std::nullopt, std::nullopt});
    for (const auto& p : patterns) {
      const auto got = g.match(p);
      CHECK(got == naive_match(g, p));
      // Binding one more position never enlarges the result.
      if (!p.object && p.subject && !got.empty()) {
        TriplePattern tighter = p;
        tighter.object = got.front().object;
        CHECK(g.match(tighter).size() <= got.size());
      }
    }

    // Union over subjects reproduces the store.
    std::set<Triple> all;
    for (const auto& t : g.triples())
      for (const auto& m : g.match({t.subject, std::nullopt, std::nullopt})) all.insert(m);
    CHECK(all == g.triples());
  }
}

TEST_CASE("insert then remove restores prior set; versions strictly increase") {
  Rng rng(3);
  Graph g = random_triple_graph(rng, 40);
  std::uint64_t last = g.version();
  for (int i = 0; i < 200; ++i) {
    const auto before = g.triples();
    const Triple t{ex("s" + std::to_string(uniform(rng, 0, 30))), ex("p"), lit(std::to_string(i))};
    const bool fresh = g.insert(t);
    if (fresh) {
      CHECK(g.version() > last);
      last = g.version();
      CHECK(g.remove(TriplePattern::exact(t)) == 1);
      CHECK(g.version() > last);
      last = g.version();
      CHECK(g.triples() == before);
    } else {
      CHECK(g.version() == last);
    }
  }
}

TEST_CASE("metamodeling: a predicate may also be a subject") {
  Graph g;
  g.insert({ex("p"), vocab::type(), vocab::property()});
  g.insert({ex("a"), ex("p"), ex("b")});
  CHECK(g.mentions(ex("p")));
  CHECK(g.match({ex("p"), std::nullopt, std::nullopt}).size() == 1);
}

TEST_CASE("shared graph snapshots never observe half-applied updates") {
  SharedGraph shared;
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      auto snap = shared.snapshot();
      // Each update inserts a pair; an odd size would mean a torn update.
      if (snap->size() % 2 != 0) ++bad;
    }
  });
  for (int i = 0; i < 300; ++i) {
    shared.update([i](Graph& g) {
      g.insert({ex("a" + std::to_string(i)), ex("p"), lit("1")});
      g.insert({ex("b" + std::to_string(i)), ex("p"), lit("2")});
    });
  }
  done = true;
  reader.join();
  CHECK(bad == 0);
  CHECK(shared.snapshot()->size() == 600);

  auto old = shared.snapshot();
  auto n = shared.update([](Graph& g) { return g.insert({ex("z"), ex("p"), lit("3")}); });
  CHECK(n);
  CHECK(old->size() == 600);
  CHECK(shared.snapshot()->size() == 601);
}
