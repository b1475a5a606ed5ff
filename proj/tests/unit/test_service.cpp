#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "semstore/error.hpp"
#include "semstore/io.hpp"
#include "semstore/service.hpp"

using namespace semstore;
using namespace semstore::service;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("semstore-svc-" + name);
  fs::remove_all(d);
  return d;
}

ServiceConfig config_in(const fs::path& dir) {
  auto c = ServiceConfig::load(SEMSTORE_CONFIG);
  c.data_dir = dir.string();
  return c;
}

std::string api_code(const std::function<void()>& fn, int* status = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (status) *status = http_status_for(e);
    return e.code();
  }
  return "";
}
}  // namespace

TEST_CASE("config loading") {
  auto c = ServiceConfig::load(SEMSTORE_CONFIG);
  CHECK(c.port == 8080);
  CHECK(fs::path(c.seed.schematic).is_absolute());
  CHECK(fs::exists(c.seed.schematic));
  CHECK(c.weights.exact_label == 100);

  ::setenv("STORE_DATA_DIR", "/tmp/semstore-env-dir", 1);
  CHECK(ServiceConfig::load(SEMSTORE_CONFIG).data_dir == "/tmp/semstore-env-dir");
  ::unsetenv("STORE_DATA_DIR");

  ServiceConfig bad = c;
  bad.port = 0;
  CHECK(api_code([&] { bad.validate(); }) == "invalid_config");
  bad.port = 70000;
  CHECK(api_code([&] { bad.validate(); }) == "invalid_config");
  bad.port = 1;
  bad.data_dir = "/proc/semstore-not-writable";
  CHECK(api_code([&] { bad.validate(); }) == "invalid_config");
}

TEST_CASE("seed failure carries the report") {
  auto dir = fresh_dir("badseed");
  fs::create_directories(dir);
  auto c = config_in(dir / "data");
  std::ofstream(dir / "summary.txt") << "Project: P\n";
  c.seed.summary = (dir / "summary.txt").string();
  try {
    seed_store(c);
    FAIL("expected seed failure");
  } catch (const SeedError& e) {
    CHECK_FALSE(e.report().ok());
    CHECK(std::string(e.what()).find("Organizing and Scoping: failed") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("open seeds, snapshots, then reloads") {
  auto dir = fresh_dir("open");
  auto svc = StoreService::open(config_in(dir));
  CHECK(fs::exists(snapshot_path(dir.string())));
  const auto exported = svc->export_triples();
  svc.reset();
  // Second open reads the snapshot rather than reseeding.
  auto again = StoreService::open(config_in(dir));
  CHECK(again->export_triples() == exported);
  fs::remove_all(dir);
}

TEST_CASE("endpoint logic") {
  auto dir = fresh_dir("endpoints");
  auto svc = StoreService::open(config_in(dir));

  auto h = svc->health();
  CHECK(h["status"] == "ok");
  CHECK(h["triples"].get<std::size_t>() == svc->graph()->size());

  auto rs = svc->search("rims", std::nullopt);
  REQUIRE_FALSE(rs["results"].empty());
  CHECK(rs["results"][0]["curie"] == "store:Rims");
  CHECK(rs["results"][0]["rank"] == 1);
  CHECK(svc->search("rims", std::nullopt) == rs);  // same graph version, same answer
  CHECK(svc->events().back().kind == snap::EventKind::Action);

  int status = 0;
  CHECK(api_code([&] { svc->search("", std::nullopt); }, &status) == "empty_query");
  CHECK(status == 400);
  CHECK(api_code([&] { svc->search("x", 0); }, &status) == "bad_request");

  auto d = svc->describe("store:SteeringWheel");
  CHECK(d["is_class"] == true);
  CHECK(d["subclasses"][0]["curie"] == "store:PowerSteeringWheel");
  CHECK(svc->events().back().kind == snap::EventKind::Behavior);
  CHECK(api_code([&] { svc->describe("store:nonexistent"); }, &status) == "not_found");
  CHECK(status == 404);
  CHECK(api_code([&] { svc->describe("bogus:x"); }, &status) == "unknown_prefix");
  CHECK(status == 400);

  auto p = svc->products("store:Exterior");
  CHECK(p["products"].size() == 4);
  auto q = svc->path_query("store:PowerSteeringWheel", "rdfs:subClassOf+");
  CHECK(q["nodes"].size() == 3);
  CHECK(api_code([&] { svc->path_query("store:Rims", "a/"); }, &status) == "syntax_error");
  CHECK(status == 400);

  const auto rdf = svc->answer_rdf("rims", std::nullopt);
  CHECK(rdf.find("rdf:ID=\"Rims\"") != std::string::npos);

  // Events stay ordered.
  auto ev = svc->events();
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i - 1].timestamp <= ev[i].timestamp);
  CHECK(svc->event_log()["events"].size() == ev.size());
  fs::remove_all(dir);
}

TEST_CASE("profiles and recommendations") {
  auto dir = fresh_dir("profiles");
  auto svc = StoreService::open(config_in(dir));
  CHECK_FALSE(svc->profile("alice"));
  CHECK(svc->recommendations("alice", std::nullopt)["recommendations"].empty());

  auto p1 = svc->upsert_profile_fluent("alice", {snap::Category::LifeStage, "stage", "student"});
  CHECK(p1.current.size() == 1);
  CHECK(p1.history.size() == 1);
  CHECK(svc->recommendations("alice", std::nullopt)["recommendations"].empty());

  auto p2 = svc->upsert_profile_fluent("alice", {snap::Category::LifeStage, "stage", "new_driver"});
  CHECK(p2.current.size() == 1);
  CHECK(p2.history.size() == 2);
  for (std::size_t i = 1; i < p2.history.size(); ++i) CHECK(p2.history[i - 1].timestamp() < p2.history[i].timestamp());
  CHECK(p2.history.back().timestamp() < p2.current.timestamp());
  auto recs = svc->recommendations("alice", std::nullopt)["recommendations"];
  REQUIRE_FALSE(recs.empty());
  CHECK(recs[0]["curie"] == "store:CarnaubaWashAndWaxKit");
  CHECK(recs[0]["need"]["source_rule"] == "new_driver_care");

  // Another consumer is independent.
  CHECK(svc->recommendations("bob", std::nullopt)["recommendations"].empty());
  CHECK(api_code([&] { svc->upsert_profile_fluent("", {snap::Category::LifeStage, "k", "v"}); }) == "bad_request");
  fs::remove_all(dir);
}

TEST_CASE("recommendations change iff rule firings change") {
  auto dir = fresh_dir("firings");
  auto cfg = config_in(dir);
  auto svc = StoreService::open(cfg);
  const auto rules = load_rules(cfg);
  Rng rng(131);
  const std::vector<snap::Fluent> pool{{snap::Category::LifeStage, "stage", "new_driver"},
                                       {snap::Category::LifeStage, "stage", "retired"},
                                       {snap::Category::Demographic, "climate", "rainy"},
                                       {snap::Category::Demographic, "climate", "dry"},
                                       {snap::Category::LifeStyle, "spending", "high"},
                                       {snap::Category::Obligation, "car_loan", "overdue"},
                                       {snap::Category::Obligation, "car_loan", "current"},
                                       {snap::Category::Demographic, "marital_status", "married"}};
  for (int i = 0; i < 60; ++i) {
    const auto before_p = svc->profile("c");
    const auto before = svc->recommendations("c", 100);
    const auto& f = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
    const auto after_p = svc->upsert_profile_fluent("c", f);
    const auto after = svc->recommendations("c", 100);
    const auto needs_before = snap::derive_needs(before_p ? before_p->current : snap::Situation("c"), rules);
    const auto needs_after = snap::derive_needs(after_p.current, rules);
    CHECK((before["recommendations"] != after["recommendations"]) == (needs_before != needs_after));
  }
  fs::remove_all(dir);
}

TEST_CASE("import bumps the version and persists") {
  auto dir = fresh_dir("import");
  auto svc = StoreService::open(config_in(dir));
  const auto v0 = svc->health()["version"].get<std::uint64_t>();
  const auto n = svc->import_triples("<http://example.org/semantic-auto-store#NewKit> "
                                     "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
                                     "<http://example.org/semantic-auto-store#CarCare> .\n");
  CHECK(n == 1);
  CHECK(svc->health()["version"].get<std::uint64_t>() > v0);
  CHECK(svc->import_triples(svc->export_triples()) == 0);
  CHECK(load_snapshot(dir.string()) == *svc->graph());
  CHECK(api_code([&] { svc->import_triples("not a triple\n"); }) == "syntax_error");
  fs::remove_all(dir);
}

TEST_CASE("snapshot/load equality after random mutation sequences") {
  Rng rng(137);
  for (int seq = 0; seq < 20; ++seq) {
    auto dir = fresh_dir("fuzz");
    fs::create_directories(dir);
    Graph g = random_triple_graph(rng, 30);
    for (int step = 0; step < 15; ++step) {
      if (coin(rng, 0.6)) {
        g.insert_all(random_triple_graph(rng, 8).triples());
      } else if (!g.empty()) {
        auto it = g.triples().begin();
        std::advance(it, uniform(rng, 0, static_cast<int>(g.size()) - 1));
        const Triple t = *it;
        g.remove(coin(rng) ? TriplePattern::exact(t) : TriplePattern{t.subject, std::nullopt, std::nullopt});
      }
      snapshot(g, dir.string());
      CHECK(load_snapshot(dir.string()) == g);
    }
    fs::remove_all(dir);
  }
}

TEST_CASE("snapshot edge cases") {
  auto dir = fresh_dir("edges");
  fs::create_directories(dir);
  std::ofstream(snapshot_path(dir.string())).flush();
  CHECK(load_snapshot(dir.string()).empty());

  // An interrupted write leaves only a stray temp file; the snapshot stays loadable.
  Graph g;
  g.insert({ex("a"), ex("p"), lit("1")});
  snapshot(g, dir.string());
  std::ofstream(dir / "graph.nt.tmp-crashed") << "<http://a> <http://b";
  CHECK(load_snapshot(dir.string()) == g);

  std::ofstream(snapshot_path(dir.string())) << "<http://a/s> <http://a/p> \"1\" .\nbroken line\n";
  try {
    load_snapshot(dir.string());
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  fs::remove_all(dir);
  CHECK(api_code([&] { load_snapshot(dir.string()); }) == "io_error");
}

TEST_CASE("error bodies") {
  auto b = error_body("empty_query", "query has no searchable terms");
  CHECK(b["error"]["code"] == "empty_query");
  CHECK(http_status_for(Error("mystery", "x")) == 500);
  CHECK(http_status_for(ApiError(418, "teapot", "x")) == 418);
}
