#include "semstore/service.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "semstore/io.hpp"
#include "semstore/path.hpp"
#include "semstore/schema.hpp"

namespace semstore::service {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

ServiceConfig ServiceConfig::from_json(const json& j, const std::string& base_dir) {
  ServiceConfig c;
  auto resolve = [&base_dir](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute() || base_dir.empty()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
  };
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.data_dir = resolve(j.value("data_dir", c.data_dir));
    c.prefix = j.value("prefix", c.prefix);
    c.default_limit = j.value("default_limit", c.default_limit);
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      c.seed.summary = resolve(s.value("summary", std::string{}));
      c.seed.terms = resolve(s.value("terms", std::string{}));
      c.seed.schematic = resolve(s.value("schematic", std::string{}));
      c.seed.rules = resolve(s.value("rules", std::string{}));
    }
    if (j.contains("weights")) {
      const auto& w = j.at("weights");
      c.weights.exact_label = w.value("exact_label", c.weights.exact_label);
      c.weights.token_label = w.value("token_label", c.weights.token_label);
      c.weights.synonym = w.value("synonym", c.weights.synonym);
    }
  } catch (const json::exception& e) {
    throw Error("invalid_config", std::string("bad config value: ") + e.what());
  }
  if (const char* env = std::getenv("STORE_DATA_DIR"); env != nullptr && *env != '\0') c.data_dir = env;
  return c;
}

ServiceConfig ServiceConfig::load(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error("invalid_config", path + ": " + e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

void ServiceConfig::validate() const {
  if (port < 1 || port > 65535) throw Error("invalid_config", "port must be in [1, 65535]");
  if (data_dir.empty()) throw Error("invalid_config", "data_dir must be set");
  if (default_limit == 0) throw Error("invalid_config", "default_limit must be positive");
  std::error_code ec;
  fs::create_directories(data_dir, ec);
  const fs::path probe = fs::path(data_dir) / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw Error("invalid_config", "data_dir is not writable: " + data_dir);
  }
  fs::remove(probe, ec);
}

// ---------------------------------------------------------------------------
// Seeding and snapshots

Graph seed_store(const ServiceConfig& config) {
  auto result = capture::run_capture_pipeline(io::read_file(config.seed.summary), io::read_file(config.seed.terms),
                                              io::read_file(config.seed.schematic), config.prefix);
  if (!result.report.ok()) throw SeedError(std::move(result.report));
  return std::move(result.graph);
}

std::vector<snap::NeedRule> load_rules(const ServiceConfig& config) {
  if (config.seed.rules.empty()) return {};
  return snap::parse_rules(io::read_file(config.seed.rules));
}

std::string snapshot_path(const std::string& data_dir) { return (fs::path(data_dir) / "graph.nt").string(); }

void snapshot(const Graph& g, const std::string& data_dir) {
  io::write_file_atomic(snapshot_path(data_dir), io::emit_triples(g));
}

Graph load_snapshot(const std::string& data_dir) { return io::parse_triples(io::read_file(snapshot_path(data_dir))); }

// ---------------------------------------------------------------------------
// Errors

int http_status_for(const Error& e) {
  if (const auto* api = dynamic_cast<const ApiError*>(&e)) return api->status();
  const std::string& c = e.code();
  if (c == "not_found") return 404;
  if (c == "empty_query" || c == "syntax_error" || c == "unknown_category" || c == "unknown_prefix" ||
      c == "invalid_iri" || c == "bad_request" || c == "non_monotonic_timestamp" || c == "unknown_kind") {
    return 400;
  }
  return 500;
}

json error_body(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

// ---------------------------------------------------------------------------
// JSON views

namespace {

json node_json(const Graph& g, const Iri& iri) {
  json j{{"iri", iri.str()}, {"curie", curie::compact(iri)}};
  for (const auto& t : g.match({iri, vocab::label(), std::nullopt})) {
    if (t.object.is_literal()) {
      j["label"] = t.object.literal().lexical;
      break;
    }
  }
  return j;
}

json nodes_json(const Graph& g, const auto& iris) {
  json arr = json::array();
  for (const auto& i : iris) arr.push_back(node_json(g, i));
  return arr;
}

Iri parse_iri_param(std::string_view text, const char* name) {
  if (text.empty()) throw ApiError(400, "bad_request", std::string("missing parameter '") + name + "'");
  return curie::expand(text);
}

json event_json(const snap::Event& e) {
  json payload = json::object();
  for (const auto& [k, v] : e.payload) payload[k] = v;
  return {{"kind", snap::to_string(e.kind)}, {"name", e.name}, {"timestamp", e.timestamp}, {"payload", payload}};
}

}  // namespace

json to_json(const ConsumerProfile& p) {
  json fluents = json::array();
  for (const auto& [key, value] : p.current.fluents()) {
    fluents.push_back({{"category", snap::to_string(key.first)}, {"key", key.second}, {"value", value}});
  }
  return {{"consumer_id", p.consumer_id},
          {"timestamp", p.current.timestamp()},
          {"fluents", fluents},
          {"history_length", p.history.size()}};
}

// ---------------------------------------------------------------------------
// StoreService

StoreService::StoreService(ServiceConfig config, Graph graph, std::vector<snap::NeedRule> rules, bool persist)
    : config_(std::move(config)), graph_(std::move(graph)), rules_(std::move(rules)), persist_(persist) {}

std::unique_ptr<StoreService> StoreService::open(const ServiceConfig& config) {
  config.validate();
  Graph g;
  if (fs::exists(snapshot_path(config.data_dir))) {
    g = load_snapshot(config.data_dir);
  } else {
    g = seed_store(config);
    snapshot(g, config.data_dir);
  }
  return std::make_unique<StoreService>(config, std::move(g), load_rules(config), true);
}

std::shared_ptr<const agents::Catalog> StoreService::catalog() const {
  auto snap = graph_.snapshot();
  std::lock_guard lock(catalog_mutex_);
  if (!catalog_ || catalog_->snapshot() != snap) catalog_ = std::make_shared<const agents::Catalog>(snap);
  return catalog_;
}

std::uint64_t StoreService::next_timestamp() {
  // Wall-clock milliseconds, clamped so the logical clock never runs back.
  const auto now = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
          .count());
  return events_.empty() ? now : std::max(now, events_.back().timestamp);
}

snap::Event StoreService::record_event(snap::EventKind kind, std::string name,
                                       std::vector<std::pair<std::string, std::string>> payload) {
  std::lock_guard lock(events_mutex_);
  snap::Event e{kind, std::move(name), next_timestamp(), std::move(payload)};
  events_ = snap::record_event(std::move(events_), e);
  return e;
}

std::vector<snap::Event> StoreService::events() const {
  std::lock_guard lock(events_mutex_);
  return events_;
}

json StoreService::event_log() const {
  json arr = json::array();
  for (const auto& e : events()) arr.push_back(event_json(e));
  return {{"events", arr}};
}

json StoreService::search(std::string_view q, std::optional<std::size_t> limit) {
  const auto cat = catalog();
  const std::size_t n = limit.value_or(config_.default_limit);
  if (n == 0) throw ApiError(400, "bad_request", "limit must be positive");
  const auto results = agents::search(*cat, q, n, config_.weights);
  record_event(snap::EventKind::Action, "search", {{"q", std::string(q)}});

  json arr = json::array();
  for (const auto& r : results) {
    json j = node_json(cat->graph(), r.iri);
    j["rank"] = r.rank;
    j["score"] = boost::rational_cast<double>(r.score);
    j["score_exact"] = agents::format_score(r.score);
    j["matched_via"] = agents::to_string(r.matched_via);
    arr.push_back(std::move(j));
  }
  return {{"query", std::string(q)}, {"version", cat->version()}, {"results", arr}};
}

json StoreService::describe(std::string_view iri_text) {
  const auto g = graph_.snapshot();
  const Iri iri = parse_iri_param(iri_text, "iri");
  const auto d = agents::describe(*g, iri);
  record_event(snap::EventKind::Behavior, "view", {{"iri", iri.str()}});

  json relations = json::array();
  for (const auto& [p, o] : d.relations) relations.push_back({{"predicate", p.str()}, {"object", node_json(*g, o)}});
  json attributes = json::array();
  for (const auto& [p, l] : d.attributes) {
    json a{{"predicate", p.str()}, {"curie", curie::compact(p)}, {"value", l.lexical}};
    if (l.datatype) a["datatype"] = l.datatype->str();
    attributes.push_back(std::move(a));
  }
  json j = node_json(*g, iri);
  j["is_class"] = schema::is_declared_class(*g, iri);
  j["types"] = nodes_json(*g, d.types);
  j["superclasses"] = nodes_json(*g, d.superclasses);
  j["subclasses"] = nodes_json(*g, d.subclasses);
  j["descendants"] = nodes_json(*g, d.descendants);
  j["instances"] = nodes_json(*g, d.instances);
  j["relations"] = relations;
  j["attributes"] = attributes;
  return j;
}

std::string StoreService::answer_rdf(std::string_view q, std::optional<std::size_t> limit) {
  const auto g = graph_.snapshot();
  auto rdf = agents::answer_as_rdf(*g, q, limit.value_or(config_.default_limit), config_.weights);
  record_event(snap::EventKind::Action, "answer", {{"q", std::string(q)}});
  return rdf;
}

json StoreService::products(std::string_view cls_text) {
  const auto g = graph_.snapshot();
  const Iri cls = parse_iri_param(cls_text, "class");
  return {{"class", cls.str()}, {"products", nodes_json(*g, schema::instances_of(*g, cls))}};
}

json StoreService::path_query(std::string_view from_text, std::string_view expr) {
  const auto g = graph_.snapshot();
  const Iri from = parse_iri_param(from_text, "from");
  if (expr.empty()) throw ApiError(400, "bad_request", "missing parameter 'path'");
  const auto e = path::parse_path(expr);
  return {{"from", from.str()}, {"path", e.to_string()},
          {"nodes", nodes_json(*g, path::eval_path(*g, path::compile_path(e), from))}};
}

ConsumerProfile StoreService::upsert_profile_fluent(const std::string& consumer_id, const snap::Fluent& fluent) {
  if (consumer_id.empty()) throw ApiError(400, "bad_request", "consumer id must not be empty");
  if (fluent.key.empty()) throw ApiError(400, "bad_request", "fluent key must not be empty");
  std::lock_guard lock(profiles_mutex_);
  auto [it, fresh] = profiles_.try_emplace(consumer_id, ConsumerProfile{consumer_id, snap::Situation(consumer_id), {}});
  auto& p = it->second;
  snap::Situation next = snap::assert_fluent(p.current, fluent);
  p.history.push_back(std::move(p.current));
  p.current = std::move(next);
  return p;
}

std::optional<ConsumerProfile> StoreService::profile(const std::string& consumer_id) const {
  std::lock_guard lock(profiles_mutex_);
  auto it = profiles_.find(consumer_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}

json StoreService::recommendations(const std::string& consumer_id, std::optional<std::size_t> limit) const {
  const auto g = graph_.snapshot();
  const auto p = profile(consumer_id);
  const snap::Situation situation = p ? p->current : snap::Situation(consumer_id);
  const auto recs = agents::recommend(*g, situation, rules_, limit.value_or(config_.default_limit));
  json arr = json::array();
  for (const auto& r : recs) {
    json j = node_json(*g, r.product);
    j["need"] = {{"target", node_json(*g, r.need.target)},
                 {"priority", r.need.priority},
                 {"source_rule", r.need.source_rule}};
    j["score"] = boost::rational_cast<double>(r.score);
    j["score_exact"] = agents::format_score(r.score);
    arr.push_back(std::move(j));
  }
  return {{"consumer_id", consumer_id}, {"situation_timestamp", situation.timestamp()}, {"recommendations", arr}};
}

std::string StoreService::export_triples() const { return io::emit_triples(*graph_.snapshot()); }

std::size_t StoreService::import_triples(std::string_view text) {
  const Graph incoming = io::parse_triples(text);
  return graph_.update([&](Graph& g) {
    const std::size_t n = g.insert_all(incoming.triples());
    if (persist_ && n > 0) snapshot(g, config_.data_dir);
    return n;
  });
}

json StoreService::health() const {
  const auto g = graph_.snapshot();
  return {{"status", "ok"}, {"version", g->version()}, {"triples", g->size()}};
}

}  // namespace semstore::service
