#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "semstore/agents.hpp"
#include "semstore/capture.hpp"
#include "semstore/error.hpp"
#include "semstore/graph.hpp"
#include "semstore/snap.hpp"

namespace httplib {
class Server;
}

namespace semstore::service {

struct SeedFiles {
  std::string summary;
  std::string terms;
  std::string schematic;
  std::string rules;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "store-data";
  SeedFiles seed;
  std::string prefix{ns::kStore};
  agents::ScoringWeights weights;
  std::size_t default_limit = 10;

  // Relative paths resolve against the config file's directory. The
  // STORE_DATA_DIR environment variable overrides data_dir.
  static ServiceConfig load(const std::string& path);
  static ServiceConfig from_json(const nlohmann::json& j, const std::string& base_dir);
  // Throws Error("invalid_config").
  void validate() const;
};

// Capture failure during seeding; carries the full stage report.
class SeedError : public Error {
 public:
  explicit SeedError(capture::CaptureReport report)
      : Error("seed_failed", "seed capture failed:\n" + report.render()), report_(std::move(report)) {}
  const capture::CaptureReport& report() const noexcept { return report_; }

 private:
  capture::CaptureReport report_;
};

// Runs the capture pipeline over the configured seed files.
Graph seed_store(const ServiceConfig& config);
std::vector<snap::NeedRule> load_rules(const ServiceConfig& config);

std::string snapshot_path(const std::string& data_dir);
// Canonical triples, written to a temporary file then renamed.
void snapshot(const Graph& g, const std::string& data_dir);
// Throws ParseError (line number) on corrupt content, Error("io_error") if
// unreadable.
Graph load_snapshot(const std::string& data_dir);

struct ConsumerProfile {
  std::string consumer_id;
  snap::Situation current;
  std::vector<snap::Situation> history;  // oldest first
};

// An Error carrying the HTTP status it maps to.
class ApiError : public Error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : Error(std::move(code), message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

int http_status_for(const Error& e);
nlohmann::json error_body(const std::string& code, const std::string& message);

// The Semantic Auto Store. Endpoint logic lives here so it can be driven
// without a socket; HttpFrontend maps routes onto these methods.
class StoreService {
 public:
  StoreService(ServiceConfig config, Graph graph, std::vector<snap::NeedRule> rules,
               bool persist = false);

  // Loads data_dir's snapshot when present, otherwise seeds and snapshots.
  static std::unique_ptr<StoreService> open(const ServiceConfig& config);

  const ServiceConfig& config() const noexcept { return config_; }
  std::shared_ptr<const Graph> graph() const { return graph_.snapshot(); }
  std::shared_ptr<const agents::Catalog> catalog() const;

  // Records an Action event per call.
  nlohmann::json search(std::string_view q, std::optional<std::size_t> limit);
  // Records a Behavior (view) event.
  nlohmann::json describe(std::string_view iri);
  std::string answer_rdf(std::string_view q, std::optional<std::size_t> limit);
  nlohmann::json products(std::string_view cls);
  nlohmann::json path_query(std::string_view from, std::string_view expr);

  ConsumerProfile upsert_profile_fluent(const std::string& consumer_id, const snap::Fluent& fluent);
  std::optional<ConsumerProfile> profile(const std::string& consumer_id) const;
  nlohmann::json recommendations(const std::string& consumer_id, std::optional<std::size_t> limit) const;

  snap::Event record_event(snap::EventKind kind, std::string name,
                           std::vector<std::pair<std::string, std::string>> payload);
  std::vector<snap::Event> events() const;
  nlohmann::json event_log() const;

  std::string export_triples() const;
  // Merges canonical triple text; returns the number of new triples.
  std::size_t import_triples(std::string_view text);
  nlohmann::json health() const;

 private:
  std::uint64_t next_timestamp();

  ServiceConfig config_;
  SharedGraph graph_;
  std::vector<snap::NeedRule> rules_;
  bool persist_;

  mutable std::mutex catalog_mutex_;
  mutable std::shared_ptr<const agents::Catalog> catalog_;

  mutable std::mutex profiles_mutex_;
  std::map<std::string, ConsumerProfile> profiles_;

  mutable std::mutex events_mutex_;
  std::vector<snap::Event> events_;
};

nlohmann::json to_json(const ConsumerProfile& p);

// Registers every /api route of `service` on `server`.
void bind_routes(httplib::Server& server, StoreService& service);

// Blocks serving HTTP until the process is stopped. Throws Error("port_busy")
// when the port cannot be bound.
void serve(const ServiceConfig& config);

}  // namespace semstore::service
