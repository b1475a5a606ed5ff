#include <charconv>
#include <iostream>

#include "httplib.h"
#include "semstore/service.hpp"

namespace semstore::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_json(res, http_status_for(e), error_body(e.code(), e.what()));
  } catch (const json::exception& e) {
    send_json(res, 400, error_body("bad_request", e.what()));
  } catch (const std::exception& e) {
    send_json(res, 500, error_body("internal", e.what()));
  }
}

std::optional<std::size_t> parse_limit(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || end != text.data() + text.size() || n == 0) {
    throw ApiError(400, "bad_request", "limit must be a positive integer");
  }
  return n;
}

std::optional<std::size_t> limit_param(const httplib::Request& req) {
  return parse_limit(req.has_param("limit") ? req.get_param_value("limit") : std::string{});
}

bool is_json(const httplib::Request& req) {
  return req.get_header_value("Content-Type").find("json") != std::string::npos;
}

json body_json(const httplib::Request& req) {
  auto j = json::parse(req.body.empty() ? std::string("{}") : req.body);
  if (!j.is_object()) throw ApiError(400, "bad_request", "request body must be a JSON object");
  return j;
}

}  // namespace

void bind_routes(httplib::Server& svr, StoreService& service) {
  svr.Get("/api/health", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.health()); });
  });

  svr.Get("/api/search", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.search(req.get_param_value("q"), limit_param(req))); });
  });

  // JSON body, or a urlencoded form posted from a plain text input box.
  svr.Post("/api/search", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string q;
      std::optional<std::size_t> limit;
      if (is_json(req)) {
        const auto j = body_json(req);
        q = j.value("q", std::string{});
        if (j.contains("limit")) {
          const auto& l = j.at("limit");
          limit = parse_limit(l.is_string() ? l.get<std::string>() : std::to_string(l.get<long long>()));
        }
      } else {
        q = req.get_param_value("q");
        limit = limit_param(req);
      }
      send_json(res, 200, service.search(q, limit));
    });
  });

  svr.Get("/api/ontology/describe", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.describe(req.get_param_value("iri"))); });
  });

  svr.Get("/api/answer.rdf", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.set_content(service.answer_rdf(req.get_param_value("q"), limit_param(req)), "application/rdf+xml");
    });
  });

  svr.Get("/api/products", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.products(req.get_param_value("class"))); });
  });

  svr.Get("/api/path", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      send_json(res, 200, service.path_query(req.get_param_value("from"), req.get_param_value("path")));
    });
  });

  svr.Post(R"(/api/profiles/([^/]+)/fluents)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto j = body_json(req);
      const auto category = snap::parse_category(j.value("category", std::string{}));
      if (!category) {
        throw ApiError(400, "unknown_category", "unknown category '" + j.value("category", std::string{}) + "'");
      }
      snap::Fluent f{*category, j.value("key", std::string{}), j.value("value", std::string{})};
      send_json(res, 200, to_json(service.upsert_profile_fluent(req.matches[1], f)));
    });
  });

  svr.Get(R"(/api/profiles/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto p = service.profile(req.matches[1]);
      if (!p) throw NotFound("no profile for consumer '" + std::string(req.matches[1]) + "'");
      send_json(res, 200, to_json(*p));
    });
  });

  svr.Get(R"(/api/recommendations/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.recommendations(req.matches[1], limit_param(req))); });
  });

  svr.Post("/api/events", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto j = body_json(req);
      const auto kind = snap::parse_event_kind(j.value("kind", std::string{}));
      if (!kind) throw ApiError(400, "unknown_kind", "kind must be 'action' or 'behavior'");
      const std::string name = j.value("name", std::string{});
      if (name.empty()) throw ApiError(400, "bad_request", "event name must not be empty");
      std::vector<std::pair<std::string, std::string>> payload;
      if (j.contains("payload")) {
        if (!j.at("payload").is_object()) throw ApiError(400, "bad_request", "payload must be an object");
        for (const auto& [k, v] : j.at("payload").items()) {
          payload.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
      const auto e = service.record_event(*kind, name, std::move(payload));
      send_json(res, 201, {{"kind", snap::to_string(e.kind)}, {"name", e.name}, {"timestamp", e.timestamp}});
    });
  });

  svr.Get("/api/events", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.event_log()); });
  });

  svr.Get("/api/export/triples", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(service.export_triples(), "application/n-triples"); });
  });

  svr.Post("/api/import/triples", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto inserted = service.import_triples(req.body);
      send_json(res, 200, {{"inserted", inserted}, {"version", service.graph()->version()}});
    });
  });

  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.body.empty() && res.status == 404) {
      send_json(res, 404, error_body("not_found", "no route for " + req.method + " " + req.path));
    }
  });
}

void serve(const ServiceConfig& config) {
  auto service = StoreService::open(config);
  httplib::Server svr;
  bind_routes(svr, *service);
  if (!svr.bind_to_port(config.host, config.port)) {
    throw Error("port_busy", "cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  const auto health = service->health();
  std::cerr << "semstore: serving " << health["triples"] << " triples on http://" << config.host << ":"
            << config.port << "\n";
  svr.listen_after_bind();
}

}  // namespace semstore::service
