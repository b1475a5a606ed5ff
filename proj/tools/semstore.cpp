// semstore command line: capture, import/export, queries and the HTTP service.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "semstore/agents.hpp"
#include "semstore/capture.hpp"
#include "semstore/error.hpp"
#include "semstore/io.hpp"
#include "semstore/path.hpp"
#include "semstore/schema.hpp"
#include "semstore/service.hpp"
#include "semstore/snap.hpp"

namespace fs = std::filesystem;
using namespace semstore;

namespace {

struct GraphSource {
  std::string graph;
  std::string config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "canonical triple file");
    cmd->add_option("--config", config, "service config; reads its snapshot or seed");
  }

  Graph load() const {
    if (!graph.empty()) return io::parse_triples(io::read_file(graph));
    if (config.empty()) throw Error("bad_request", "one of --graph or --config is required");
    auto cfg = service::ServiceConfig::load(config);
    if (fs::exists(service::snapshot_path(cfg.data_dir))) return service::load_snapshot(cfg.data_dir);
    return service::seed_store(cfg);
  }
};

void write_out(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    io::write_file_atomic(out, text);
}

std::string show(const Iri& iri) { return curie::compact(iri); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic Auto Store toolkit"};
  app.require_subcommand(1);

  // serve
  std::string serve_config;
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--config", serve_config)->required()->check(CLI::ExistingFile);

  // capture
  std::string cap_summary, cap_terms, cap_schematic, cap_out, cap_prefix{ns::kStore};
  auto* cap = app.add_subcommand("capture", "run the five-stage capture pipeline");
  cap->add_option("--summary", cap_summary)->required()->check(CLI::ExistingFile);
  cap->add_option("--terms", cap_terms)->required()->check(CLI::ExistingFile);
  cap->add_option("--schematic", cap_schematic)->required()->check(CLI::ExistingFile);
  cap->add_option("--out", cap_out, "triple output (default stdout)");
  cap->add_option("--prefix", cap_prefix);

  // import
  std::string imp_format = "triples", imp_in, imp_graph, imp_id_attr, imp_prefix{ns::kStore};
  auto* imp = app.add_subcommand("import", "merge a file into a triple store file");
  imp->add_option("--format", imp_format)->check(CLI::IsMember({"triples", "rdfxml", "flatxml"}));
  imp->add_option("--in", imp_in)->required()->check(CLI::ExistingFile);
  imp->add_option("--graph", imp_graph, "store file, created if absent")->required();
  imp->add_option("--id-attr", imp_id_attr, "record id attribute for flatxml");
  imp->add_option("--prefix", imp_prefix);

  // export
  std::string exp_format = "triples", exp_out;
  GraphSource exp_src;
  auto* exp = app.add_subcommand("export", "write a store in another format");
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"triples", "rdfxml"}));
  exp->add_option("--out", exp_out);
  exp_src.add_to(exp);

  // search
  std::string search_q;
  std::size_t search_limit = 10;
  GraphSource search_src;
  auto* srch = app.add_subcommand("search", "ranked keyword search");
  srch->add_option("--q", search_q)->required();
  srch->add_option("--limit", search_limit)->check(CLI::PositiveNumber);
  search_src.add_to(srch);

  // query
  std::string query_path, query_from;
  GraphSource query_src;
  auto* qry = app.add_subcommand("query", "evaluate a relation path expression");
  qry->add_option("--path", query_path)->required();
  qry->add_option("--from", query_from)->required();
  query_src.add_to(qry);

  // recommend
  std::string rec_profile, rec_rules;
  std::size_t rec_limit = 10;
  GraphSource rec_src;
  auto* rec = app.add_subcommand("recommend", "recommend products for a consumer profile");
  rec->add_option("--profile", rec_profile, "JSON {\"fluents\":[{category,key,value}]}")
      ->required()
      ->check(CLI::ExistingFile);
  rec->add_option("--rules", rec_rules)->required()->check(CLI::ExistingFile);
  rec->add_option("--limit", rec_limit)->check(CLI::PositiveNumber);
  rec_src.add_to(rec);

  // validate
  GraphSource val_src;
  auto* val = app.add_subcommand("validate", "schema validation report");
  val_src.add_to(val);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) {
      service::serve(service::ServiceConfig::load(serve_config));
    } else if (*cap) {
      auto result = capture::run_capture_pipeline(io::read_file(cap_summary), io::read_file(cap_terms),
                                                  io::read_file(cap_schematic), cap_prefix);
      std::cerr << result.report.render();
      if (!result.report.ok()) return 2;
      write_out(cap_out, io::emit_triples(result.graph));
    } else if (*imp) {
      Graph g;
      if (fs::exists(imp_graph)) g = io::parse_triples(io::read_file(imp_graph));
      auto text = io::read_file(imp_in);
      std::size_t added = 0;
      if (imp_format == "triples") {
        added = g.insert_all(io::parse_triples(text).triples());
      } else if (imp_format == "rdfxml") {
        added = g.insert_all(io::parse_rdfxml_subset(text).triples());
      } else {
        if (imp_id_attr.empty()) throw Error("bad_request", "flatxml needs --id-attr");
        added = g.insert_all(io::parse_flat_xml(text, imp_id_attr, imp_prefix));
      }
      io::write_file_atomic(imp_graph, io::emit_triples(g));
      std::cout << added << " triples added, " << g.size() << " total\n";
    } else if (*exp) {
      auto g = exp_src.load();
      write_out(exp_out, exp_format == "rdfxml" ? io::emit_rdfxml(g) : io::emit_triples(g));
    } else if (*srch) {
      auto g = search_src.load();
      auto idx = agents::index_labels(g);
      for (const auto& r : agents::search(idx, g, search_q, search_limit))
        std::cout << r.rank << '\t' << show(r.iri) << '\t' << agents::format_score(r.score) << '\t'
                  << agents::to_string(r.matched_via) << '\n';
    } else if (*qry) {
      auto g = query_src.load();
      auto a = path::compile_path(path::parse_path(query_path));
      for (const auto& n : path::eval_path(g, a, curie::expand(query_from, ns::kStore)))
        std::cout << show(n) << '\n';
    } else if (*rec) {
      auto g = rec_src.load();
      auto rules = snap::parse_rules(io::read_file(rec_rules));
      auto j = nlohmann::json::parse(io::read_file(rec_profile));
      snap::Situation s(j.value("consumer_id", std::string{}));
      for (const auto& f : j.at("fluents")) {
        auto cat = snap::parse_category(f.at("category").get<std::string>());
        if (!cat) throw Error("unknown_category", "unknown category " + f.at("category").dump());
        s = snap::assert_fluent(s, {*cat, f.at("key").get<std::string>(), f.at("value").get<std::string>()});
      }
      for (const auto& r : agents::recommend(g, s, rules, rec_limit))
        std::cout << show(r.product) << '\t' << agents::format_score(r.score) << '\t'
                  << r.need.source_rule << '\t' << show(r.need.target) << '\n';
    } else if (*val) {
      auto report = schema::validate_schema(val_src.load());
      for (const auto& e : report.errors)
        std::cout << "error\t" << e.code << '\t' << show(e.subject) << '\t' << e.message << '\n';
      for (const auto& w : report.warnings)
        std::cout << "warning\t" << w.code << '\t' << show(w.subject) << '\t' << w.message << '\n';
      std::cout << report.errors.size() << " errors, " << report.warnings.size() << " warnings\n";
      return report.accepted() ? 0 : 1;
    }
  } catch (const service::SeedError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
