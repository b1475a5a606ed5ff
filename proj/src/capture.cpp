#include "semstore/capture.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "semstore/error.hpp"
#include "semstore/schema.hpp"

namespace semstore::capture {

namespace {

constexpr std::size_t kStageCount = 5;
constexpr std::string_view kStageNames[kStageCount] = {
    "Organizing and Scoping", "Data Collection", "Data Analysis", "Initial Ontology Development",
    "Ontology Refinement and Validation"};

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = eol + 1;
  }
  return lines;
}

struct Word {
  std::string text;
  bool quoted = false;
};

[[noreturn]] void fail_at(std::size_t line, std::string code, const std::string& what) {
  throw ParseError(std::move(code), what, ParseError::Unit::Line, line);
}

std::vector<Word> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '"') {
      Word w{{}, true};
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char d = line[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\' && i < line.size()) w.text.push_back(line[i++]);
        else w.text.push_back(d);
      }
      if (!closed) fail_at(line_no, "malformed_statement", "unterminated string");
      words.push_back(std::move(w));
    } else {
      const std::size_t b = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '"' &&
             line[i] != '#') {
        ++i;
      }
      words.push_back({std::string(line.substr(b, i - b)), false});
    }
  }
  return words;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool is_key(std::string_view key) {
  if (is_identifier(key)) return true;
  const auto colon = key.find(':');
  return colon != std::string_view::npos && is_identifier(key.substr(0, colon)) &&
         is_identifier(key.substr(colon + 1));
}

}  // namespace

std::string normalize_term(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schematic language

SchematicDoc parse_schematic(std::string_view text) {
  SchematicDoc doc;
  bool named = false;
  std::vector<std::pair<std::size_t, std::string>> parent_refs;  // (line, parent)
  const auto lines = split_lines(text);

  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    auto w = tokenize(lines[n], line_no);
    if (w.empty()) continue;
    const std::string& keyword = w[0].text;
    auto malformed = [&](const std::string& usage) {
      fail_at(line_no, "malformed_statement", "malformed '" + keyword + "' statement, expected: " + usage);
    };
    auto ident = [&](std::size_t i, const std::string& usage) -> const std::string& {
      if (i >= w.size() || w[i].quoted || !is_identifier(w[i].text)) malformed(usage);
      return w[i].text;
    };
    static const std::set<std::string> kKeywords{"ontology", "kind",     "subkind", "individual",
                                                 "relation", "rel",      "attr"};
    if (w[0].quoted || !kKeywords.contains(keyword)) {
      fail_at(line_no, "unknown_keyword", "unknown keyword '" + keyword + "'");
    }
    if (keyword == "ontology") {
      if (named) fail_at(line_no, "malformed_statement", "ontology is already named");
      const std::string usage = "ontology NAME";
      doc.name = ident(1, usage);
      if (w.size() != 2) malformed(usage);
      named = true;
      continue;
    }
    if (!named) fail_at(line_no, "missing_ontology", "'ontology NAME' must precede other statements");

    if (keyword == "kind") {
      const std::string usage = "kind NAME [\"label\"]";
      SchematicDoc::Kind k{ident(1, usage), std::nullopt};
      if (w.size() == 3 && w[2].quoted) k.label = w[2].text;
      else if (w.size() != 2) malformed(usage);
      doc.kinds.push_back(std::move(k));
    } else if (keyword == "subkind") {
      const std::string usage = "subkind CHILD of PARENT";
      if (w.size() != 4 || w[2].quoted || w[2].text != "of") malformed(usage);
      doc.subkinds.push_back({ident(1, usage), ident(3, usage)});
      parent_refs.emplace_back(line_no, w[3].text);
    } else if (keyword == "individual") {
      const std::string usage = "individual NAME : KIND";
      std::string rest;
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i].quoted) malformed(usage);
        rest += w[i].text;
      }
      const auto colon = rest.find(':');
      if (colon == std::string::npos) malformed(usage);
      const std::string name = rest.substr(0, colon);
      const std::string kind = rest.substr(colon + 1);
      if (!is_identifier(name) || !is_identifier(kind)) malformed(usage);
      doc.individuals.push_back({name, kind});
    } else if (keyword == "relation") {
      const std::string usage = "relation NAME [from KIND] [to KIND]";
      SchematicDoc::Relation r{ident(1, usage), std::nullopt, std::nullopt};
      std::size_t i = 2;
      if (i < w.size() && !w[i].quoted && w[i].text == "from") {
        r.from_kind = ident(i + 1, usage);
        i += 2;
      }
      if (i < w.size() && !w[i].quoted && w[i].text == "to") {
        r.to_kind = ident(i + 1, usage);
        i += 2;
      }
      if (i != w.size()) malformed(usage);
      doc.relations.push_back(std::move(r));
    } else if (keyword == "rel") {
      const std::string usage = "rel RELNAME A B";
      if (w.size() != 4) malformed(usage);
      doc.links.push_back({ident(1, usage), ident(2, usage), ident(3, usage)});
    } else if (keyword == "attr") {
      const std::string usage = "attr ENTITY KEY \"value\"";
      if (w.size() != 4 || !w[3].quoted || w[2].quoted || !is_key(w[2].text)) malformed(usage);
      doc.attrs.push_back({ident(1, usage), w[2].text, w[3].text});
    }
  }

  std::set<std::string> kinds;
  for (const auto& k : doc.kinds) kinds.insert(k.name);
  for (const auto& [line_no, parent] : parent_refs) {
    if (!kinds.contains(parent)) {
      fail_at(line_no, "undefined_parent", "subkind parent '" + parent + "' is not a declared kind");
    }
  }
  return doc;
}

std::string render_schematic(const SchematicDoc& doc) {
  std::ostringstream out;
  out << "ontology " << doc.name << "\n";
  for (const auto& k : doc.kinds) {
    out << "kind " << k.name;
    if (k.label) out << " " << quote(*k.label);
    out << "\n";
  }
  for (const auto& s : doc.subkinds) out << "subkind " << s.child << " of " << s.parent << "\n";
  for (const auto& i : doc.individuals) out << "individual " << i.name << " : " << i.kind << "\n";
  for (const auto& r : doc.relations) {
    out << "relation " << r.name;
    if (r.from_kind) out << " from " << *r.from_kind;
    if (r.to_kind) out << " to " << *r.to_kind;
    out << "\n";
  }
  for (const auto& l : doc.links) out << "rel " << l.relation << " " << l.from << " " << l.to << "\n";
  for (const auto& a : doc.attrs) out << "attr " << a.entity << " " << a.key << " " << quote(a.value) << "\n";
  return out.str();
}

std::vector<Triple> lower_schematic(const SchematicDoc& doc, std::string_view prefix) {
  auto iri = [prefix](const std::string& name) {
    try {
      return Iri(std::string(prefix) + name);
    } catch (const std::invalid_argument& e) {
      throw Error("invalid_iri", e.what());
    }
  };
  std::set<Triple> out;
  for (const auto& k : doc.kinds) {
    out.insert({iri(k.name), vocab::type(), Term(vocab::rdfs_class())});
    if (k.label) out.insert({iri(k.name), vocab::label(), lit(*k.label)});
  }
  for (const auto& s : doc.subkinds) out.insert({iri(s.child), vocab::sub_class_of(), Term(iri(s.parent))});
  for (const auto& i : doc.individuals) out.insert({iri(i.name), vocab::type(), Term(iri(i.kind))});
  for (const auto& r : doc.relations) {
    out.insert({iri(r.name), vocab::type(), Term(vocab::property())});
    if (r.from_kind) out.insert({iri(r.name), vocab::domain(), Term(iri(*r.from_kind))});
    if (r.to_kind) out.insert({iri(r.name), vocab::range(), Term(iri(*r.to_kind))});
  }
  for (const auto& l : doc.links) out.insert({iri(l.from), iri(l.relation), Term(iri(l.to))});
  for (const auto& a : doc.attrs) {
    const Iri key = is_identifier(a.key) ? iri(a.key) : curie::expand(a.key);
    out.insert({iri(a.entity), key, lit(a.value)});
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Elaboration forms

std::vector<TermDescription> parse_term_form(std::string_view text) {
  std::vector<TermDescription> out;
  std::set<int> seen;
  bool first_row = true;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
    std::size_t pos = 0;
    for (int f = 0; f < 2; ++f) {
      const auto cut = line.find(sep, pos);
      if (cut == std::string_view::npos) break;
      fields.push_back(trim(line.substr(pos, cut - pos)));
      pos = cut + 1;
    }
    fields.push_back(trim(line.substr(pos)));

    const std::string& idx = fields[0];
    const bool numeric = !idx.empty() && idx.size() < 10 &&
                         std::all_of(idx.begin(), idx.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    const bool header = first_row && !numeric;
    first_row = false;
    if (header) continue;
    if (!numeric) fail_at(n + 1, "non_integer_index", "index '" + idx + "' is not an integer");
    const int index = std::stoi(idx);
    if (index <= 0) fail_at(n + 1, "non_integer_index", "index must be positive");
    if (fields.size() < 2 || fields[1].empty()) fail_at(n + 1, "malformed_row", "row has no term");
    if (!seen.insert(index).second) fail_at(n + 1, "duplicate_index", "duplicate index " + idx);
    out.push_back({index, fields[1], fields.size() > 2 ? fields[2] : std::string{}});
  }
  return out;
}

SummaryResult parse_summary_form(std::string_view text) {
  SummaryResult result;
  std::map<std::string, std::string> values;
  static const std::set<std::string> kKnown{"project", "analyst", "reviewer", "version",
                                            "purpose", "context", "viewpoint"};
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      result.warnings.push_back("line " + std::to_string(n + 1) + ": ignored line without 'Key:'");
      continue;
    }
    std::string key = trim(line.substr(0, colon));
    std::string lowered;
    for (char c : key) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (!kKnown.contains(lowered)) {
      result.warnings.push_back("line " + std::to_string(n + 1) + ": unknown key '" + key + "' ignored");
      continue;
    }
    values[lowered] = trim(line.substr(colon + 1));
  }
  auto required = [&](const char* lowered, const char* display) {
    auto it = values.find(lowered);
    if (it == values.end() || it->second.empty()) throw Error("missing_key", std::string("missing key ") + display);
    return it->second;
  };
  auto& s = result.summary;
  s.project = required("project", "Project");
  s.purpose = required("purpose", "Purpose");
  s.context = required("context", "Context");
  s.viewpoint = required("viewpoint", "Viewpoint");
  s.analyst = values["analyst"];
  s.version = values["version"];
  if (auto it = values.find("reviewer"); it != values.end() && !it->second.empty()) s.reviewer = it->second;
  return result;
}

// ---------------------------------------------------------------------------
// Pipeline

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::Ok: return "ok";
    case StageStatus::Failed: return "failed";
    case StageStatus::NotRun: return "not run";
  }
  return "?";
}

bool CaptureReport::ok() const {
  return stages.size() == kStageCount &&
         std::all_of(stages.begin(), stages.end(), [](const StageReport& s) { return s.status == StageStatus::Ok; });
}

std::string CaptureReport::render() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    out << "[" << i + 1 << "] " << stages[i].name << ": " << to_string(stages[i].status) << "\n";
    for (const auto& m : stages[i].messages) out << "    - " << m << "\n";
  }
  out << "produced triples: " << produced_triples << "\n";
  return out.str();
}

CaptureResult run_capture_pipeline(std::string_view summary_text, std::string_view terms_text,
                                   std::string_view schematic_text, std::string_view prefix) {
  CaptureResult result;
  auto& stages = result.report.stages;
  for (auto name : kStageNames) stages.push_back({std::string(name), StageStatus::NotRun, {}});

  // Each stage returns false to stop the pipeline.
  auto run = [&](std::size_t i, auto&& body) {
    try {
      body(stages[i].messages);
      stages[i].status = StageStatus::Ok;
      return true;
    } catch (const std::exception& e) {
      stages[i].messages.emplace_back(e.what());
      stages[i].status = StageStatus::Failed;
      return false;
    }
  };

  SchematicDoc doc;
  std::vector<TermDescription> terms;
  std::map<std::string, std::set<std::string>> entities_by_term;  // normalized -> schematic names

  const bool ok =
      run(0, [&](auto& msgs) {
        auto parsed = parse_summary_form(summary_text);
        msgs.push_back("project: " + parsed.summary.project);
        msgs.push_back("viewpoint: " + parsed.summary.viewpoint);
        for (auto& w : parsed.warnings) msgs.push_back("warning: " + w);
      }) &&
      run(1, [&](auto& msgs) {
        terms = parse_term_form(terms_text);
        doc = parse_schematic(schematic_text);
        msgs.push_back(std::to_string(terms.size()) + " terms, " + std::to_string(doc.kinds.size()) + " kinds, " +
                       std::to_string(doc.individuals.size()) + " individuals, " +
                       std::to_string(doc.relations.size()) + " relations");
      }) &&
      run(2, [&](auto& msgs) {
        auto note = [&](const std::string& key, const std::string& name) {
          if (!key.empty()) entities_by_term[key].insert(name);
        };
        for (const auto& k : doc.kinds) {
          note(normalize_term(k.name), k.name);
          if (k.label) note(normalize_term(*k.label), k.name);
        }
        for (const auto& i : doc.individuals) note(normalize_term(i.name), i.name);
        for (const auto& a : doc.attrs) {
          if (a.key == "rdfs:label") note(normalize_term(a.value), a.entity);
        }
        std::size_t covered = 0;
        std::vector<std::string> missing;
        for (const auto& t : terms) {
          if (entities_by_term.contains(normalize_term(t.term))) {
            ++covered;
          } else {
            missing.push_back("warning: term " + std::to_string(t.index) + " \"" + t.term +
                              "\" is not covered by any kind or individual");
          }
        }
        msgs.push_back(std::to_string(covered) + " of " + std::to_string(terms.size()) + " terms covered");
        msgs.insert(msgs.end(), missing.begin(), missing.end());
      }) &&
      run(3, [&](auto& msgs) {
        const auto lowered = lower_schematic(doc, prefix);
        result.graph.insert_all(lowered);
        std::size_t described = 0;
        for (const auto& t : terms) {
          auto it = entities_by_term.find(normalize_term(t.term));
          if (it == entities_by_term.end() || t.description.empty()) continue;
          for (const auto& name : it->second) {
            described += result.graph.insert({Iri(std::string(prefix) + name), vocab::description(), lit(t.description)});
          }
        }
        msgs.push_back("lowered " + std::to_string(lowered.size()) + " triples");
        msgs.push_back("attached " + std::to_string(described) + " term descriptions");
      }) &&
      run(4, [&](auto& msgs) {
        const auto report = schema::validate_schema(result.graph);
        for (const auto& w : report.warnings) msgs.push_back("warning: " + w.message);
        if (!report.accepted()) {
          for (const auto& e : report.errors) msgs.push_back("error: " + e.message);
          throw Error("validation_failed",
                      std::to_string(report.errors.size()) + " schema error(s)");
        }
        const auto inferred = schema::infer_types(result.graph);
        result.graph.insert_all(inferred);
        msgs.push_back("materialized " + std::to_string(inferred.size()) + " inferred type assertions");
      });
  (void)ok;
  result.report.produced_triples = result.graph.size();
  return result;
}

}  // namespace semstore::capture
