#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semstore/graph.hpp"

namespace semstore::capture {

// Textual schematic document (`.onts`). Names are identifiers
// [A-Za-z_][A-Za-z0-9_]*.
struct SchematicDoc {
  struct Kind {
    std::string name;
    std::optional<std::string> label;
    friend bool operator==(const Kind&, const Kind&) = default;
  };
  struct Subkind {
    std::string child;
    std::string parent;
    friend bool operator==(const Subkind&, const Subkind&) = default;
  };
  struct Individual {
    std::string name;
    std::string kind;
    friend bool operator==(const Individual&, const Individual&) = default;
  };
  struct Relation {
    std::string name;
    std::optional<std::string> from_kind;
    std::optional<std::string> to_kind;
    friend bool operator==(const Relation&, const Relation&) = default;
  };
  struct Link {
    std::string relation;
    std::string from;
    std::string to;
    friend bool operator==(const Link&, const Link&) = default;
  };
  struct Attr {
    std::string entity;
    std::string key;  // identifier, or a CURIE such as rdfs:label
    std::string value;
    friend bool operator==(const Attr&, const Attr&) = default;
  };

  std::string name;
  std::vector<Kind> kinds;
  std::vector<Subkind> subkinds;
  std::vector<Individual> individuals;
  std::vector<Relation> relations;
  std::vector<Link> links;
  std::vector<Attr> attrs;

  friend bool operator==(const SchematicDoc&, const SchematicDoc&) = default;
};

// All-or-nothing; throws ParseError with a line number.
SchematicDoc parse_schematic(std::string_view text);
// Canonical text; parse_schematic(render_schematic(d)) == d.
std::string render_schematic(const SchematicDoc& doc);
// Sorted, duplicate-free triples. `prefix` is the namespace IRI prepended to
// every schematic name.
std::vector<Triple> lower_schematic(const SchematicDoc& doc, std::string_view prefix);

struct TermDescription {
  int index = 0;
  std::string term;
  std::string description;
  friend bool operator==(const TermDescription&, const TermDescription&) = default;
};

// Tab- or comma-separated `index, term, description` rows; an optional
// header row is skipped.
std::vector<TermDescription> parse_term_form(std::string_view text);

struct DescriptionSummary {
  std::string project;
  std::string analyst;
  std::optional<std::string> reviewer;
  std::string version;
  std::string purpose;
  std::string context;
  std::string viewpoint;
};

struct SummaryResult {
  DescriptionSummary summary;
  std::vector<std::string> warnings;
};

// `Key: value` lines. Missing Project/Purpose/Context/Viewpoint throws
// Error("missing_key"); unknown keys become warnings.
SummaryResult parse_summary_form(std::string_view text);

enum class StageStatus { Ok, Failed, NotRun };
std::string_view to_string(StageStatus s);

struct StageReport {
  std::string name;
  StageStatus status = StageStatus::NotRun;
  std::vector<std::string> messages;
};

struct CaptureReport {
  std::vector<StageReport> stages;  // always the five activities, in order
  std::size_t produced_triples = 0;

  bool ok() const;
  std::string render() const;
};

struct CaptureResult {
  Graph graph;
  CaptureReport report;
};

// Organizing and Scoping -> Data Collection -> Data Analysis -> Initial
// Ontology Development -> Ontology Refinement and Validation. Stops at the
// first failed stage; never throws for bad input.
CaptureResult run_capture_pipeline(std::string_view summary, std::string_view terms,
                                   std::string_view schematic, std::string_view prefix);

// Lowercase alphanumerics only; used to match term-form entries to
// schematic labels and names.
std::string normalize_term(std::string_view s);

}  // namespace semstore::capture
