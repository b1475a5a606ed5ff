#include "semstore/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "semstore/error.hpp"

namespace semstore::io {

namespace pt = boost::property_tree;

// ---------------------------------------------------------------------------
// Canonical triple lines

namespace {

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
}

void append_term(std::string& out, const Term& t) {
  if (const Iri* iri = t.as_iri()) {
    out += '<';
    out += iri->str();
    out += '>';
    return;
  }
  const Literal& l = t.literal();
  out += '"';
  append_escaped(out, l.lexical);
  out += '"';
  if (l.datatype) {
    out += "^^<";
    out += l.datatype->str();
    out += '>';
  }
}

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  Triple triple() {
    Iri s = iri("subject");
    Iri p = iri("predicate");
    skip_space();
    Term o = peek() == '"' ? Term(literal()) : Term(iri("object"));
    skip_space();
    if (peek() != '.') fail("expected '.' after object");
    ++pos_;
    skip_space();
    if (pos_ != line_.size()) fail("trailing characters after '.'");
    return {std::move(s), std::move(p), std::move(o)};
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax_error", what, ParseError::Unit::Line, line_no_);
  }
  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  Iri iri(const char* what) {
    skip_space();
    if (peek() != '<') fail(std::string("expected '<' to open ") + what);
    const auto close = line_.find('>', pos_);
    if (close == std::string_view::npos) fail(std::string("unterminated IRI in ") + what);
    std::string text(line_.substr(pos_ + 1, close - pos_ - 1));
    pos_ = close + 1;
    try {
      return Iri(std::move(text));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  Literal literal() {
    ++pos_;  // opening quote
    Literal l;
    for (;;) {
      if (pos_ >= line_.size()) fail("unterminated literal");
      const char c = line_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        l.lexical.push_back(c);
        continue;
      }
      if (pos_ >= line_.size()) fail("dangling escape");
      switch (line_[pos_++]) {
        case '\\': l.lexical.push_back('\\'); break;
        case '"': l.lexical.push_back('"'); break;
        case 'n': l.lexical.push_back('\n'); break;
        case 'r': l.lexical.push_back('\r'); break;
        case 't': l.lexical.push_back('\t'); break;
        default: fail("unknown escape sequence");
      }
    }
    if (line_.substr(pos_).starts_with("^^")) {
      pos_ += 2;
      l.datatype = iri("datatype");
    }
    return l;
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_triple(const Triple& t) {
  std::string out;
  append_term(out, Term(t.subject));
  out += ' ';
  append_term(out, Term(t.predicate));
  out += ' ';
  append_term(out, t.object);
  out += " .";
  return out;
}

std::string emit_triples(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g.triples()) lines.push_back(format_triple(t));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

Graph parse_triples(std::string_view text) {
  Graph g;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    g.insert(LineReader(line, line_no).triple());
  }
  return g;
}

// ---------------------------------------------------------------------------
// RDF/XML subset

namespace {

constexpr const char* kAttrs = "<xmlattr>";
constexpr const char* kComment = "<xmlcomment>";

bool is_ncname(std::string_view s) {
  if (s.empty()) return false;
  auto start_ok = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto rest_ok = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c == '.'; };
  if (!start_ok(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return rest_ok(static_cast<unsigned char>(c)); });
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) out += "&quot;";
        else out.push_back(c);
        break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Document part of a base IRI (without fragment); rdf:ID="x" means doc#x.
std::string_view base_document(std::string_view base) {
  const auto hash = base.find('#');
  return hash == std::string_view::npos ? base : base.substr(0, hash);
}

std::optional<std::string> local_id(const Iri& iri, std::string_view base) {
  const auto doc = base_document(base);
  const std::string& s = iri.str();
  if (s.size() <= doc.size() + 1 || !s.starts_with(doc) || s[doc.size()] != '#') return std::nullopt;
  std::string local = s.substr(doc.size() + 1);
  if (!is_ncname(local)) return std::nullopt;
  return local;
}

struct QName {
  std::string ns;
  std::string local;
};

std::optional<QName> split_predicate(const Iri& p) {
  const std::string& s = p.str();
  const auto cut = s.find_last_of("#/");
  if (cut == std::string::npos) return std::nullopt;
  QName q{s.substr(0, cut + 1), s.substr(cut + 1)};
  if (!is_ncname(q.local)) return std::nullopt;
  return q;
}

const std::map<std::string, std::string>& fixed_prefixes() {
  static const std::map<std::string, std::string> m{
      {"rdf", std::string(ns::kRdf)}, {"rdfs", std::string(ns::kRdfs)}, {"store", std::string(ns::kStore)}};
  return m;
}

}  // namespace

std::string emit_rdfxml(const Graph& g, std::string_view base) {
  // Namespace table: fixed prefixes first, then ns0, ns1, ... in IRI order.
  std::map<std::string, std::string> prefix_of;  // namespace -> prefix
  for (const auto& [prefix, uri] : fixed_prefixes()) prefix_of[uri] = prefix;
  std::set<std::string> used{std::string(ns::kRdf)};
  std::set<std::string> extra;
  for (const auto& t : g.triples()) {
    auto q = split_predicate(t.predicate);
    if (!q) {
      throw Error("unrepresentable_predicate",
                  "predicate cannot be written as an XML element name: " + t.predicate.str());
    }
    used.insert(q->ns);
    if (!prefix_of.contains(q->ns)) extra.insert(q->ns);
  }
  std::size_t n = 0;
  for (const auto& uri : extra) prefix_of[uri] = "ns" + std::to_string(n++);

  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n<rdf:RDF";
  std::vector<std::pair<std::string, std::string>> decls;
  for (const auto& uri : used) decls.emplace_back(prefix_of.at(uri), uri);
  std::sort(decls.begin(), decls.end(), [](const auto& a, const auto& b) {
    const bool fa = fixed_prefixes().contains(a.first);
    const bool fb = fixed_prefixes().contains(b.first);
    if (fa != fb) return fa;
    return a.first < b.first;
  });
  for (const auto& [prefix, uri] : decls) {
    out << "\n    xmlns:" << prefix << "=\"" << xml_escape(uri, true) << "\"";
  }
  out << "\n    xml:base=\"" << xml_escape(base, true) << "\">\n";

  auto resource_ref = [&](const Iri& iri) {
    if (auto id = local_id(iri, base)) return "#" + *id;
    return iri.str();
  };

  auto it = g.triples().begin();
  while (it != g.triples().end()) {
    const Iri subject = it->subject;
    std::vector<const Triple*> props;
    for (; it != g.triples().end() && it->subject == subject; ++it) props.push_back(&*it);
    std::stable_partition(props.begin(), props.end(),
                          [](const Triple* t) { return t->predicate == vocab::type(); });

    out << "  <rdf:Description ";
    if (auto id = local_id(subject, base)) {
      out << "rdf:ID=\"" << xml_escape(*id, true) << "\">\n";
    } else {
      out << "rdf:about=\"" << xml_escape(subject.str(), true) << "\">\n";
    }
    for (const Triple* t : props) {
      const auto q = *split_predicate(t->predicate);
      const std::string name = prefix_of.at(q.ns) + ":" + q.local;
      out << "    <" << name;
      if (const Iri* o = t->object.as_iri()) {
        out << " rdf:resource=\"" << xml_escape(resource_ref(*o), true) << "\"/>\n";
        continue;
      }
      const Literal& l = t->object.literal();
      if (l.datatype) out << " rdf:datatype=\"" << xml_escape(l.datatype->str(), true) << "\"";
      out << ">" << xml_escape(l.lexical, false) << "</" << name << ">\n";
    }
    out << "  </rdf:Description>\n";
  }
  out << "</rdf:RDF>\n";
  return out.str();
}

namespace {

pt::ptree read_xml_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("syntax_error", e.message(), ParseError::Unit::Line, e.line());
  }
  return tree;
}

[[noreturn]] void unsupported(const std::string& what) {
  throw Error("unsupported_construct", "unsupported construct: " + what);
}

// The single element child of a document tree (comments skipped).
const std::pair<const std::string, pt::ptree>& only_root(const pt::ptree& doc) {
  const std::pair<const std::string, pt::ptree>* root = nullptr;
  for (const auto& child : doc) {
    if (child.first == kComment) continue;
    if (root != nullptr) unsupported("multiple root elements");
    root = &child;
  }
  if (root == nullptr) throw Error("syntax_error", "document has no root element");
  return *root;
}

class RdfXmlReader {
 public:
  Graph read(std::string_view text) {
    const auto doc = read_xml_tree(text);
    const auto& [root_name, root] = only_root(doc);
    if (root_name != "rdf:RDF") unsupported("root element <" + root_name + ">");

    if (auto attrs = root.get_child_optional(kAttrs)) {
      for (const auto& [name, value] : *attrs) {
        if (name == "xml:base") {
          base_ = value.data();
        } else if (name.starts_with("xmlns:")) {
          const std::string prefix = name.substr(6);
          if (!fixed_prefixes().contains(prefix)) prefixes_[prefix] = value.data();
        } else {
          unsupported("attribute " + name + " on <rdf:RDF>");
        }
      }
    }
    for (const auto& [p, uri] : fixed_prefixes()) prefixes_[p] = uri;

    Graph g;
    for (const auto& [name, node] : root) {
      if (name == kAttrs || name == kComment) continue;
      if (name != "rdf:Description") unsupported("element <" + name + ">");
      description(node, g);
    }
    if (!is_blank(root.data())) unsupported("text content inside <rdf:RDF>");
    return g;
  }

 private:
  Iri resolve(const std::string& ref) const {
    try {
      if (ref.starts_with("#")) return Iri(std::string(base_document(base_)) + ref);
      return Iri(ref);
    } catch (const std::invalid_argument& e) {
      throw Error("invalid_iri", e.what());
    }
  }

  Iri qualified(const std::string& element) const {
    const auto colon = element.find(':');
    if (colon == std::string::npos) unsupported("unqualified element <" + element + ">");
    auto it = prefixes_.find(element.substr(0, colon));
    if (it == prefixes_.end()) unsupported("undeclared prefix in <" + element + ">");
    return resolve(it->second + element.substr(colon + 1));
  }

  void description(const pt::ptree& node, Graph& g) const {
    std::optional<Iri> subject;
    if (auto attrs = node.get_child_optional(kAttrs)) {
      for (const auto& [name, value] : *attrs) {
        if (subject) unsupported("multiple identifying attributes on <rdf:Description>");
        if (name == "rdf:ID") subject = resolve("#" + value.data());
        else if (name == "rdf:about") subject = resolve(value.data());
        else unsupported("attribute " + name + " on <rdf:Description>");
      }
    }
    if (!subject) unsupported("<rdf:Description> without rdf:ID or rdf:about");
    if (!is_blank(node.data())) unsupported("text content inside <rdf:Description>");

    for (const auto& [name, prop] : node) {
      if (name == kAttrs || name == kComment) continue;
      if (name == "rdf:Description") unsupported("nested <rdf:Description>");
      const Iri predicate = qualified(name);
      std::optional<std::string> resource;
      std::optional<Iri> datatype;
      for (const auto& [child_name, child] : prop) {
        if (child_name == kComment) continue;
        if (child_name != kAttrs) unsupported("element <" + child_name + "> nested inside <" + name + ">");
        for (const auto& [attr, value] : child) {
          if (attr == "rdf:resource") resource = value.data();
          else if (attr == "rdf:datatype") datatype = resolve(value.data());
          else unsupported("attribute " + attr + " on <" + name + ">");
        }
      }
      if (resource) {
        if (datatype || !prop.data().empty()) unsupported("<" + name + "> with both a resource and content");
        g.insert({*subject, predicate, Term(resolve(*resource))});
      } else {
        g.insert({*subject, predicate, Term(Literal{prop.data(), datatype})});
      }
    }
  }

  std::string base_{ns::kStore};
  std::map<std::string, std::string> prefixes_;
};

}  // namespace

Graph parse_rdfxml_subset(std::string_view text) { return RdfXmlReader{}.read(text); }

// ---------------------------------------------------------------------------
// Flat XML records

namespace {
std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

Iri make_iri(std::string text) {
  try {
    return Iri(std::move(text));
  } catch (const std::invalid_argument& e) {
    throw Error("invalid_iri", e.what());
  }
}
}  // namespace

std::vector<Triple> parse_flat_xml(std::string_view text, std::string_view id_attribute,
                                   std::string_view prefix) {
  const auto doc = read_xml_tree(text);
  const auto& [root_name, root] = only_root(doc);
  const std::string id_path = std::string(kAttrs) + "." + std::string(id_attribute);
  auto id = root.get_optional<std::string>(pt::ptree::path_type(id_path, '.'));
  if (!id) {
    throw Error("missing_id_attribute",
                "root element <" + root_name + "> has no attribute '" + std::string(id_attribute) + "'");
  }
  const Iri subject = make_iri(std::string(prefix) + trim(*id));

  std::vector<Triple> out;
  for (const auto& [name, child] : root) {
    if (name == kAttrs || name == kComment) continue;
    for (const auto& [grand, _] : child) {
      if (grand != kAttrs && grand != kComment) {
        throw Error("non_leaf_child", "child <" + name + "> contains nested element <" + grand + ">");
      }
    }
    out.push_back({subject, make_iri(std::string(prefix) + name), lit(trim(child.data()))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("io_error", "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace semstore::io
