#include "coopsafe/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coopsafe/syntax.hpp"
#include "statement_util.hpp"

namespace coopsafe {

namespace detail {
// Defined in the generated default_catalog_data.cpp.
extern const char* const kDefaultCatalogText;
}  // namespace detail

void ResponseExclusivity::add(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  pairs_.emplace(std::move(a), std::move(b));
}

bool ResponseExclusivity::exclusive(std::string_view a, std::string_view b) const {
  if (b < a) std::swap(a, b);
  return pairs_.count({std::string(a), std::string(b)}) > 0;
}

const SafetyTactic* Catalog::find_tactic(std::string_view id) const {
  for (const auto& t : tactics) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const SafetyPattern* Catalog::find_pattern(std::string_view id) const {
  for (const auto& p : patterns) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

CapabilitySet Catalog::capability_vocabulary() const {
  CapabilitySet all;
  for (const auto& t : tactics) all.insert(t.provides.begin(), t.provides.end());
  return all;
}

CapabilitySet Catalog::capabilities_of(const std::set<std::string>& tactic_ids) const {
  CapabilitySet caps;
  for (const auto& id : tactic_ids) {
    if (const SafetyTactic* t = find_tactic(id)) caps.insert(t->provides.begin(), t->provides.end());
  }
  return caps;
}

Asil determine_asil(Severity s, Exposure e, Controllability c) {
  const int si = static_cast<int>(s);
  const int ei = static_cast<int>(e);
  const int ci = static_cast<int>(c);
  if (si == 0 || ei == 0 || ci == 0) return Asil::QM;
  const int sum = si + ei + ci;
  if (sum <= 6) return Asil::QM;
  return static_cast<Asil>(sum - 6);
}

Asil determine_asil(int s, int e, int c) {
  if (s < 0 || s > 3) throw std::domain_error("severity out of range: S" + std::to_string(s));
  if (e < 0 || e > 4) throw std::domain_error("exposure out of range: E" + std::to_string(e));
  if (c < 0 || c > 3) throw std::domain_error("controllability out of range: C" + std::to_string(c));
  return determine_asil(static_cast<Severity>(s), static_cast<Exposure>(e), static_cast<Controllability>(c));
}

namespace {

using detail::DiagnosticSink;
using detail::Statement;
using detail::Token;
using detail::TokenKind;

struct PendingPattern {
  SafetyPattern pattern;
  std::vector<Token> tactic_tokens;
  SourceSpan span;
};

void read_tactic(const Statement& st, Catalog& catalog, std::map<std::string, SourceSpan>& seen,
                 DiagnosticSink& sink) {
  const auto header = detail::read_header(st);
  if (!header.id) {
    sink.error(st.keyword.span, "MISSING_FIELD", "tactic needs an identifier");
    return;
  }
  SafetyTactic tactic;
  tactic.id = header.id->text;
  tactic.name = header.name ? header.name->text : tactic.id;
  for (const Statement& e : st.body) {
    const std::string& key = e.keyword.text;
    if (key == "aim") {
      if (auto t = detail::single_string(e, sink)) tactic.aim = t->text;
    } else if (key == "description") {
      if (auto t = detail::single_string(e, sink)) tactic.description = t->text;
    } else if (key == "provides") {
      for (const Token& t : detail::word_list(e, sink)) tactic.provides.insert(t.text);
    } else {
      detail::unknown_key(e, "tactic", sink);
    }
  }
  if (tactic.provides.empty()) {
    sink.error(header.id->span, "MISSING_FIELD", "tactic '" + tactic.id + "' must provide at least one capability",
               tactic.id);
  }
  if (auto [it, inserted] = seen.emplace(tactic.id, header.id->span); !inserted) {
    sink.error(header.id->span, "DUP_ID", "duplicate tactic id '" + tactic.id + "'", tactic.id);
    return;
  }
  catalog.tactics.push_back(std::move(tactic));
}

void read_pattern(const Statement& st, std::vector<PendingPattern>& patterns, std::map<std::string, SourceSpan>& seen,
                  DiagnosticSink& sink) {
  const auto header = detail::read_header(st);
  if (!header.id) {
    sink.error(st.keyword.span, "MISSING_FIELD", "pattern needs an identifier");
    return;
  }
  PendingPattern p;
  p.pattern.id = header.id->text;
  p.pattern.name = header.name ? header.name->text : p.pattern.id;
  p.span = header.id->span;
  for (const Statement& e : st.body) {
    if (e.keyword.text == "tactics") {
      auto words = detail::word_list(e, sink);
      p.tactic_tokens.insert(p.tactic_tokens.end(), words.begin(), words.end());
    } else {
      detail::unknown_key(e, "pattern", sink);
    }
  }
  if (p.tactic_tokens.empty()) {
    sink.error(p.span, "MISSING_FIELD", "pattern '" + p.pattern.id + "' must reference at least one tactic",
               p.pattern.id);
  }
  if (auto [it, inserted] = seen.emplace(p.pattern.id, p.span); !inserted) {
    sink.error(p.span, "DUP_ID", "duplicate pattern id '" + p.pattern.id + "'", p.pattern.id);
    return;
  }
  patterns.push_back(std::move(p));
}

void read_exclusive(const Statement& st, Catalog& catalog, DiagnosticSink& sink) {
  std::vector<Token> classes = detail::word_list(st, sink);
  for (const Statement& e : st.body) {
    if (e.keyword.text == "classes") {
      auto words = detail::word_list(e, sink);
      classes.insert(classes.end(), words.begin(), words.end());
    } else {
      detail::unknown_key(e, "exclusive", sink);
    }
  }
  if (classes.size() != 2 || classes[0].text == classes[1].text) {
    sink.error(st.keyword.span, "BAD_VALUE", "'exclusive' declares exactly two distinct response classes");
    return;
  }
  catalog.exclusivity.add(classes[0].text, classes[1].text);
}

void read_response(const Statement& st, Catalog& catalog, DiagnosticSink& sink) {
  const auto header = detail::read_header(st);
  if (!header.id || !header.rest.empty()) {
    sink.error(st.keyword.span, "BAD_VALUE", "'response' expects an identifier and an optional description");
    return;
  }
  catalog.responses[header.id->text] = header.name ? header.name->text : std::string{};
}

}  // namespace

Catalog load_catalog(std::string_view text, const std::string& file_name) {
  Diagnostics diagnostics;
  DiagnosticSink sink(diagnostics);
  const syntax::Document doc = syntax::parse_document(text, file_name, diagnostics);

  Catalog catalog;
  std::vector<PendingPattern> pending;
  std::map<std::string, SourceSpan> tactic_ids;
  std::map<std::string, SourceSpan> pattern_ids;
  for (const Statement& st : doc.statements) {
    const std::string& kind = st.keyword.text;
    if (kind == "tactic") {
      read_tactic(st, catalog, tactic_ids, sink);
    } else if (kind == "pattern") {
      read_pattern(st, pending, pattern_ids, sink);
    } else if (kind == "exclusive") {
      read_exclusive(st, catalog, sink);
    } else if (kind == "response") {
      read_response(st, catalog, sink);
    } else {
      sink.error(st.keyword.span, "UNKNOWN_KIND", "unexpected '" + kind + "' in catalog file");
    }
  }

  if (!has_errors(diagnostics) && catalog.tactics.empty()) {
    sink.error(SourceSpan{file_name, 1, 1, 0}, "EMPTY_CATALOG", "catalog must define at least one tactic");
  }

  for (PendingPattern& p : pending) {
    for (const Token& t : p.tactic_tokens) {
      if (!tactic_ids.count(t.text)) {
        sink.error(t.span, "UNKNOWN_TACTIC",
                   "pattern '" + p.pattern.id + "' references unknown tactic '" + t.text + "'", p.pattern.id);
        continue;
      }
      if (std::find(p.pattern.tactics.begin(), p.pattern.tactics.end(), t.text) == p.pattern.tactics.end()) {
        p.pattern.tactics.push_back(t.text);
      }
    }
    std::sort(p.pattern.tactics.begin(), p.pattern.tactics.end());
    catalog.patterns.push_back(std::move(p.pattern));
  }

  if (has_errors(diagnostics)) {
    sort_diagnostics(diagnostics);
    throw InputError(std::move(diagnostics));
  }
  std::sort(catalog.tactics.begin(), catalog.tactics.end(),
            [](const SafetyTactic& a, const SafetyTactic& b) { return a.id < b.id; });
  std::sort(catalog.patterns.begin(), catalog.patterns.end(),
            [](const SafetyPattern& a, const SafetyPattern& b) { return a.id < b.id; });
  return catalog;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("IO", "cannot read catalog file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_catalog(buffer.str(), path);
}

std::string_view default_catalog_text() { return detail::kDefaultCatalogText; }

const Catalog& default_catalog() {
  static const Catalog catalog = load_catalog(default_catalog_text(), "<bundled catalog>");
  return catalog;
}

}  // namespace coopsafe
