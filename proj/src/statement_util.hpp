#pragma once

// Helpers shared by the model and catalog interpreters.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopsafe/diagnostics.hpp"
#include "coopsafe/model.hpp"
#include "coopsafe/syntax.hpp"

namespace coopsafe::detail {

using syntax::Statement;
using syntax::Token;
using syntax::TokenKind;

class DiagnosticSink {
 public:
  explicit DiagnosticSink(Diagnostics& out) : out_(out) {}

  void error(const SourceSpan& span, std::string code, std::string message, std::string entity = {}) {
    out_.push_back(Diagnostic{DiagnosticLevel::Error, span, std::move(code), std::move(entity), std::move(message)});
  }
  void warning(const SourceSpan& span, std::string code, std::string message, std::string entity = {}) {
    out_.push_back(
        Diagnostic{DiagnosticLevel::Warning, span, std::move(code), std::move(entity), std::move(message)});
  }

 private:
  Diagnostics& out_;
};

/// `kind [ident] ["name"]` header of a block.
struct Header {
  std::optional<Token> id;
  std::optional<Token> name;
  std::vector<Token> rest;
};

inline Header read_header(const Statement& st) {
  Header h;
  std::size_t i = 0;
  if (i < st.args.size() && st.args[i].kind == TokenKind::Word) h.id = st.args[i++];
  if (i < st.args.size() && st.args[i].kind == TokenKind::String) h.name = st.args[i++];
  for (; i < st.args.size(); ++i) h.rest.push_back(st.args[i]);
  return h;
}

/// Lower-case identifier made from free text: "Vehicle control" -> "vehicle_control".
inline std::string slugify(std::string_view text) {
  std::string out;
  bool pending_sep = false;
  for (char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(u)));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

inline Ref ref_of(const Token& t) { return Ref{t.text, t.span}; }

/// Exactly one word argument, e.g. `perspective vehicular;`.
inline std::optional<Token> single_word(const Statement& st, DiagnosticSink& sink) {
  if (st.args.size() != 1 || st.args[0].kind != TokenKind::Word) {
    sink.error(st.keyword.span, "BAD_VALUE", "'" + st.keyword.text + "' expects exactly one identifier");
    return std::nullopt;
  }
  return st.args[0];
}

inline std::optional<Token> single_string(const Statement& st, DiagnosticSink& sink) {
  if (st.args.size() != 1 || st.args[0].kind != TokenKind::String) {
    sink.error(st.keyword.span, "BAD_VALUE", "'" + st.keyword.text + "' expects exactly one quoted string");
    return std::nullopt;
  }
  return st.args[0];
}

inline std::vector<Token> word_list(const Statement& st, DiagnosticSink& sink) {
  std::vector<Token> words;
  for (const Token& t : st.args) {
    if (t.kind != TokenKind::Word) {
      sink.error(t.span, "BAD_VALUE", "'" + st.keyword.text + "' expects identifiers");
      continue;
    }
    words.push_back(t);
  }
  return words;
}

inline void no_body(const Statement& st, DiagnosticSink& sink) {
  if (st.has_body) sink.error(st.keyword.span, "SYNTAX", "'" + st.keyword.text + "' does not take a block");
}

inline void unknown_key(const Statement& st, std::string_view block, DiagnosticSink& sink) {
  sink.error(st.keyword.span, "UNKNOWN_KEY",
             "unknown entry '" + st.keyword.text + "' in " + std::string(block) + " block");
}

/// Parses "S3"/"3" style class values with the given letter prefix.
inline std::optional<int> parse_class(const Token& t, char prefix, int max) {
  std::string_view v = t.text;
  if (!v.empty() && (v[0] == prefix || v[0] == static_cast<char>(std::tolower(prefix)))) v.remove_prefix(1);
  if (v.size() != 1 || v[0] < '0' || v[0] > '9') return std::nullopt;
  const int n = v[0] - '0';
  if (n > max) return std::nullopt;
  return n;
}

}  // namespace coopsafe::detail
