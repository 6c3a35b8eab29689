#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coopsafe/diagnostics.hpp"

namespace coopsafe::syntax {

enum class TokenKind { Word, String, Pipe, LBrace, RBrace, Semicolon, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // unescaped for strings
  SourceSpan span;
};

/// `keyword arg* ( ";" | "{" statement* "}" )`. The terminating ";" may be
/// omitted directly before a closing brace.
struct Statement {
  Token keyword;
  std::vector<Token> args;
  bool has_body = false;
  std::vector<Statement> body;
};

struct Document {
  std::string file;
  std::vector<Statement> statements;
};

/// Tokenizes UTF-8 text. CRLF is normalized to LF before spans are
/// computed; `#` starts a line comment.
std::vector<Token> tokenize(std::string_view text, const std::string& file, Diagnostics& diagnostics);

/// Parses one file into statements. Stops at the first syntax error.
Document parse_document(std::string_view text, const std::string& file, Diagnostics& diagnostics);

}  // namespace coopsafe::syntax
