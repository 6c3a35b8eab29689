#include "coopsafe/syntax.hpp"

#include <cctype>

namespace coopsafe::syntax {

namespace {

bool is_word_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*';
}

bool is_word_char(char c) { return is_word_start(c) || c == '-' || c == '.' || c == '/'; }

bool is_continuation_byte(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    out.push_back(text[i]);
  }
  return out;
}

class Lexer {
 public:
  Lexer(std::string text, const std::string& file) : text_(std::move(text)), file_(file) {}

  bool run(std::vector<Token>& tokens, Diagnostics& diagnostics) {
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) {
        tokens.push_back(Token{TokenKind::End, "", span_at(line_, column_, 0)});
        return true;
      }
      const char c = text_[pos_];
      const int line = line_;
      const int column = column_;
      if (c == '{' || c == '}' || c == ';' || c == '|') {
        advance();
        const TokenKind kind = c == '{'   ? TokenKind::LBrace
                               : c == '}' ? TokenKind::RBrace
                               : c == ';' ? TokenKind::Semicolon
                                          : TokenKind::Pipe;
        tokens.push_back(Token{kind, std::string(1, c), span_at(line, column, 1)});
      } else if (c == '"') {
        std::string value;
        if (!read_string(value)) {
          diagnostics.push_back(Diagnostic{DiagnosticLevel::Error, span_at(line, column, 1), "SYNTAX", {},
                                           "unterminated string literal"});
          return false;
        }
        tokens.push_back(Token{TokenKind::String, std::move(value), span_at(line, column, column_ - column)});
      } else if (is_word_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_word_char(text_[pos_])) advance();
        tokens.push_back(
            Token{TokenKind::Word, text_.substr(start, pos_ - start), span_at(line, column, column_ - column)});
      } else {
        diagnostics.push_back(Diagnostic{DiagnosticLevel::Error, span_at(line, column, 1), "SYNTAX", {},
                                         std::string("unexpected character '") + c + "'"});
        return false;
      }
    }
  }

 private:
  SourceSpan span_at(int line, int column, int length) const { return SourceSpan{file_, line, column, length}; }

  void advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if (!is_continuation_byte(c)) {
      ++column_;
    }
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  bool read_string(std::string& value) {
    advance();  // opening quote
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') return false;
      if (c == '"') {
        advance();
        return true;
      }
      if (c == '\\' && pos_ + 1 < text_.size()) {
        advance();
        const char e = text_[pos_];
        value.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
        advance();
        continue;
      }
      value.push_back(c);
      advance();
    }
    return false;
  }

  std::string text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct SyntaxFailure {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::vector<Statement> parse_all() {
    std::vector<Statement> statements;
    parse_block_contents(statements, false);
    return statements;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& at, std::string message) {
    throw SyntaxFailure{Diagnostic{DiagnosticLevel::Error, at.span, "SYNTAX", {}, std::move(message)}};
  }

  void parse_block_contents(std::vector<Statement>& out, bool nested) {
    while (true) {
      const Token& t = peek();
      switch (t.kind) {
        case TokenKind::End:
          if (nested) fail(t, "expected '}' before end of file");
          return;
        case TokenKind::RBrace:
          if (!nested) fail(t, "unexpected '}'");
          return;
        case TokenKind::Semicolon:
          take();
          break;
        case TokenKind::Word:
          out.push_back(parse_statement());
          break;
        default:
          fail(t, "expected a keyword, found '" + t.text + "'");
      }
    }
  }

  Statement parse_statement() {
    Statement st;
    st.keyword = take();
    while (peek().kind == TokenKind::Word || peek().kind == TokenKind::String || peek().kind == TokenKind::Pipe) {
      st.args.push_back(take());
    }
    const Token& t = peek();
    if (t.kind == TokenKind::Semicolon) {
      take();
    } else if (t.kind == TokenKind::LBrace) {
      take();
      st.has_body = true;
      parse_block_contents(st.body, true);
      take();  // closing brace, guaranteed by parse_block_contents
      if (peek().kind == TokenKind::Semicolon) take();
    } else if (t.kind == TokenKind::RBrace) {
      // last entry of a block may omit its ';'
    } else {
      fail(t, "expected ';' or '{' after '" + st.keyword.text + "'");
    }
    return st;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::string& file, Diagnostics& diagnostics) {
  std::vector<Token> tokens;
  Lexer lexer(normalize_newlines(text), file);
  if (!lexer.run(tokens, diagnostics)) tokens.clear();
  return tokens;
}

Document parse_document(std::string_view text, const std::string& file, Diagnostics& diagnostics) {
  Document doc;
  doc.file = file;
  const std::size_t before = diagnostics.size();
  std::vector<Token> tokens = tokenize(text, file, diagnostics);
  if (diagnostics.size() != before || tokens.empty()) return doc;
  try {
    doc.statements = Parser(std::move(tokens)).parse_all();
  } catch (const SyntaxFailure& failure) {
    diagnostics.push_back(failure.diagnostic);
  }
  return doc;
}

}  // namespace coopsafe::syntax
