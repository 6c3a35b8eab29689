#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace coopsafe {

/// 1-based location of a token inside an input file.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int length = 0;

  bool valid() const { return line > 0 && column > 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class DiagnosticLevel { Error, Warning };

struct Diagnostic {
  DiagnosticLevel level = DiagnosticLevel::Error;
  SourceSpan span;
  std::string code;
  std::string entity;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diagnostics);
std::size_t count_errors(const Diagnostics& diagnostics);

/// Orders diagnostics by (file, line, column, code) so output is stable.
void sort_diagnostics(Diagnostics& diagnostics);

/// "file:line:col: error[CODE]: message"
std::string format_diagnostic(const Diagnostic& diagnostic);

/// Raised when inputs cannot be read or fail validation. Carries the
/// diagnostics that caused the failure.
class InputError : public std::runtime_error {
 public:
  explicit InputError(Diagnostics diagnostics);
  InputError(std::string code, std::string message);

  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Raised by analysis stages when their preconditions do not hold
/// (missing ratings, unannotated basic events, overlapping merge groups).
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string code, std::vector<std::string> details);

  const std::string& code() const { return code_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::string code_;
  std::vector<std::string> details_;
};

}  // namespace coopsafe
