#include "coopsafe/diagnostics.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace coopsafe {

bool has_errors(const Diagnostics& diagnostics) { return count_errors(diagnostics) > 0; }

std::size_t count_errors(const Diagnostics& diagnostics) {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.level == DiagnosticLevel::Error;
  }));
}

void sort_diagnostics(Diagnostics& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.file, a.span.line, a.span.column, a.code, a.message) <
           std::tie(b.span.file, b.span.line, b.span.column, b.code, b.message);
  });
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  if (!d.span.file.empty()) {
    out << d.span.file;
    if (d.span.valid()) out << ':' << d.span.line << ':' << d.span.column;
    out << ": ";
  }
  out << (d.level == DiagnosticLevel::Error ? "error" : "warning") << '[' << d.code << "]: " << d.message;
  return out.str();
}

namespace {

std::string summarize(const Diagnostics& diagnostics) {
  if (diagnostics.empty()) return "input error";
  std::string text = format_diagnostic(diagnostics.front());
  if (diagnostics.size() > 1) text += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
  return text;
}

std::string join_details(const std::string& code, const std::vector<std::string>& details) {
  std::string text = code;
  for (std::size_t i = 0; i < details.size(); ++i) {
    text += (i == 0 ? ": " : "; ");
    text += details[i];
  }
  return text;
}

}  // namespace

InputError::InputError(Diagnostics diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

InputError::InputError(std::string code, std::string message)
    : InputError(Diagnostics{Diagnostic{DiagnosticLevel::Error, {}, std::move(code), {}, std::move(message)}}) {}

AnalysisError::AnalysisError(std::string code, std::vector<std::string> details)
    : std::runtime_error(join_details(code, details)), code_(std::move(code)), details_(std::move(details)) {}

}  // namespace coopsafe
