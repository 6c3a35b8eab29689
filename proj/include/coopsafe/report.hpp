#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coopsafe/catalog.hpp"
#include "coopsafe/conformance.hpp"
#include "coopsafe/dsl.hpp"
#include "coopsafe/fta.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe {

inline constexpr std::string_view kToolName = "coopsafe";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Pipeline stages, in execution order. Each stage includes its predecessors.
enum class Stage { Validate, Hara, Goals, Fsrs, Conflicts, Assess, Report };

std::string_view to_string(Stage s);

struct Analysis {
  Stage stage = Stage::Report;
  Model model;
  Catalog catalog;
  Diagnostics warnings;
  std::vector<Hazard> hazards;
  std::map<Perspective, std::size_t> raw_events;
  std::vector<HazardousEvent> events;
  std::vector<SafetyGoal> goals;
  std::vector<FaultTree> trees;
  fta::FsrDerivation derivation;
  conformance::ConflictReport conflicts;
  std::vector<conformance::AssessmentVerdict> verdicts;

  bool reached(Stage s) const { return stage >= s; }
};

/// Runs the analysis chain on a validated model up to `stage`.
/// Throws AnalysisError when a stage precondition fails.
Analysis analyze(Model model, Catalog catalog, Stage stage);

struct PerspectiveCount {
  std::size_t vehicular = 0;
  std::size_t cooperative = 0;
  std::size_t total() const { return vehicular + cooperative; }
  void add(Perspective p, std::size_t n = 1);
  bool operator==(const PerspectiveCount&) const = default;
};

struct Counts {
  PerspectiveCount functions;
  PerspectiveCount hazards;
  PerspectiveCount events_raw;
  PerspectiveCount events;
  PerspectiveCount goals;
  std::map<Asil, std::size_t> goals_by_asil;
  PerspectiveCount goals_asil_d;
  PerspectiveCount fsrs;
  std::map<Asil, std::size_t> fsrs_by_asil;
  PerspectiveCount fsrs_asil_d;
  std::map<std::string, std::size_t> fsrs_by_component;
  PerspectiveCount fulfilled;
  PerspectiveCount unfulfilled;
  std::size_t comparisons_grouped = 0;
  std::size_t comparisons_naive = 0;
  std::size_t conflicts = 0;

  bool operator==(const Counts&) const = default;
};

Counts compute_counts(const Analysis& analysis);

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct AssessmentReport {
  std::string tool_version{kToolVersion};
  std::vector<InputDigest> inputs;
  InputDigest catalog;
  std::optional<std::string> timestamp;
  Analysis analysis;
  Counts counts;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> model_paths;
  /// Bundled catalog when empty.
  std::optional<std::filesystem::path> catalog_path;
  bool timestamps = false;
  Stage stage = Stage::Report;
};

/// Reads, parses and validates the inputs, then analyzes them. Throws
/// InputError when any input fails to read, parse or validate; the
/// diagnostics are attached. Warnings are collected in the analysis.
AssessmentReport run_pipeline(const PipelineConfig& config);

/// Assembles a report around an existing analysis.
AssessmentReport make_report(Analysis analysis, std::vector<InputDigest> inputs, InputDigest catalog);

std::string sha256_hex(std::string_view data);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json to_json(const AssessmentReport& report);
std::string render_json(const AssessmentReport& report);
std::string render_markdown(const AssessmentReport& report);
/// format is "json" or "markdown"; anything else throws UsageError.
std::string render(const AssessmentReport& report, std::string_view format);

}  // namespace coopsafe
