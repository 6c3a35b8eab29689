#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "coopsafe/report.hpp"
#include "support/model_gen.hpp"

namespace coopsafe::testing {

inline std::filesystem::path fixture_dir() { return source_path("fixtures/platooning"); }

inline AssessmentReport fixture_report(Stage stage = Stage::Report) {
  PipelineConfig config;
  config.model_paths.push_back(fixture_dir());
  config.stage = stage;
  return run_pipeline(config);
}

/// Copies the fixture into `dir`, replacing `from` with `to` in `file`.
/// Throws std::logic_error when the anchor text is missing.
inline void copy_fixture_with(const TempDir& dir, const std::string& file, const std::string& from,
                              const std::string& to) {
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir())) {
    if (entry.path().extension() != ".coop") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (entry.path().filename() == file) {
      const auto at = text.find(from);
      if (at == std::string::npos) throw std::logic_error("anchor not found in " + file + ": " + from);
      text.replace(at, from.size(), to);
    }
    dir.write(entry.path().filename().string(), text);
  }
}

}  // namespace coopsafe::testing
