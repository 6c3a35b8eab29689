#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "coopsafe/dsl.hpp"
#include "coopsafe/report.hpp"

namespace coopsafe::testing {

/// Builds a random but well-formed model in DSL form: one vehicle item, one
/// cooperative item, functions in both perspectives, a feasibility matrix,
/// ratings covering every class exactly once, merge goals claiming every
/// hazard, a fault tree per goal, annotations for every basic event and a
/// partial technical architecture. Catalog tactics and response classes come
/// from the bundled catalog.
std::string generate_model_text(std::uint32_t seed);

/// Parses generated text; fails loudly when it does not validate.
Model parse_generated(const std::string& text);

/// Runs the whole analysis on generated text with the bundled catalog.
Analysis analyze_generated(const std::string& text);

/// A temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& content) const;

 private:
  std::filesystem::path path_;
};

/// Absolute path below the source tree.
std::filesystem::path source_path(const std::string& relative);

}  // namespace coopsafe::testing
