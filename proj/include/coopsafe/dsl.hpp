#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coopsafe/diagnostics.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe {

struct SourceFile {
  std::string path;
  std::string content;
};

/// Reads the given files; directories contribute every `*.coop` file they
/// contain, in sorted order. Throws InputError (code IO) on failure.
std::vector<SourceFile> read_sources(const std::vector<std::filesystem::path>& paths);

struct ParseResult {
  Model model;
  Diagnostics diagnostics;
};

/// Parses every file into one canonicalized model and runs model
/// validation. The model is usable only when no Error diagnostic is present.
ParseResult parse_model(std::span<const SourceFile> files);

/// Fault tree whose includes have been expanded.
struct FaultTree {
  std::string name;
  std::string goal;
  Gate root;
};

struct TreeContext {
  std::set<std::string> goals;
  std::set<std::string> components;
};

struct TreeParseResult {
  std::vector<FaultTree> trees;  // sorted by (goal, name)
  Diagnostics diagnostics;
};

/// Expands includes and checks goals, components and cycles. Only trees
/// declared `for` a goal are returned; unnamed helper trees are inlined.
TreeParseResult resolve_fault_trees(std::span<const FaultTreeDecl> decls, const TreeContext& context);

/// Reads only the `tree` blocks of the given files.
TreeParseResult parse_fault_trees(std::span<const SourceFile> files, const TreeContext& context);

}  // namespace coopsafe
