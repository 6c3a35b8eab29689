#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "coopsafe/dsl.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe::fta {

using CutSet = std::set<BasicEvent>;

/// Minimal cut sets of an AND/OR tree, computed bottom-up: OR unites its
/// children's sets, AND takes their cross product, and every gate absorbs
/// supersets. Ordered by (size, lexicographic basic events). Include gates
/// must be expanded.
std::vector<CutSet> minimal_cut_sets(const Gate& root);
std::vector<CutSet> minimal_cut_sets(const FaultTree& tree);

/// Basic events appearing in at least one minimal cut set.
std::set<BasicEvent> relevant_basic_events(const FaultTree& tree);

struct FsrDerivation {
  std::vector<Fsr> fsrs;  // sorted by id
  /// (component, failure_mode) pairs derived from both perspectives.
  std::vector<BasicEvent> overlaps;
};

/// One FSR per (perspective, allocated component, failure mode) found in a
/// minimal cut set of any goal's tree. ASIL is the maximum over source goals.
/// Throws AnalysisError MISSING_TREE when a goal has no tree and
/// UNANNOTATED_EVENT listing every basic event without an annotation.
FsrDerivation derive_fsrs(std::span<const SafetyGoal> goals, std::span<const FaultTree> trees,
                          std::span<const FsrAnnotation> annotations, const Model& model);

}  // namespace coopsafe::fta
