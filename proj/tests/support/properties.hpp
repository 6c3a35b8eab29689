#pragma once

#include <random>
#include <string>
#include <vector>

#include "coopsafe/report.hpp"

namespace coopsafe::testing {

/// Each check returns human-readable violations; empty means it holds.
using Violations = std::vector<std::string>;

/// Every event belongs to exactly one goal of its own perspective, and a
/// goal's ASIL is the maximum over its members.
Violations check_goal_partition(const Analysis& a);
/// Every FSR sits on one vehicle component or external actor.
Violations check_single_allocation(const Analysis& a);
/// An FSR's ASIL is the maximum over its source goals.
Violations check_asil_inheritance(const Analysis& a);
/// conflict(a, b) iff conflict(b, a); never conflict(a, a).
Violations check_conflict_symmetry(const Analysis& a);
/// grouped <= naive, with equality iff at most one component holds FSRs
/// (or fewer than two FSRs exist).
Violations check_comparison_bounds(const Analysis& a);
/// Fulfilled iff a satisfied alternative is recorded, and that alternative
/// lies within the recorded capabilities.
Violations check_verdict_soundness(const Analysis& a);
/// Adding a random tactic to a random technical component never turns a
/// Fulfilled verdict into Unfulfilled.
Violations check_monotonicity(const Analysis& a, std::mt19937& rng);
/// Assessing one component's FSRs alone gives the same verdicts as the
/// corresponding slice of the full run.
Violations check_restriction(const Analysis& a);
/// Summary counts equal counts recomputed from the JSON detail sections.
Violations check_report_consistency(const AssessmentReport& report);
/// Two pipeline runs over the same files give byte-identical JSON.
Violations check_determinism(const std::string& model_text);

/// All of the above on one generated model.
Violations check_all_properties(const std::string& model_text, std::mt19937& rng);

}  // namespace coopsafe::testing
