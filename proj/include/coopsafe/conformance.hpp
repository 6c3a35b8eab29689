#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coopsafe/catalog.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe::conformance {

struct Conflict {
  std::string first;   // lower FSR id
  std::string second;  // higher FSR id
  std::string rule;    // "exclusive:<a>|<b>" or "annotation"
};

struct ConflictReport {
  std::vector<Conflict> pairs;
  std::size_t comparisons_grouped = 0;
  std::size_t comparisons_naive = 0;
};

/// The pairwise predicate used by detect_conflicts. Never true for a == b.
std::optional<std::string> conflict_rule(const Fsr& a, const Fsr& b,
                                         const ResponseExclusivity& exclusivity);

/// Compares only FSRs that share a component.
ConflictReport detect_conflicts(std::span<const Fsr> fsrs, const ResponseExclusivity& exclusivity);

/// Tactics whose capabilities meet any atom of the FSR's requirement,
/// ordered by tactic id. Atoms no tactic provides are appended to
/// `unsatisfiable` when given.
std::vector<std::string> applicable_tactics(const Fsr& fsr, const Catalog& catalog,
                                            std::vector<std::string>* unsatisfiable = nullptr);

enum class Status { Fulfilled, Unfulfilled };

std::string_view to_string(Status s);

struct PatternRecommendation {
  std::string pattern;
  std::size_t missing_atoms_covered = 0;
};

struct AppliedTactic {
  std::string tactic;
  std::string technical_component;
  std::string evidence;
};

struct AssessmentVerdict {
  std::string fsr;
  Status status = Status::Unfulfilled;
  std::optional<std::string> reason;  // NO_REALIZATION
  std::vector<std::string> realized_by;
  std::vector<std::string> applicable_tactics;
  std::vector<std::string> unsatisfiable_atoms;
  std::vector<std::string> implemented_tactics_considered;
  CapabilitySet available_capabilities;
  std::optional<CapabilitySet> satisfied_alternative;
  /// Implemented tactics contributing to the satisfied alternative.
  std::vector<AppliedTactic> applied_tactics;
  std::vector<PatternRecommendation> recommended_patterns;  // empty when fulfilled
};

/// Evaluates every FSR against the technical architecture. An FSR is
/// fulfilled iff one requirement alternative is contained in the capabilities
/// of the tactics implemented by the components realizing its functional
/// component and their linked mechanisms. Verdicts are ordered by FSR id.
std::vector<AssessmentVerdict> assess(std::span<const Fsr> fsrs,
                                      std::span<const TechnicalComponent> technical_architecture,
                                      const Catalog& catalog);

}  // namespace coopsafe::conformance
