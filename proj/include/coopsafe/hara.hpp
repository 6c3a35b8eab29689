#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopsafe/model.hpp"

namespace coopsafe::hara {

using Applicability = std::map<std::string, std::set<GuideWord>>;

Applicability applicability_of(std::span<const SystemFunction> functions);

std::string hazard_id(std::string_view function_id, GuideWord g);
/// "<guide word phrase> <function description>"
std::string templated_hazard_text(GuideWord g, std::string_view description);

/// One hazard per applicable (function, guide word), sorted by
/// (function id, guide word). Throws AnalysisError UNKNOWN_FUNCTION when the
/// applicability map names a function that does not exist.
std::vector<Hazard> generate_hazards(std::span<const SystemFunction> functions,
                                     const Applicability& applicability,
                                     std::span<const AuthoredHazardText> authored);
std::vector<Hazard> generate_hazards(const Model& model);

/// Shell-style match where `*` stands for any (possibly empty) run.
bool glob_match(std::string_view pattern, std::string_view text);
bool matches(const TriplePattern& pattern, std::string_view hazard, std::string_view mode,
             std::string_view situation);

/// One policy per perspective. A perspective without a declared default is
/// feasible by default.
std::vector<FeasibilityPolicy> feasibility_policies(const Model& model);

struct Triple {
  std::string hazard;
  std::string mode;
  std::string situation;
  Perspective perspective = Perspective::Vehicular;
};

/// Triples of matching perspective admitted by the policies, ordered by
/// (hazard, mode, situation). Throws AnalysisError CONFLICTING_FEASIBILITY
/// when a triple matches both a feasible and an infeasible exception.
std::vector<Triple> feasible_triples(std::span<const Hazard> hazards,
                                     std::span<const OperationalMode> modes,
                                     std::span<const OperationalSituation> situations,
                                     std::span<const FeasibilityPolicy> policies);

/// |hazards| x |modes| x |situations| for one perspective.
std::size_t raw_triple_count(std::span<const Hazard> hazards, std::span<const OperationalMode> modes,
                             std::span<const OperationalSituation> situations, Perspective p);

/// For each of S, E and C, the rules that supply it for one triple.
struct RatingMatch {
  std::vector<const RatingRule*> severity;
  std::vector<const RatingRule*> exposure;
  std::vector<const RatingRule*> controllability;

  bool complete() const;
  bool ambiguous() const;
};

RatingMatch match_ratings(const Triple& triple, std::span<const RatingRule> rules);

/// Feasible triples with their S/E/C. Throws AnalysisError MISSING_RATING
/// listing every triple lacking a class, or AMBIGUOUS_RATING when more than
/// one rule supplies the same class.
std::vector<HazardousEvent> enumerate_events(std::span<const Hazard> hazards,
                                             std::span<const OperationalMode> modes,
                                             std::span<const OperationalSituation> situations,
                                             std::span<const FeasibilityPolicy> policies,
                                             std::span<const RatingRule> ratings);

Asil event_asil(const HazardousEvent& e);

std::string singleton_goal_id(std::string_view event_id);

/// Groups events into goals. Events no merge group claims become singleton
/// goals with templated (draft) text. Throws AnalysisError on an event in two
/// groups (EVENT_IN_TWO_GOALS) or a group mixing perspectives
/// (PERSPECTIVE_MIX). Goals are sorted by id.
std::vector<SafetyGoal> derive_goals(std::span<const HazardousEvent> events,
                                     std::span<const MergeGoal> merge_map,
                                     std::span<const Hazard> hazards);

}  // namespace coopsafe::hara
