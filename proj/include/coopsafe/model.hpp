#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coopsafe/diagnostics.hpp"

namespace coopsafe {

enum class Perspective { Vehicular, Cooperative };

std::string_view to_string(Perspective p);
std::optional<Perspective> parse_perspective(std::string_view text);

enum class ItemKind { VehicleType, CooperativeSystem };

std::string_view to_string(ItemKind k);

/// The seven HAZOP guide words, in canonical order.
enum class GuideWord { No, More, Less, AsWellAs, PartOf, Reverse, OtherThan };

inline constexpr GuideWord kAllGuideWords[] = {
    GuideWord::No,      GuideWord::More,    GuideWord::Less,     GuideWord::AsWellAs,
    GuideWord::PartOf,  GuideWord::Reverse, GuideWord::OtherThan};

/// Identifier form used in model files and hazard ids ("as_well_as").
std::string_view to_string(GuideWord g);
/// Prose form used in templated hazard text ("as well as").
std::string_view guide_word_phrase(GuideWord g);
std::optional<GuideWord> parse_guide_word(std::string_view text);

/// Totally ordered: QM < A < B < C < D.
enum class Asil { QM = 0, A, B, C, D };

std::string_view to_string(Asil a);
std::optional<Asil> parse_asil(std::string_view text);

enum class Severity { S0 = 0, S1, S2, S3 };
enum class Exposure { E0 = 0, E1, E2, E3, E4 };
enum class Controllability { C0 = 0, C1, C2, C3 };

/// A reference to another entity by id, remembering where it was written.
struct Ref {
  std::string id;
  SourceSpan span;
};

struct Item {
  std::string id;
  std::string name;
  ItemKind kind = ItemKind::VehicleType;
  SourceSpan span;
};

struct FunctionalComponent {
  std::string id;
  std::string name;
  std::optional<std::string> component_class;
  Ref item;
  /// Cooperative components point at the vehicle component they are built from.
  std::optional<Ref> ref;
  /// External actors of the cooperative system (e.g. a cloud service).
  bool external = false;
  SourceSpan span;
};

struct Flow {
  Ref from;
  Ref to;
  std::string item;
  SourceSpan span;
};

struct FunctionalArchitecture {
  std::vector<FunctionalComponent> components;
  std::vector<Flow> flows;
};

struct SystemFunction {
  std::string id;
  std::string description;
  Perspective perspective = Perspective::Vehicular;
  std::string scenario = "base";
  std::vector<GuideWord> guide_words;
  SourceSpan span;
};

/// Hazard text written by an analyst for one (function, guide word) pair.
struct AuthoredHazardText {
  Ref function;
  GuideWord guide_word = GuideWord::No;
  std::string text;
  SourceSpan span;
};

struct Hazard {
  std::string id;
  std::string function;
  Perspective perspective = Perspective::Vehicular;
  GuideWord guide_word = GuideWord::No;
  std::string text;
  bool draft = false;
};

struct OperationalMode {
  std::string id;
  std::string name;
  Perspective perspective = Perspective::Vehicular;
  SourceSpan span;
};

struct OperationalSituation {
  std::string id;
  std::string name;
  Perspective perspective = Perspective::Vehicular;
  SourceSpan span;
};

/// (hazard, mode, situation) with `*` wildcards allowed in each segment.
struct TriplePattern {
  std::string hazard;
  std::string mode;
  std::string situation;
  SourceSpan span;
  std::vector<SourceSpan> part_spans;  // one per segment when known
};

struct FeasibilityDefault {
  Perspective perspective = Perspective::Vehicular;
  bool feasible = true;
  SourceSpan span;
};

struct FeasibilityException {
  TriplePattern pattern;
  bool feasible = true;
};

/// Effective feasibility policy of one perspective.
struct FeasibilityPolicy {
  Perspective perspective = Perspective::Vehicular;
  bool default_feasible = true;
  std::vector<FeasibilityException> exceptions;
};

/// Partial or complete S/E/C rating applied to every matching triple.
struct RatingRule {
  TriplePattern pattern;
  std::optional<Severity> severity;
  std::optional<Exposure> exposure;
  std::optional<Controllability> controllability;
  SourceSpan span;
};

struct HazardousEvent {
  std::string id;  // "<hazard>/<mode>/<situation>"
  std::string hazard;
  std::string mode;
  std::string situation;
  Perspective perspective = Perspective::Vehicular;
  Severity severity = Severity::S0;
  Exposure exposure = Exposure::E0;
  Controllability controllability = Controllability::C0;
};

std::string event_id(std::string_view hazard, std::string_view mode, std::string_view situation);

/// Expert-authored grouping of hazardous events into one safety goal.
struct MergeGoal {
  std::string id;
  std::string text;
  std::vector<Ref> event_patterns;
  SourceSpan span;
};

struct SafetyGoal {
  std::string id;
  std::string text;
  bool draft = false;
  Perspective perspective = Perspective::Vehicular;
  std::vector<std::string> member_events;
  Asil asil = Asil::QM;
};

struct BasicEvent {
  std::string component;
  std::string failure_mode;

  auto operator<=>(const BasicEvent&) const = default;
  bool operator==(const BasicEvent&) const = default;
};

std::string to_string(const BasicEvent& b);

struct Gate {
  enum class Kind { And, Or, Basic, Include };
  Kind kind = Kind::Or;
  std::vector<Gate> children;
  BasicEvent basic;
  std::string include;
  SourceSpan span;
  SourceSpan component_span;
};

/// Tree as written; may include other named trees.
struct FaultTreeDecl {
  std::string name;
  std::optional<Ref> goal;
  std::optional<Gate> root;
  SourceSpan span;
};

using CapabilitySet = std::set<std::string>;

/// Disjunctive normal form over capability tags: any alternative suffices.
struct Requirement {
  std::vector<CapabilitySet> alternatives;

  CapabilitySet atoms() const;
  bool operator==(const Requirement&) const = default;
};

struct FsrAnnotation {
  std::string id;
  std::vector<Ref> components;  // exactly one when valid
  std::string failure_mode;
  std::optional<Perspective> perspective;
  std::string trigger;
  std::string response_class;
  Requirement requirement;
  std::optional<std::string> text;
  std::vector<Ref> conflicts_with;
  SourceSpan span;
};

struct Fsr {
  std::string id;
  std::string text;
  bool draft = false;
  std::string component;
  std::string failure_mode;
  Perspective perspective = Perspective::Vehicular;
  std::set<std::string> source_goals;
  Asil asil = Asil::QM;
  std::string trigger;
  std::string response_class;
  Requirement requirement;
  std::set<std::string> conflicts_with;
};

struct ImplementedTactic {
  Ref tactic;
  std::string evidence;
};

struct TechnicalComponent {
  std::string id;
  std::string name;
  /// Empty for pure safety mechanisms that are only reachable through links.
  std::optional<Ref> realizes;
  std::vector<ImplementedTactic> tactics;
  std::vector<Ref> linked_mechanisms;
  bool mechanism = false;
  SourceSpan span;
};

/// Everything read from the model files; immutable once validated.
struct Model {
  std::vector<Item> items;
  std::vector<FunctionalComponent> components;
  std::vector<Flow> flows;
  std::vector<SystemFunction> functions;
  std::vector<AuthoredHazardText> hazard_texts;
  std::vector<OperationalMode> modes;
  std::vector<OperationalSituation> situations;
  std::vector<FeasibilityDefault> feasibility_defaults;
  std::vector<FeasibilityException> feasibility_exceptions;
  std::vector<RatingRule> ratings;
  std::vector<MergeGoal> merge_goals;
  std::vector<FaultTreeDecl> trees;
  std::vector<TechnicalComponent> tech_components;
  std::vector<FsrAnnotation> annotations;

  const Item* find_item(std::string_view id) const;
  const FunctionalComponent* find_component(std::string_view id) const;
  const SystemFunction* find_function(std::string_view id) const;
  const TechnicalComponent* find_tech_component(std::string_view id) const;

  FunctionalArchitecture architecture_of(std::string_view item_id) const;

  /// Component an FSR on `component_id` is allocated to: cooperative
  /// components resolve to the vehicle component they reference.
  std::string allocation_target(std::string_view component_id) const;

  /// Sorts every entity list by id (and span) so results never depend on
  /// the order files were given in.
  void canonicalize();
};

}  // namespace coopsafe
