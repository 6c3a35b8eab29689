#include "coopsafe/model.hpp"

#include <algorithm>
#include <tuple>

namespace coopsafe {

std::string_view to_string(Perspective p) {
  return p == Perspective::Vehicular ? "vehicular" : "cooperative";
}

std::optional<Perspective> parse_perspective(std::string_view text) {
  if (text == "vehicular" || text == "vehicle") return Perspective::Vehicular;
  if (text == "cooperative") return Perspective::Cooperative;
  return std::nullopt;
}

std::string_view to_string(ItemKind k) {
  return k == ItemKind::VehicleType ? "vehicle" : "cooperative";
}

std::string_view to_string(GuideWord g) {
  switch (g) {
    case GuideWord::No: return "no";
    case GuideWord::More: return "more";
    case GuideWord::Less: return "less";
    case GuideWord::AsWellAs: return "as_well_as";
    case GuideWord::PartOf: return "part_of";
    case GuideWord::Reverse: return "reverse";
    case GuideWord::OtherThan: return "other_than";
  }
  return "no";
}

std::string_view guide_word_phrase(GuideWord g) {
  switch (g) {
    case GuideWord::No: return "no";
    case GuideWord::More: return "more";
    case GuideWord::Less: return "less";
    case GuideWord::AsWellAs: return "as well as";
    case GuideWord::PartOf: return "part of";
    case GuideWord::Reverse: return "reverse";
    case GuideWord::OtherThan: return "other than";
  }
  return "no";
}

std::optional<GuideWord> parse_guide_word(std::string_view text) {
  for (GuideWord g : kAllGuideWords) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

std::string_view to_string(Asil a) {
  switch (a) {
    case Asil::QM: return "QM";
    case Asil::A: return "A";
    case Asil::B: return "B";
    case Asil::C: return "C";
    case Asil::D: return "D";
  }
  return "QM";
}

std::optional<Asil> parse_asil(std::string_view text) {
  for (Asil a : {Asil::QM, Asil::A, Asil::B, Asil::C, Asil::D}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string event_id(std::string_view hazard, std::string_view mode, std::string_view situation) {
  std::string id;
  id.reserve(hazard.size() + mode.size() + situation.size() + 2);
  id.append(hazard).append("/").append(mode).append("/").append(situation);
  return id;
}

std::string to_string(const BasicEvent& b) { return b.component + ":" + b.failure_mode; }

CapabilitySet Requirement::atoms() const {
  CapabilitySet all;
  for (const auto& alt : alternatives) all.insert(alt.begin(), alt.end());
  return all;
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

auto span_key(const SourceSpan& s) { return std::tie(s.file, s.line, s.column); }

template <typename T>
void sort_by_id(std::vector<T>& items) {
  std::stable_sort(items.begin(), items.end(), [](const T& a, const T& b) {
    return std::tie(a.id, a.span.file, a.span.line, a.span.column) <
           std::tie(b.id, b.span.file, b.span.line, b.span.column);
  });
}

template <typename T>
void sort_by_span(std::vector<T>& items, auto span_of) {
  std::stable_sort(items.begin(), items.end(),
                   [&](const T& a, const T& b) { return span_key(span_of(a)) < span_key(span_of(b)); });
}

}  // namespace

const Item* Model::find_item(std::string_view id) const { return find_by_id(items, id); }
const FunctionalComponent* Model::find_component(std::string_view id) const { return find_by_id(components, id); }
const SystemFunction* Model::find_function(std::string_view id) const { return find_by_id(functions, id); }
const TechnicalComponent* Model::find_tech_component(std::string_view id) const {
  return find_by_id(tech_components, id);
}

FunctionalArchitecture Model::architecture_of(std::string_view item_id) const {
  FunctionalArchitecture arch;
  for (const auto& c : components) {
    if (c.item.id == item_id) arch.components.push_back(c);
  }
  for (const auto& f : flows) {
    if (f.item == item_id) arch.flows.push_back(f);
  }
  return arch;
}

std::string Model::allocation_target(std::string_view component_id) const {
  const FunctionalComponent* c = find_component(component_id);
  if (c != nullptr && c->ref && !c->external) return c->ref->id;
  return std::string(component_id);
}

void Model::canonicalize() {
  sort_by_id(items);
  sort_by_id(components);
  sort_by_id(functions);
  sort_by_id(modes);
  sort_by_id(situations);
  sort_by_id(merge_goals);
  sort_by_id(tech_components);
  sort_by_id(annotations);
  std::stable_sort(trees.begin(), trees.end(), [](const FaultTreeDecl& a, const FaultTreeDecl& b) {
    return std::tie(a.name, a.span.file, a.span.line, a.span.column) <
           std::tie(b.name, b.span.file, b.span.line, b.span.column);
  });
  std::stable_sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    return std::tie(a.item, a.from.id, a.to.id, a.span.file, a.span.line) <
           std::tie(b.item, b.from.id, b.to.id, b.span.file, b.span.line);
  });
  std::stable_sort(hazard_texts.begin(), hazard_texts.end(),
                   [](const AuthoredHazardText& a, const AuthoredHazardText& b) {
                     return std::tie(a.function.id, a.guide_word, a.span.file, a.span.line) <
                            std::tie(b.function.id, b.guide_word, b.span.file, b.span.line);
                   });
  sort_by_span(feasibility_defaults, [](const FeasibilityDefault& d) -> const SourceSpan& { return d.span; });
  sort_by_span(feasibility_exceptions,
               [](const FeasibilityException& e) -> const SourceSpan& { return e.pattern.span; });
  sort_by_span(ratings, [](const RatingRule& r) -> const SourceSpan& { return r.span; });
}

}  // namespace coopsafe
