#include "coopsafe/hara.hpp"

#include <algorithm>
#include <map>

#include "coopsafe/catalog.hpp"

namespace coopsafe::hara {

Applicability applicability_of(std::span<const SystemFunction> functions) {
  Applicability out;
  for (const auto& fn : functions) {
    out[fn.id].insert(fn.guide_words.begin(), fn.guide_words.end());
  }
  return out;
}

std::string hazard_id(std::string_view function_id, GuideWord g) {
  return std::string(function_id) + "_" + std::string(to_string(g));
}

std::string templated_hazard_text(GuideWord g, std::string_view description) {
  return std::string(guide_word_phrase(g)) + " " + std::string(description);
}

std::vector<Hazard> generate_hazards(std::span<const SystemFunction> functions, const Applicability& applicability,
                                     std::span<const AuthoredHazardText> authored) {
  std::map<std::string, const SystemFunction*> by_id;
  for (const auto& fn : functions) by_id.emplace(fn.id, &fn);

  std::vector<std::string> unknown;
  for (const auto& [id, words] : applicability) {
    if (!by_id.count(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) throw AnalysisError("UNKNOWN_FUNCTION", unknown);

  std::map<std::pair<std::string, GuideWord>, std::string> texts;
  for (const auto& a : authored) texts[{a.function.id, a.guide_word}] = a.text;

  std::vector<Hazard> hazards;
  for (const auto& [id, words] : applicability) {
    const SystemFunction& fn = *by_id.at(id);
    for (GuideWord g : words) {
      Hazard h;
      h.id = hazard_id(fn.id, g);
      h.function = fn.id;
      h.perspective = fn.perspective;
      h.guide_word = g;
      if (auto it = texts.find({fn.id, g}); it != texts.end()) {
        h.text = it->second;
      } else {
        h.text = templated_hazard_text(g, fn.description);
        h.draft = true;
      }
      hazards.push_back(std::move(h));
    }
  }
  std::sort(hazards.begin(), hazards.end(), [](const Hazard& a, const Hazard& b) {
    return std::tie(a.function, a.guide_word) < std::tie(b.function, b.guide_word);
  });
  return hazards;
}

std::vector<Hazard> generate_hazards(const Model& model) {
  return generate_hazards(model.functions, applicability_of(model.functions), model.hazard_texts);
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0;
  std::size_t t = 0;
  std::size_t star = std::string_view::npos;
  std::size_t resume = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      resume = t;
    } else if (p < pattern.size() && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++resume;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool matches(const TriplePattern& pattern, std::string_view hazard, std::string_view mode,
             std::string_view situation) {
  return glob_match(pattern.hazard, hazard) && glob_match(pattern.mode, mode) &&
         glob_match(pattern.situation, situation);
}

std::vector<FeasibilityPolicy> feasibility_policies(const Model& model) {
  std::vector<FeasibilityPolicy> policies{{Perspective::Vehicular, true, {}}, {Perspective::Cooperative, true, {}}};
  for (const auto& d : model.feasibility_defaults) {
    policies[static_cast<std::size_t>(d.perspective)].default_feasible = d.feasible;
  }
  // Exceptions apply to whichever perspective owns the triple; keep them on both.
  for (auto& p : policies) p.exceptions = model.feasibility_exceptions;
  return policies;
}

namespace {

template <typename T>
std::vector<const T*> of_perspective(std::span<const T> all, Perspective p) {
  std::vector<const T*> out;
  for (const auto& x : all) {
    if (x.perspective == p) out.push_back(&x);
  }
  std::sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->id < b->id; });
  return out;
}

}  // namespace

std::vector<Triple> feasible_triples(std::span<const Hazard> hazards, std::span<const OperationalMode> modes,
                                     std::span<const OperationalSituation> situations,
                                     std::span<const FeasibilityPolicy> policies) {
  std::vector<Triple> out;
  std::vector<std::string> conflicts;
  for (const FeasibilityPolicy& policy : policies) {
    const Perspective p = policy.perspective;
    const auto ms = of_perspective(modes, p);
    const auto ss = of_perspective(situations, p);
    for (const Hazard* h : of_perspective(hazards, p)) {
      for (const OperationalMode* m : ms) {
        for (const OperationalSituation* s : ss) {
          bool yes = false;
          bool no = false;
          for (const auto& ex : policy.exceptions) {
            if (!matches(ex.pattern, h->id, m->id, s->id)) continue;
            (ex.feasible ? yes : no) = true;
          }
          if (yes && no) {
            conflicts.push_back(event_id(h->id, m->id, s->id));
            continue;
          }
          const bool feasible = yes || (!no && policy.default_feasible);
          if (feasible) out.push_back(Triple{h->id, m->id, s->id, p});
        }
      }
    }
  }
  if (!conflicts.empty()) throw AnalysisError("CONFLICTING_FEASIBILITY", conflicts);
  std::sort(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.hazard, a.mode, a.situation) < std::tie(b.hazard, b.mode, b.situation);
  });
  return out;
}

std::size_t raw_triple_count(std::span<const Hazard> hazards, std::span<const OperationalMode> modes,
                             std::span<const OperationalSituation> situations, Perspective p) {
  auto count = [p](auto range) {
    return static_cast<std::size_t>(
        std::count_if(range.begin(), range.end(), [p](const auto& x) { return x.perspective == p; }));
  };
  return count(hazards) * count(modes) * count(situations);
}

bool RatingMatch::complete() const {
  return !severity.empty() && !exposure.empty() && !controllability.empty();
}

bool RatingMatch::ambiguous() const {
  return severity.size() > 1 || exposure.size() > 1 || controllability.size() > 1;
}

RatingMatch match_ratings(const Triple& triple, std::span<const RatingRule> rules) {
  RatingMatch m;
  for (const RatingRule& r : rules) {
    if (!matches(r.pattern, triple.hazard, triple.mode, triple.situation)) continue;
    if (r.severity) m.severity.push_back(&r);
    if (r.exposure) m.exposure.push_back(&r);
    if (r.controllability) m.controllability.push_back(&r);
  }
  return m;
}

std::vector<HazardousEvent> enumerate_events(std::span<const Hazard> hazards, std::span<const OperationalMode> modes,
                                             std::span<const OperationalSituation> situations,
                                             std::span<const FeasibilityPolicy> policies,
                                             std::span<const RatingRule> ratings) {
  std::vector<HazardousEvent> events;
  std::vector<std::string> missing;
  std::vector<std::string> ambiguous;
  for (const Triple& t : feasible_triples(hazards, modes, situations, policies)) {
    const RatingMatch m = match_ratings(t, ratings);
    const std::string id = event_id(t.hazard, t.mode, t.situation);
    if (!m.complete()) {
      std::string lacking;
      if (m.severity.empty()) lacking += "S";
      if (m.exposure.empty()) lacking += "E";
      if (m.controllability.empty()) lacking += "C";
      missing.push_back(id + " (no " + lacking + ")");
      continue;
    }
    if (m.ambiguous()) {
      ambiguous.push_back(id);
      continue;
    }
    HazardousEvent e;
    e.id = id;
    e.hazard = t.hazard;
    e.mode = t.mode;
    e.situation = t.situation;
    e.perspective = t.perspective;
    e.severity = *m.severity.front()->severity;
    e.exposure = *m.exposure.front()->exposure;
    e.controllability = *m.controllability.front()->controllability;
    events.push_back(std::move(e));
  }
  if (!missing.empty()) throw AnalysisError("MISSING_RATING", missing);
  if (!ambiguous.empty()) throw AnalysisError("AMBIGUOUS_RATING", ambiguous);
  return events;
}

Asil event_asil(const HazardousEvent& e) { return determine_asil(e.severity, e.exposure, e.controllability); }

std::string singleton_goal_id(std::string_view event) {
  std::string id = "sg_";
  for (char c : event) {
    if (c == '/') {
      id += "__";
    } else {
      id.push_back(c);
    }
  }
  return id;
}

std::vector<SafetyGoal> derive_goals(std::span<const HazardousEvent> events, std::span<const MergeGoal> merge_map,
                                     std::span<const Hazard> hazards) {
  std::map<std::string, const Hazard*> hazard_by_id;
  for (const auto& h : hazards) hazard_by_id.emplace(h.id, &h);

  std::map<std::string, std::string> owner;  // event id -> goal id
  std::vector<std::string> doubled;
  std::vector<std::string> mixed;
  std::vector<SafetyGoal> goals;

  auto finish = [](SafetyGoal& g, const std::vector<const HazardousEvent*>& members) {
    Asil asil = Asil::QM;
    for (const HazardousEvent* e : members) {
      g.member_events.push_back(e->id);
      asil = std::max(asil, event_asil(*e));
    }
    std::sort(g.member_events.begin(), g.member_events.end());
    g.asil = asil;
  };

  for (const MergeGoal& mg : merge_map) {
    std::vector<const HazardousEvent*> members;
    for (const HazardousEvent& e : events) {
      const bool hit = std::any_of(mg.event_patterns.begin(), mg.event_patterns.end(),
                                   [&](const Ref& r) { return glob_match(r.id, e.id); });
      if (!hit) continue;
      if (auto [it, inserted] = owner.emplace(e.id, mg.id); !inserted) {
        doubled.push_back(e.id + " (" + it->second + ", " + mg.id + ")");
        continue;
      }
      members.push_back(&e);
    }
    // A group whose patterns match nothing contributes no goal; the
    // analysis reports its patterns as unmatched.
    if (members.empty()) continue;
    const Perspective p = members.front()->perspective;
    if (std::any_of(members.begin(), members.end(), [p](const HazardousEvent* e) { return e->perspective != p; })) {
      mixed.push_back(mg.id);
      continue;
    }
    SafetyGoal g;
    g.id = mg.id;
    g.text = mg.text;
    g.perspective = p;
    finish(g, members);
    goals.push_back(std::move(g));
  }
  if (!doubled.empty()) throw AnalysisError("EVENT_IN_TWO_GOALS", doubled);
  if (!mixed.empty()) throw AnalysisError("PERSPECTIVE_MIX", mixed);

  for (const HazardousEvent& e : events) {
    if (owner.count(e.id)) continue;
    SafetyGoal g;
    g.id = singleton_goal_id(e.id);
    auto it = hazard_by_id.find(e.hazard);
    const std::string hazard_text = it != hazard_by_id.end() ? it->second->text : e.hazard;
    g.text = "Avoid " + hazard_text + " in mode " + e.mode + " and situation " + e.situation;
    g.draft = true;
    g.perspective = e.perspective;
    finish(g, {&e});
    goals.push_back(std::move(g));
  }
  std::sort(goals.begin(), goals.end(), [](const SafetyGoal& a, const SafetyGoal& b) { return a.id < b.id; });
  return goals;
}

}  // namespace coopsafe::hara
