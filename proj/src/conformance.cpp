#include "coopsafe/conformance.hpp"

#include <algorithm>
#include <map>

namespace coopsafe::conformance {

std::optional<std::string> conflict_rule(const Fsr& a, const Fsr& b, const ResponseExclusivity& exclusivity) {
  if (a.id == b.id || a.component != b.component) return std::nullopt;
  if (a.conflicts_with.count(b.id) || b.conflicts_with.count(a.id)) return "annotation";
  if (a.trigger == b.trigger && exclusivity.exclusive(a.response_class, b.response_class)) {
    const auto& lo = std::min(a.response_class, b.response_class);
    const auto& hi = std::max(a.response_class, b.response_class);
    return "exclusive:" + lo + "|" + hi;
  }
  return std::nullopt;
}

ConflictReport detect_conflicts(std::span<const Fsr> fsrs, const ResponseExclusivity& exclusivity) {
  ConflictReport report;
  const std::size_t n = fsrs.size();
  report.comparisons_naive = n < 2 ? 0 : n * (n - 1) / 2;

  std::map<std::string, std::vector<const Fsr*>> groups;
  for (const Fsr& f : fsrs) groups[f.component].push_back(&f);
  for (auto& [component, members] : groups) {
    std::sort(members.begin(), members.end(), [](const Fsr* a, const Fsr* b) { return a->id < b->id; });
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        ++report.comparisons_grouped;
        if (auto rule = conflict_rule(*members[i], *members[j], exclusivity)) {
          report.pairs.push_back(Conflict{members[i]->id, members[j]->id, *rule});
        }
      }
    }
  }
  std::sort(report.pairs.begin(), report.pairs.end(), [](const Conflict& a, const Conflict& b) {
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });
  return report;
}

std::vector<std::string> applicable_tactics(const Fsr& fsr, const Catalog& catalog,
                                            std::vector<std::string>* unsatisfiable) {
  const CapabilitySet atoms = fsr.requirement.atoms();
  std::vector<std::string> out;
  for (const SafetyTactic& t : catalog.tactics) {
    const bool meets = std::any_of(t.provides.begin(), t.provides.end(),
                                   [&](const std::string& cap) { return atoms.count(cap) > 0; });
    if (meets) out.push_back(t.id);
  }
  std::sort(out.begin(), out.end());
  if (unsatisfiable != nullptr) {
    const CapabilitySet vocabulary = catalog.capability_vocabulary();
    for (const std::string& a : atoms) {
      if (!vocabulary.count(a)) unsatisfiable->push_back(a);
    }
  }
  return out;
}

std::string_view to_string(Status s) { return s == Status::Fulfilled ? "Fulfilled" : "Unfulfilled"; }

namespace {

std::vector<PatternRecommendation> recommend(const Fsr& fsr, const std::vector<std::string>& applicable,
                                             const CapabilitySet& available, const Catalog& catalog) {
  CapabilitySet missing;
  for (const std::string& a : fsr.requirement.atoms()) {
    if (!available.count(a)) missing.insert(a);
  }
  std::vector<PatternRecommendation> out;
  for (const SafetyPattern& p : catalog.patterns) {
    const bool relevant = std::any_of(p.tactics.begin(), p.tactics.end(), [&](const std::string& t) {
      return std::find(applicable.begin(), applicable.end(), t) != applicable.end();
    });
    if (!relevant) continue;
    const CapabilitySet caps = catalog.capabilities_of({p.tactics.begin(), p.tactics.end()});
    const auto covered = static_cast<std::size_t>(
        std::count_if(missing.begin(), missing.end(), [&](const std::string& a) { return caps.count(a) > 0; }));
    out.push_back(PatternRecommendation{p.id, covered});
  }
  std::sort(out.begin(), out.end(), [](const PatternRecommendation& a, const PatternRecommendation& b) {
    if (a.missing_atoms_covered != b.missing_atoms_covered) return a.missing_atoms_covered > b.missing_atoms_covered;
    return a.pattern < b.pattern;
  });
  return out;
}

}  // namespace

std::vector<AssessmentVerdict> assess(std::span<const Fsr> fsrs,
                                      std::span<const TechnicalComponent> technical_architecture,
                                      const Catalog& catalog) {
  std::map<std::string, const TechnicalComponent*> tech_by_id;
  for (const TechnicalComponent& tc : technical_architecture) tech_by_id.emplace(tc.id, &tc);

  std::vector<AssessmentVerdict> verdicts;
  for (const Fsr& fsr : fsrs) {
    AssessmentVerdict v;
    v.fsr = fsr.id;
    v.applicable_tactics = applicable_tactics(fsr, catalog, &v.unsatisfiable_atoms);

    std::vector<AppliedTactic> considered;
    std::set<std::string> visited;
    auto collect = [&](const TechnicalComponent& tc) {
      if (!visited.insert(tc.id).second) return;
      for (const ImplementedTactic& t : tc.tactics) {
        considered.push_back(AppliedTactic{t.tactic.id, tc.id, t.evidence});
      }
    };
    for (const TechnicalComponent& tc : technical_architecture) {
      if (!tc.realizes || tc.realizes->id != fsr.component) continue;
      v.realized_by.push_back(tc.id);
    }
    std::sort(v.realized_by.begin(), v.realized_by.end());
    for (const std::string& id : v.realized_by) {
      const TechnicalComponent& tc = *tech_by_id.at(id);
      collect(tc);
      // Linked mechanisms count one level deep.
      for (const Ref& link : tc.linked_mechanisms) {
        if (auto it = tech_by_id.find(link.id); it != tech_by_id.end()) collect(*it->second);
      }
    }
    std::set<std::string> tactic_ids;
    for (const AppliedTactic& t : considered) tactic_ids.insert(t.tactic);
    v.implemented_tactics_considered.assign(tactic_ids.begin(), tactic_ids.end());
    v.available_capabilities = catalog.capabilities_of(tactic_ids);

    if (v.realized_by.empty()) {
      v.reason = "NO_REALIZATION";
    } else {
      for (const CapabilitySet& alt : fsr.requirement.alternatives) {
        if (std::includes(v.available_capabilities.begin(), v.available_capabilities.end(), alt.begin(),
                          alt.end())) {
          v.satisfied_alternative = alt;
          break;
        }
      }
    }
    if (v.satisfied_alternative) {
      v.status = Status::Fulfilled;
      for (const AppliedTactic& t : considered) {
        const SafetyTactic* tactic = catalog.find_tactic(t.tactic);
        if (tactic == nullptr) continue;
        const bool contributes = std::any_of(tactic->provides.begin(), tactic->provides.end(), [&](const auto& cap) {
          return v.satisfied_alternative->count(cap) > 0;
        });
        if (contributes) v.applied_tactics.push_back(t);
      }
      std::sort(v.applied_tactics.begin(), v.applied_tactics.end(), [](const AppliedTactic& a, const AppliedTactic& b) {
        return std::tie(a.tactic, a.technical_component) < std::tie(b.tactic, b.technical_component);
      });
    } else {
      v.status = Status::Unfulfilled;
      v.recommended_patterns = recommend(fsr, v.applicable_tactics, v.available_capabilities, catalog);
    }
    verdicts.push_back(std::move(v));
  }
  std::sort(verdicts.begin(), verdicts.end(),
            [](const AssessmentVerdict& a, const AssessmentVerdict& b) { return a.fsr < b.fsr; });
  return verdicts;
}

}  // namespace coopsafe::conformance
