#include "coopsafe/fta.hpp"

#include <algorithm>
#include <map>

#include "coopsafe/diagnostics.hpp"

namespace coopsafe::fta {

namespace {

bool cut_set_less(const CutSet& a, const CutSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Drops every set that contains another one.
std::vector<CutSet> absorb(std::vector<CutSet> sets) {
  std::sort(sets.begin(), sets.end(), cut_set_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<CutSet> minimal;
  for (CutSet& s : sets) {
    const bool absorbed = std::any_of(minimal.begin(), minimal.end(), [&](const CutSet& m) {
      return std::includes(s.begin(), s.end(), m.begin(), m.end());
    });
    if (!absorbed) minimal.push_back(std::move(s));
  }
  return minimal;
}

}  // namespace

std::vector<CutSet> minimal_cut_sets(const Gate& root) {
  switch (root.kind) {
    case Gate::Kind::Basic:
      return {CutSet{root.basic}};
    case Gate::Kind::Or: {
      std::vector<CutSet> all;
      for (const Gate& c : root.children) {
        auto sets = minimal_cut_sets(c);
        all.insert(all.end(), std::make_move_iterator(sets.begin()), std::make_move_iterator(sets.end()));
      }
      return absorb(std::move(all));
    }
    case Gate::Kind::And: {
      std::vector<CutSet> product{CutSet{}};
      for (const Gate& c : root.children) {
        const auto sets = minimal_cut_sets(c);
        std::vector<CutSet> next;
        next.reserve(product.size() * sets.size());
        for (const CutSet& p : product) {
          for (const CutSet& s : sets) {
            CutSet merged = p;
            merged.insert(s.begin(), s.end());
            next.push_back(std::move(merged));
          }
        }
        // Absorbing after every child keeps the product small.
        product = absorb(std::move(next));
      }
      return product;
    }
    case Gate::Kind::Include:
      throw AnalysisError("MALFORMED_TREE", {"unexpanded include of '" + root.include + "'"});
  }
  return {};
}

std::vector<CutSet> minimal_cut_sets(const FaultTree& tree) { return minimal_cut_sets(tree.root); }

std::set<BasicEvent> relevant_basic_events(const FaultTree& tree) {
  std::set<BasicEvent> out;
  for (const CutSet& s : minimal_cut_sets(tree)) out.insert(s.begin(), s.end());
  return out;
}

namespace {

const FsrAnnotation* find_annotation(const BasicEvent& b, Perspective p, std::span<const FsrAnnotation> annotations,
                                     const Model& model) {
  const std::string target = model.allocation_target(b.component);
  const FsrAnnotation* best = nullptr;
  int best_score = -1;
  for (const FsrAnnotation& a : annotations) {
    if (a.components.size() != 1 || a.failure_mode != b.failure_mode) continue;
    if (a.perspective && *a.perspective != p) continue;
    const std::string& c = a.components.front().id;
    if (c != b.component && c != target) continue;
    const int score = (a.perspective ? 2 : 0) + (c == b.component ? 1 : 0);
    if (score > best_score) {
      best = &a;
      best_score = score;
    }
  }
  return best;
}

std::string templated_fsr_text(const BasicEvent& b, const std::string& component, const SafetyGoal& goal) {
  return "A failure (" + b.failure_mode + ") in " + component + " shall not lead to violation of " + goal.text;
}

}  // namespace

FsrDerivation derive_fsrs(std::span<const SafetyGoal> goals, std::span<const FaultTree> trees,
                          std::span<const FsrAnnotation> annotations, const Model& model) {
  std::map<std::string, const SafetyGoal*> goal_by_id;
  for (const SafetyGoal& g : goals) goal_by_id.emplace(g.id, &g);

  std::map<std::string, std::vector<const FaultTree*>> trees_of;
  for (const FaultTree& t : trees) trees_of[t.goal].push_back(&t);

  std::vector<std::string> without_tree;
  for (const SafetyGoal& g : goals) {
    if (!trees_of.count(g.id)) without_tree.push_back(g.id);
  }
  if (!without_tree.empty()) throw AnalysisError("MISSING_TREE", without_tree);

  struct Pending {
    Fsr fsr;
    BasicEvent first_event;
    const FsrAnnotation* annotation = nullptr;
  };
  std::map<std::pair<Perspective, std::string>, Pending> by_key;  // (perspective, annotation id)
  std::set<std::string> unannotated;

  for (const auto& [goal_id, goal_trees] : trees_of) {
    auto git = goal_by_id.find(goal_id);
    if (git == goal_by_id.end()) continue;
    const SafetyGoal& goal = *git->second;
    std::set<BasicEvent> basics;
    for (const FaultTree* t : goal_trees) {
      auto r = relevant_basic_events(*t);
      basics.insert(r.begin(), r.end());
    }
    for (const BasicEvent& b : basics) {
      const FsrAnnotation* a = find_annotation(b, goal.perspective, annotations, model);
      if (a == nullptr) {
        unannotated.insert(to_string(b) + " (" + std::string(to_string(goal.perspective)) + ")");
        continue;
      }
      auto [it, inserted] = by_key.try_emplace({goal.perspective, a->id});
      Pending& p = it->second;
      if (inserted) {
        p.annotation = a;
        p.first_event = b;
        p.fsr.id = a->id;
        p.fsr.component = model.allocation_target(a->components.front().id);
        p.fsr.failure_mode = a->failure_mode;
        p.fsr.perspective = goal.perspective;
        p.fsr.trigger = a->trigger;
        p.fsr.response_class = a->response_class;
        p.fsr.requirement = a->requirement;
      }
      p.fsr.source_goals.insert(goal.id);
      p.fsr.asil = std::max(p.fsr.asil, goal.asil);
    }
  }
  if (!unannotated.empty()) {
    throw AnalysisError("UNANNOTATED_EVENT", std::vector<std::string>(unannotated.begin(), unannotated.end()));
  }

  // Annotations reached from both perspectives yield one FSR per perspective.
  std::map<std::string, int> uses;
  for (const auto& [key, p] : by_key) ++uses[key.second];

  FsrDerivation out;
  auto final_id = [&](const std::string& annotation_id, Perspective p) {
    if (uses[annotation_id] < 2) return annotation_id;
    return annotation_id + (p == Perspective::Vehicular ? "-V" : "-C");
  };
  for (auto& [key, p] : by_key) {
    Fsr fsr = std::move(p.fsr);
    fsr.id = final_id(key.second, key.first);
    if (p.annotation->text) {
      fsr.text = *p.annotation->text;
    } else {
      const SafetyGoal& first_goal = *goal_by_id.at(*fsr.source_goals.begin());
      fsr.text = templated_fsr_text(p.first_event, fsr.component, first_goal);
      fsr.draft = true;
    }
    for (const Ref& other : p.annotation->conflicts_with) {
      if (by_key.count({key.first, other.id})) {
        fsr.conflicts_with.insert(final_id(other.id, key.first));
      }
    }
    if (uses[key.second] > 1 && key.first == Perspective::Vehicular) {
      out.overlaps.push_back(BasicEvent{fsr.component, fsr.failure_mode});
    }
    out.fsrs.push_back(std::move(fsr));
  }
  std::sort(out.fsrs.begin(), out.fsrs.end(), [](const Fsr& a, const Fsr& b) { return a.id < b.id; });
  std::sort(out.overlaps.begin(), out.overlaps.end());
  return out;
}

}  // namespace coopsafe::fta
