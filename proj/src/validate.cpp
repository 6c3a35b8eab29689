#include "coopsafe/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "coopsafe/dsl.hpp"
#include "coopsafe/hara.hpp"
#include "statement_util.hpp"

namespace coopsafe {

namespace {

using detail::DiagnosticSink;

auto span_key(const SourceSpan& s) { return std::make_tuple(s.file, s.line, s.column); }

bool has_glob(std::string_view s) { return s.find('*') != std::string_view::npos; }

/// Reports every entity whose key was already seen earlier in source order.
template <typename T, typename KeyFn>
void check_duplicates(const std::vector<T>& entities, std::string_view what, KeyFn key_of, DiagnosticSink& sink) {
  std::vector<const T*> ordered;
  for (const auto& e : entities) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const T* a, const T* b) { return span_key(a->span) < span_key(b->span); });
  std::map<decltype(key_of(*ordered.front())), const T*> seen;
  for (const T* e : ordered) {
    auto [it, inserted] = seen.emplace(key_of(*e), e);
    if (inserted) continue;
    const SourceSpan& first = it->second->span;
    sink.error(e->span, "DUP_ID",
               "duplicate " + std::string(what) + " id '" + e->id + "' (first defined at " + first.file + ":" +
                   std::to_string(first.line) + ":" + std::to_string(first.column) + ")",
               e->id);
  }
}

class Validator {
 public:
  explicit Validator(const Model& model) : m_(model), sink_(out_) {}

  Diagnostics run() {
    duplicates();
    items_and_components();
    functions_and_texts();
    conditions_and_feasibility();
    ratings();
    goals();
    trees();
    technical_architecture();
    annotations();
    sort_diagnostics(out_);
    return std::move(out_);
  }

 private:
  void duplicates() {
    auto by_id = [](const auto& e) { return e.id; };
    if (!m_.items.empty()) check_duplicates(m_.items, "item", by_id, sink_);
    if (!m_.components.empty()) check_duplicates(m_.components, "component", by_id, sink_);
    if (!m_.functions.empty()) check_duplicates(m_.functions, "function", by_id, sink_);
    auto per_perspective = [](const auto& e) { return std::make_pair(e.perspective, e.id); };
    if (!m_.modes.empty()) check_duplicates(m_.modes, "mode", per_perspective, sink_);
    if (!m_.situations.empty()) check_duplicates(m_.situations, "situation", per_perspective, sink_);
    if (!m_.merge_goals.empty()) check_duplicates(m_.merge_goals, "merge_goal", by_id, sink_);
    if (!m_.tech_components.empty()) check_duplicates(m_.tech_components, "tech_component", by_id, sink_);
    if (!m_.annotations.empty()) check_duplicates(m_.annotations, "fsr_annotation", by_id, sink_);
  }

  void items_and_components() {
    const Item* cooperative = nullptr;
    bool has_vehicle = false;
    std::vector<const Item*> items;
    for (const auto& i : m_.items) items.push_back(&i);
    std::stable_sort(items.begin(), items.end(),
                     [](const Item* a, const Item* b) { return span_key(a->span) < span_key(b->span); });
    for (const Item* i : items) {
      if (i->kind == ItemKind::VehicleType) {
        has_vehicle = true;
      } else if (cooperative == nullptr) {
        cooperative = i;
      } else {
        sink_.error(i->span, "MULTIPLE_COOPERATIVE_ITEM",
                    "item '" + i->id + "' is a second cooperative item (first: '" + cooperative->id + "')", i->id);
      }
    }
    const bool any_cooperative_input =
        std::any_of(m_.functions.begin(), m_.functions.end(),
                    [](const SystemFunction& f) { return f.perspective == Perspective::Cooperative; });
    if (!has_vehicle && (!m_.components.empty() || !m_.functions.empty())) {
      sink_.warning(first_span(), "MISSING_ITEM", "model declares no vehicle item");
    }
    if (cooperative == nullptr && any_cooperative_input) {
      sink_.warning(first_span(), "MISSING_ITEM", "model has cooperative functions but no cooperative item");
    }

    for (const auto& c : m_.components) {
      if (c.item.id.empty()) continue;  // reported by the reader
      const Item* item = m_.find_item(c.item.id);
      if (item == nullptr) {
        sink_.error(c.item.span, "UNKNOWN_REF", "component '" + c.id + "' names unknown item '" + c.item.id + "'",
                    c.id);
        continue;
      }
      if (item->kind == ItemKind::VehicleType) {
        if (c.ref) {
          sink_.error(c.ref->span, "BAD_VALUE", "vehicle component '" + c.id + "' cannot reference another component",
                      c.id);
        }
        if (c.external) {
          sink_.error(c.span, "BAD_VALUE", "only cooperative components can be external actors", c.id);
        }
        continue;
      }
      if (c.external) continue;
      if (!c.ref) {
        sink_.error(c.span, "COOP_COMPONENT_UNMAPPED",
                    "cooperative component '" + c.id + "' neither references a vehicle component nor is external",
                    c.id);
        continue;
      }
      const FunctionalComponent* target = m_.find_component(c.ref->id);
      const Item* target_item = target ? m_.find_item(target->item.id) : nullptr;
      if (target_item == nullptr || target_item->kind != ItemKind::VehicleType) {
        sink_.error(c.ref->span, "COOP_COMPONENT_UNMAPPED",
                    "cooperative component '" + c.id + "' references '" + c.ref->id +
                        "', which is not a component of any vehicle architecture",
                    c.id);
      }
    }

    for (const auto& f : m_.flows) {
      bool ok = true;
      for (const Ref* end : {&f.from, &f.to}) {
        if (!m_.find_component(end->id)) {
          sink_.error(end->span, "UNKNOWN_REF", "flow endpoint '" + end->id + "' is not a component", end->id);
          ok = false;
        }
      }
      if (!ok) continue;
      if (!f.item.empty() && !m_.find_item(f.item)) {
        sink_.error(f.span, "UNKNOWN_REF", "flow names unknown item '" + f.item + "'");
        continue;
      }
      for (const Ref* end : {&f.from, &f.to}) {
        if (m_.find_component(end->id)->item.id != f.item) {
          sink_.error(end->span, "BAD_VALUE", "flow endpoint '" + end->id + "' is outside item '" + f.item + "'",
                      end->id);
        }
      }
    }
  }

  SourceSpan first_span() const {
    std::vector<SourceSpan> spans;
    for (const auto& f : m_.functions) spans.push_back(f.span);
    for (const auto& c : m_.components) spans.push_back(c.span);
    for (const auto& i : m_.items) spans.push_back(i.span);
    if (spans.empty()) return {};
    return *std::min_element(spans.begin(), spans.end(),
                             [](const SourceSpan& a, const SourceSpan& b) { return span_key(a) < span_key(b); });
  }

  void functions_and_texts() {
    std::map<std::pair<std::string, GuideWord>, const AuthoredHazardText*> seen;
    std::vector<const AuthoredHazardText*> texts;
    for (const auto& t : m_.hazard_texts) texts.push_back(&t);
    std::stable_sort(texts.begin(), texts.end(), [](const auto* a, const auto* b) {
      return span_key(a->span) < span_key(b->span);
    });
    for (const AuthoredHazardText* t : texts) {
      const SystemFunction* fn = m_.find_function(t->function.id);
      if (fn == nullptr) {
        sink_.error(t->function.span, "UNKNOWN_REF", "hazard text names unknown function '" + t->function.id + "'",
                    t->function.id);
        continue;
      }
      if (std::find(fn->guide_words.begin(), fn->guide_words.end(), t->guide_word) == fn->guide_words.end()) {
        sink_.error(t->span, "HAZARD_NOT_APPLICABLE",
                    "guide word '" + std::string(to_string(t->guide_word)) + "' is not applied to function '" +
                        fn->id + "'",
                    fn->id);
        continue;
      }
      if (!seen.emplace(std::make_pair(fn->id, t->guide_word), t).second) {
        sink_.error(t->span, "DUP_ID", "hazard text for '" + hara::hazard_id(fn->id, t->guide_word) + "' given twice",
                    hara::hazard_id(fn->id, t->guide_word));
      }
    }
    hazards_ = hara::generate_hazards(m_);
  }

  void check_pattern_refs(const TriplePattern& p, const std::string& what) {
    const std::string* parts[] = {&p.hazard, &p.mode, &p.situation};
    for (int i = 0; i < 3; ++i) {
      const std::string& v = *parts[i];
      if (has_glob(v)) continue;
      bool known = false;
      if (i == 0) {
        known = std::any_of(hazards_.begin(), hazards_.end(), [&](const Hazard& h) { return h.id == v; });
      } else if (i == 1) {
        known = std::any_of(m_.modes.begin(), m_.modes.end(), [&](const auto& x) { return x.id == v; });
      } else {
        known = std::any_of(m_.situations.begin(), m_.situations.end(), [&](const auto& x) { return x.id == v; });
      }
      if (!known) {
        static const char* kinds[] = {"hazard", "mode", "situation"};
        const SourceSpan& at = p.part_spans.size() == 3 ? p.part_spans[static_cast<std::size_t>(i)] : p.span;
        sink_.error(at, "UNKNOWN_REF", what + " names unknown " + kinds[i] + " '" + v + "'", v);
      }
    }
  }

  template <typename Fn>
  void for_each_raw_triple(Fn fn) const {
    for (const Hazard& h : hazards_) {
      for (const auto& mo : m_.modes) {
        if (mo.perspective != h.perspective) continue;
        for (const auto& si : m_.situations) {
          if (si.perspective == h.perspective) fn(h, mo, si);
        }
      }
    }
  }

  void conditions_and_feasibility() {
    std::map<Perspective, const FeasibilityDefault*> defaults;
    for (const auto& d : m_.feasibility_defaults) {
      auto [it, inserted] = defaults.emplace(d.perspective, &d);
      if (!inserted && !(it->second->span == d.span)) {
        sink_.error(d.span, "DUP_ID",
                    "feasibility default for '" + std::string(to_string(d.perspective)) + "' declared twice");
      }
    }
    for (const auto& ex : m_.feasibility_exceptions) {
      check_pattern_refs(ex.pattern, ex.feasible ? "feasible" : "infeasible");
    }

    std::vector<bool> used(m_.feasibility_exceptions.size(), false);
    std::set<std::tuple<std::string, int, int>> conflict_reported;
    for_each_raw_triple([&](const Hazard& h, const OperationalMode& mo, const OperationalSituation& si) {
      const FeasibilityException* yes = nullptr;
      const FeasibilityException* no = nullptr;
      for (std::size_t i = 0; i < m_.feasibility_exceptions.size(); ++i) {
        const auto& ex = m_.feasibility_exceptions[i];
        if (!hara::matches(ex.pattern, h.id, mo.id, si.id)) continue;
        used[i] = true;
        (ex.feasible ? yes : no) = &ex;
      }
      if (yes && no) {
        const auto* later = span_key(yes->pattern.span) < span_key(no->pattern.span) ? no : yes;
        if (conflict_reported.insert(span_key(later->pattern.span)).second) {
          sink_.error(later->pattern.span, "CONFLICTING_FEASIBILITY",
                      "event '" + event_id(h.id, mo.id, si.id) + "' is declared both feasible and infeasible",
                      event_id(h.id, mo.id, si.id));
        }
        return;
      }
      auto d = defaults.find(h.perspective);
      const bool default_feasible = d == defaults.end() || d->second->feasible;
      if (yes || (!no && default_feasible)) {
        triples_.push_back(Feasible{&h, &mo, &si, yes, d == defaults.end() ? nullptr : d->second});
      }
    });
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (used[i]) continue;
      const auto& ex = m_.feasibility_exceptions[i];
      sink_.warning(ex.pattern.span, "UNMATCHED_PATTERN", "feasibility exception matches no hazardous event");
    }
  }

  void ratings() {
    for (const auto& r : m_.ratings) check_pattern_refs(r.pattern, "event_rating");

    struct Missing {
      SourceSpan span;
      std::size_t count = 0;
      std::string example;
    };
    std::map<std::tuple<std::string, int, int>, Missing> missing;
    std::set<std::tuple<std::string, int, int>> ambiguous_reported;
    std::vector<bool> used(m_.ratings.size(), false);

    for (const Feasible& t : triples_) {
      const std::string id = event_id(t.hazard->id, t.mode->id, t.situation->id);
      const auto match = hara::match_ratings(
          hara::Triple{t.hazard->id, t.mode->id, t.situation->id, t.hazard->perspective}, m_.ratings);
      for (const auto* list : {&match.severity, &match.exposure, &match.controllability}) {
        for (const RatingRule* r : *list) used[static_cast<std::size_t>(r - m_.ratings.data())] = true;
      }
      if (!match.complete()) {
        std::string lacking;
        if (match.severity.empty()) lacking += "severity ";
        if (match.exposure.empty()) lacking += "exposure ";
        if (match.controllability.empty()) lacking += "controllability ";
        lacking.pop_back();
        SourceSpan at;
        if (t.feasible_by) {
          at = t.feasible_by->pattern.span;
        } else if (t.by_default) {
          at = t.by_default->span;
        } else if (const SystemFunction* fn = m_.find_function(t.hazard->function)) {
          at = fn->span;
        }
        Missing& slot = missing[span_key(at)];
        slot.span = at;
        if (slot.count++ == 0) slot.example = id + " (no " + lacking + ")";
      }
      auto report_ambiguous = [&](const std::vector<const RatingRule*>& rules, const char* what) {
        if (rules.size() < 2) return;
        const RatingRule* later = rules[1];
        if (!ambiguous_reported.insert(span_key(later->span)).second) return;
        sink_.error(later->span, "AMBIGUOUS_RATING",
                    std::string(what) + " of event '" + id + "' is supplied by more than one event_rating", id);
      };
      report_ambiguous(match.severity, "severity");
      report_ambiguous(match.exposure, "exposure");
      report_ambiguous(match.controllability, "controllability");
    }
    for (const auto& [key, slot] : missing) {
      std::string msg = "feasible event " + slot.example + " has no complete S/E/C rating";
      if (slot.count > 1) msg += " (and " + std::to_string(slot.count - 1) + " more)";
      sink_.error(slot.span, "MISSING_RATING", msg);
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i]) {
        sink_.warning(m_.ratings[i].span, "UNMATCHED_PATTERN", "event_rating matches no feasible hazardous event");
      }
    }
  }

  void goals() {
    std::map<std::string, const MergeGoal*> owner;
    for (const MergeGoal& g : m_.merge_goals) {
      std::set<Perspective> perspectives;
      for (const Ref& pattern : g.event_patterns) {
        bool hit = false;
        for (const Feasible& t : triples_) {
          const std::string id = event_id(t.hazard->id, t.mode->id, t.situation->id);
          if (!hara::glob_match(pattern.id, id)) continue;
          hit = true;
          perspectives.insert(t.hazard->perspective);
          auto [it, inserted] = owner.emplace(id, &g);
          if (!inserted && it->second != &g) {
            sink_.error(pattern.span, "EVENT_IN_TWO_GOALS",
                        "event '" + id + "' already belongs to goal '" + it->second->id + "'", g.id);
          }
        }
        if (!hit) {
          sink_.warning(pattern.span, "UNMATCHED_PATTERN",
                        "event pattern '" + pattern.id + "' matches no feasible hazardous event", g.id);
        }
      }
      if (perspectives.size() > 1) {
        sink_.error(g.span, "PERSPECTIVE_MIX", "merge_goal '" + g.id + "' mixes vehicular and cooperative events",
                    g.id);
      }
      if (!perspectives.empty()) goal_perspective_[g.id] = *perspectives.begin();
    }
    for (const Feasible& t : triples_) {
      const std::string id = event_id(t.hazard->id, t.mode->id, t.situation->id);
      if (!owner.count(id)) goal_perspective_[hara::singleton_goal_id(id)] = t.hazard->perspective;
    }
  }

  void trees() {
    TreeContext ctx;
    for (const auto& [id, p] : goal_perspective_) ctx.goals.insert(id);
    for (const MergeGoal& g : m_.merge_goals) ctx.goals.insert(g.id);
    for (const auto& c : m_.components) ctx.components.insert(c.id);
    TreeParseResult resolved = resolve_fault_trees(m_.trees, ctx);
    out_.insert(out_.end(), resolved.diagnostics.begin(), resolved.diagnostics.end());

    std::set<std::string> goals_with_tree;
    for (const FaultTree& t : resolved.trees) {
      goals_with_tree.insert(t.goal);
      auto p = goal_perspective_.find(t.goal);
      std::vector<const Gate*> stack{&t.root};
      while (!stack.empty()) {
        const Gate* g = stack.back();
        stack.pop_back();
        for (const Gate& c : g->children) stack.push_back(&c);
        if (g->kind != Gate::Kind::Basic) continue;
        basic_events_[p == goal_perspective_.end() ? Perspective::Vehicular : p->second].insert(g->basic);
        if (p == goal_perspective_.end() || p->second != Perspective::Vehicular) continue;
        const FunctionalComponent* c = m_.find_component(g->basic.component);
        const Item* item = c ? m_.find_item(c->item.id) : nullptr;
        if (item != nullptr && item->kind != ItemKind::VehicleType) {
          sink_.error(g->component_span, "OUT_OF_SCOPE",
                      "vehicular goal '" + t.goal + "' cannot depend on cooperative component '" + c->id + "'",
                      t.goal);
        }
      }
    }
    for (const MergeGoal& g : m_.merge_goals) {
      if (goal_perspective_.count(g.id) && !goals_with_tree.count(g.id)) {
        sink_.warning(g.span, "MISSING_TREE", "safety goal '" + g.id + "' has no fault tree", g.id);
      }
    }
    for (const Feasible& t : triples_) {
      const std::string gid = hara::singleton_goal_id(event_id(t.hazard->id, t.mode->id, t.situation->id));
      if (!goal_perspective_.count(gid) || goals_with_tree.count(gid)) continue;
      const SystemFunction* fn = m_.find_function(t.hazard->function);
      sink_.warning(fn ? fn->span : SourceSpan{}, "MISSING_TREE", "safety goal '" + gid + "' has no fault tree", gid);
    }
  }

  void technical_architecture() {
    for (const auto& tc : m_.tech_components) {
      if (tc.realizes) {
        if (!m_.find_component(tc.realizes->id)) {
          sink_.error(tc.realizes->span, "UNKNOWN_COMPONENT",
                      "tech_component '" + tc.id + "' realizes unknown component '" + tc.realizes->id + "'", tc.id);
        }
      } else if (!tc.mechanism) {
        sink_.error(tc.span, "MISSING_FIELD",
                    "tech_component '" + tc.id + "' must realize a functional component or be a mechanism", tc.id);
      }
      for (const Ref& link : tc.linked_mechanisms) {
        if (!m_.find_tech_component(link.id)) {
          sink_.error(link.span, "UNKNOWN_REF", "tech_component '" + tc.id + "' links unknown '" + link.id + "'",
                      tc.id);
        } else if (link.id == tc.id) {
          sink_.error(link.span, "BAD_VALUE", "tech_component '" + tc.id + "' links itself", tc.id);
        }
      }
    }
  }

  void annotations() {
    std::set<std::string> ids;
    for (const auto& a : m_.annotations) ids.insert(a.id);
    std::vector<const FsrAnnotation*> ordered;
    for (const auto& a : m_.annotations) ordered.push_back(&a);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) { return span_key(a->span) < span_key(b->span); });
    std::vector<const FsrAnnotation*> keyed;
    for (const FsrAnnotation* a : ordered) {
      if (a->components.size() != 1) {
        sink_.error(a->span, "FSR_ALLOCATION",
                    "FSR allocated to ≠1 component: '" + a->id + "' names " + std::to_string(a->components.size()),
                    a->id);
      }
      for (const Ref& c : a->components) {
        if (!m_.find_component(c.id)) {
          sink_.error(c.span, "UNKNOWN_COMPONENT", "fsr_annotation '" + a->id + "' names unknown component '" + c.id +
                                                       "'",
                      a->id);
        }
      }
      for (const Ref& other : a->conflicts_with) {
        if (other.id == a->id) {
          sink_.error(other.span, "BAD_VALUE", "fsr_annotation '" + a->id + "' cannot conflict with itself", a->id);
        } else if (!ids.count(other.id)) {
          sink_.error(other.span, "UNKNOWN_REF", "conflicts_with names unknown FSR '" + other.id + "'", a->id);
        }
      }
      if (a->components.size() != 1) continue;
      for (const FsrAnnotation* prev : keyed) {
        const bool same_key = prev->components[0].id == a->components[0].id && prev->failure_mode == a->failure_mode;
        const bool overlap = !prev->perspective || !a->perspective || *prev->perspective == *a->perspective;
        if (same_key && overlap) {
          sink_.error(a->span, "DUP_ID",
                      "fsr_annotation '" + a->id + "' annotates the same basic event as '" + prev->id + "'", a->id);
          break;
        }
      }
      keyed.push_back(a);

      bool used = false;
      for (Perspective p : {Perspective::Vehicular, Perspective::Cooperative}) {
        if (a->perspective && *a->perspective != p) continue;
        for (const BasicEvent& b : basic_events_[p]) {
          if (b.failure_mode == a->failure_mode &&
              (b.component == a->components[0].id || m_.allocation_target(b.component) == a->components[0].id)) {
            used = true;
          }
        }
      }
      if (!used) {
        sink_.warning(a->span, "UNMATCHED_PATTERN", "fsr_annotation '" + a->id + "' matches no basic event", a->id);
      }
    }
  }

  struct Feasible {
    const Hazard* hazard;
    const OperationalMode* mode;
    const OperationalSituation* situation;
    const FeasibilityException* feasible_by;
    const FeasibilityDefault* by_default;
  };

  const Model& m_;
  Diagnostics out_;
  DiagnosticSink sink_;
  std::vector<Hazard> hazards_;
  std::vector<Feasible> triples_;
  std::map<std::string, Perspective> goal_perspective_;
  std::map<Perspective, std::set<BasicEvent>> basic_events_;
};

}  // namespace

Diagnostics validate_model(const Model& model) { return Validator(model).run(); }

Diagnostics validate_against_catalog(const Model& model, const Catalog& catalog) {
  Diagnostics out;
  DiagnosticSink sink(out);
  for (const auto& tc : model.tech_components) {
    for (const auto& t : tc.tactics) {
      if (!catalog.find_tactic(t.tactic.id)) {
        sink.error(t.tactic.span, "UNKNOWN_TACTIC",
                   "tech_component '" + tc.id + "' implements unknown tactic '" + t.tactic.id + "'", tc.id);
      }
    }
  }
  if (!catalog.responses.empty()) {
    for (const auto& a : model.annotations) {
      if (!a.response_class.empty() && !catalog.responses.count(a.response_class)) {
        sink.error(a.span, "BAD_VALUE", "fsr_annotation '" + a.id + "' uses unknown response class '" +
                                            a.response_class + "'",
                   a.id);
      }
    }
  }
  sort_diagnostics(out);
  return out;
}

}  // namespace coopsafe
