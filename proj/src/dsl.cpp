#include "coopsafe/dsl.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "coopsafe/syntax.hpp"
#include "coopsafe/validate.hpp"
#include "statement_util.hpp"

namespace coopsafe {

namespace fs = std::filesystem;

std::vector<SourceFile> read_sources(const std::vector<fs::path>& paths) {
  std::vector<fs::path> files;
  for (const fs::path& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".coop") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::vector<SourceFile> sources;
  for (const fs::path& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw InputError("IO", "cannot read model file '" + f.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    sources.push_back(SourceFile{f.string(), buffer.str()});
  }
  return sources;
}

namespace {

using detail::DiagnosticSink;
using detail::Statement;
using detail::Token;
using detail::TokenKind;

std::optional<Gate> read_gate(const Statement& st, DiagnosticSink& sink) {
  const std::string& k = st.keyword.text;
  Gate g;
  g.span = st.keyword.span;
  if (k == "or" || k == "and") {
    g.kind = k == "or" ? Gate::Kind::Or : Gate::Kind::And;
    if (!st.args.empty()) sink.error(st.args.front().span, "MALFORMED_TREE", "'" + k + "' gate takes no arguments");
    for (const Statement& child : st.body) {
      if (auto c = read_gate(child, sink)) g.children.push_back(std::move(*c));
    }
    if (g.children.empty()) {
      sink.error(st.keyword.span, "MALFORMED_TREE", "'" + k + "' gate needs at least one child");
      return std::nullopt;
    }
    return g;
  }
  if (k == "basic") {
    detail::no_body(st, sink);
    if (st.args.size() != 2 || st.args[0].kind != TokenKind::Word || st.args[1].kind != TokenKind::Word) {
      sink.error(st.keyword.span, "MALFORMED_TREE", "'basic' expects a component and a failure mode");
      return std::nullopt;
    }
    g.kind = Gate::Kind::Basic;
    g.basic = BasicEvent{st.args[0].text, st.args[1].text};
    g.component_span = st.args[0].span;
    return g;
  }
  if (k == "include") {
    detail::no_body(st, sink);
    auto name = detail::single_word(st, sink);
    if (!name) return std::nullopt;
    g.kind = Gate::Kind::Include;
    g.include = name->text;
    g.component_span = name->span;
    return g;
  }
  sink.error(st.keyword.span, "MALFORMED_TREE", "expected 'or', 'and', 'basic' or 'include', found '" + k + "'");
  return std::nullopt;
}

std::optional<FaultTreeDecl> read_tree(const Statement& st, DiagnosticSink& sink) {
  FaultTreeDecl decl;
  decl.span = st.keyword.span;
  std::size_t i = 0;
  const auto& a = st.args;
  if (i < a.size() && a[i].kind == TokenKind::Word && a[i].text != "for") decl.name = a[i++].text;
  if (i < a.size() && a[i].kind == TokenKind::Word && a[i].text == "for") {
    ++i;
    if (i >= a.size() || a[i].kind != TokenKind::Word) {
      sink.error(a[i - 1].span, "MALFORMED_TREE", "'for' must be followed by a goal id");
      return std::nullopt;
    }
    decl.goal = detail::ref_of(a[i++]);
  }
  if (i != a.size()) {
    sink.error(a[i].span, "MALFORMED_TREE", "unexpected '" + a[i].text + "' in tree header");
    return std::nullopt;
  }
  if (decl.name.empty()) {
    if (!decl.goal) {
      sink.error(st.keyword.span, "MALFORMED_TREE", "a tree needs a name or a 'for <goal>' clause");
      return std::nullopt;
    }
    decl.name = decl.goal->id + "@" + std::to_string(st.keyword.span.line);
  }
  if (st.body.size() != 1) {
    sink.error(st.keyword.span, "MALFORMED_TREE", "tree '" + decl.name + "' must contain exactly one top gate");
  }
  if (!st.body.empty()) decl.root = read_gate(st.body.front(), sink);
  return decl;
}

class ModelReader {
 public:
  ModelReader(Model& model, DiagnosticSink& sink) : model_(model), sink_(sink) {}

  void read(const syntax::Document& doc) {
    for (const Statement& st : doc.statements) read_top(st);
  }

 private:
  void read_top(const Statement& st) {
    const std::string& kind = st.keyword.text;
    if (kind == "item") return read_item(st);
    if (kind == "component") return read_component(st, std::nullopt);
    if (kind == "flow") return read_flow(st, std::nullopt);
    if (kind == "function") return read_function(st);
    if (kind == "mode" || kind == "situation") return read_condition(st);
    if (kind == "feasibility_default") return read_feasibility_default(st);
    if (kind == "feasible" || kind == "infeasible") return read_feasibility_exception(st);
    if (kind == "hazard") return read_hazard_text(st);
    if (kind == "event_rating") return read_rating(st);
    if (kind == "merge_goal") return read_merge_goal(st);
    if (kind == "tree") {
      if (auto decl = read_tree(st, sink_)) model_.trees.push_back(std::move(*decl));
      return;
    }
    if (kind == "tech_component") return read_tech_component(st);
    if (kind == "implements_tactic") return read_top_level_tactic(st);
    if (kind == "fsr_annotation") return read_annotation(st);
    if (kind == "tactic" || kind == "pattern" || kind == "exclusive" || kind == "response") {
      sink_.error(st.keyword.span, "UNKNOWN_KIND", "'" + kind + "' belongs in a catalog file");
      return;
    }
    sink_.error(st.keyword.span, "UNKNOWN_KIND", "unknown block kind '" + kind + "'");
  }

  std::optional<Perspective> perspective_of(const Statement& e) {
    auto w = detail::single_word(e, sink_);
    if (!w) return std::nullopt;
    auto p = parse_perspective(w->text);
    if (!p) sink_.error(w->span, "BAD_VALUE", "perspective must be 'vehicular' or 'cooperative'");
    return p;
  }

  void read_item(const Statement& st) {
    const auto h = detail::read_header(st);
    if (!h.id) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "item needs an identifier");
      return;
    }
    Item item;
    item.id = h.id->text;
    item.name = h.name ? h.name->text : item.id;
    item.span = h.id->span;
    bool kind_set = false;
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      if (key == "kind") {
        auto w = detail::single_word(e, sink_);
        if (!w) continue;
        if (w->text == "vehicle") {
          item.kind = ItemKind::VehicleType;
        } else if (w->text == "cooperative") {
          item.kind = ItemKind::CooperativeSystem;
        } else {
          sink_.error(w->span, "BAD_VALUE", "item kind must be 'vehicle' or 'cooperative'");
          continue;
        }
        kind_set = true;
      } else if (key == "component") {
        read_component(e, item.id);
      } else if (key == "flow") {
        read_flow(e, item.id);
      } else {
        detail::unknown_key(e, "item", sink_);
      }
    }
    if (!kind_set) sink_.error(item.span, "MISSING_FIELD", "item '" + item.id + "' needs a kind", item.id);
    model_.items.push_back(std::move(item));
  }

  void read_component(const Statement& st, const std::optional<std::string>& enclosing_item) {
    const auto h = detail::read_header(st);
    if (!h.id && !h.name) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "component needs an identifier");
      return;
    }
    FunctionalComponent c;
    c.id = h.id ? h.id->text : detail::slugify(h.name->text);
    c.name = h.name ? h.name->text : c.id;
    c.span = h.id ? h.id->span : h.name->span;
    if (enclosing_item) c.item = Ref{*enclosing_item, c.span};
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      if (key == "item") {
        if (enclosing_item) {
          sink_.error(e.keyword.span, "BAD_VALUE", "component nested in an item cannot name another item");
        } else if (auto w = detail::single_word(e, sink_)) {
          c.item = detail::ref_of(*w);
        }
      } else if (key == "class") {
        if (e.args.size() == 1) {
          c.component_class = e.args[0].text;
        } else {
          sink_.error(e.keyword.span, "BAD_VALUE", "'class' expects one value");
        }
      } else if (key == "ref") {
        if (auto w = detail::single_word(e, sink_)) c.ref = detail::ref_of(*w);
      } else if (key == "external") {
        c.external = true;
      } else if (key == "name") {
        if (auto s = detail::single_string(e, sink_)) c.name = s->text;
      } else {
        detail::unknown_key(e, "component", sink_);
      }
    }
    if (c.item.id.empty()) sink_.error(c.span, "MISSING_FIELD", "component '" + c.id + "' needs an item", c.id);
    model_.components.push_back(std::move(c));
  }

  void read_flow(const Statement& st, const std::optional<std::string>& enclosing_item) {
    if (st.args.size() != 2 || st.args[0].kind != TokenKind::Word || st.args[1].kind != TokenKind::Word) {
      sink_.error(st.keyword.span, "BAD_VALUE", "'flow' expects a source and a target component");
      return;
    }
    Flow f;
    f.from = detail::ref_of(st.args[0]);
    f.to = detail::ref_of(st.args[1]);
    f.span = st.keyword.span;
    if (enclosing_item) f.item = *enclosing_item;
    for (const Statement& e : st.body) {
      if (e.keyword.text == "item" && !enclosing_item) {
        if (auto w = detail::single_word(e, sink_)) f.item = w->text;
      } else {
        detail::unknown_key(e, "flow", sink_);
      }
    }
    model_.flows.push_back(std::move(f));
  }

  void read_function(const Statement& st) {
    const auto h = detail::read_header(st);
    if (!h.name || h.name->text.empty()) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "function needs a non-empty quoted description");
      return;
    }
    SystemFunction fn;
    fn.description = h.name->text;
    fn.id = h.id ? h.id->text : detail::slugify(fn.description);
    fn.span = h.id ? h.id->span : h.name->span;
    bool perspective_set = false;
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      if (key == "perspective") {
        if (auto p = perspective_of(e)) {
          fn.perspective = *p;
          perspective_set = true;
        }
      } else if (key == "scenario") {
        if (auto w = detail::single_word(e, sink_)) fn.scenario = w->text;
      } else if (key == "guide_words") {
        for (const Token& t : detail::word_list(e, sink_)) {
          auto g = parse_guide_word(t.text);
          if (!g) {
            sink_.error(t.span, "BAD_VALUE", "unknown guide word '" + t.text + "'", fn.id);
          } else if (std::find(fn.guide_words.begin(), fn.guide_words.end(), *g) != fn.guide_words.end()) {
            sink_.error(t.span, "DUP_ID", "guide word '" + t.text + "' listed twice", fn.id);
          } else {
            fn.guide_words.push_back(*g);
          }
        }
      } else {
        detail::unknown_key(e, "function", sink_);
      }
    }
    std::sort(fn.guide_words.begin(), fn.guide_words.end());
    if (!perspective_set) {
      sink_.error(fn.span, "MISSING_FIELD", "function '" + fn.id + "' needs a perspective", fn.id);
    }
    model_.functions.push_back(std::move(fn));
  }

  void read_condition(const Statement& st) {
    const bool is_mode = st.keyword.text == "mode";
    const auto h = detail::read_header(st);
    if (!h.id) {
      sink_.error(st.keyword.span, "MISSING_FIELD", st.keyword.text + " needs an identifier");
      return;
    }
    std::optional<Perspective> perspective;
    for (const Statement& e : st.body) {
      if (e.keyword.text == "perspective") {
        perspective = perspective_of(e);
      } else {
        detail::unknown_key(e, st.keyword.text, sink_);
      }
    }
    if (!perspective) {
      sink_.error(h.id->span, "MISSING_FIELD", st.keyword.text + " '" + h.id->text + "' needs a perspective",
                  h.id->text);
      return;
    }
    const std::string name = h.name ? h.name->text : h.id->text;
    if (is_mode) {
      model_.modes.push_back(OperationalMode{h.id->text, name, *perspective, h.id->span});
    } else {
      model_.situations.push_back(OperationalSituation{h.id->text, name, *perspective, h.id->span});
    }
  }

  void read_feasibility_default(const Statement& st) {
    detail::no_body(st, sink_);
    const auto words = detail::word_list(st, sink_);
    if (words.empty() || words.size() > 2 || (words[0].text != "feasible" && words[0].text != "infeasible")) {
      sink_.error(st.keyword.span, "BAD_VALUE", "expected 'feasibility_default feasible|infeasible [perspective];'");
      return;
    }
    const bool feasible = words[0].text == "feasible";
    if (words.size() == 2) {
      auto p = parse_perspective(words[1].text);
      if (!p) {
        sink_.error(words[1].span, "BAD_VALUE", "perspective must be 'vehicular' or 'cooperative'");
        return;
      }
      model_.feasibility_defaults.push_back(FeasibilityDefault{*p, feasible, st.keyword.span});
    } else {
      model_.feasibility_defaults.push_back(FeasibilityDefault{Perspective::Vehicular, feasible, st.keyword.span});
      model_.feasibility_defaults.push_back(FeasibilityDefault{Perspective::Cooperative, feasible, st.keyword.span});
    }
  }

  std::optional<TriplePattern> triple_args(const Statement& st, std::size_t count_check) {
    if (st.args.size() < 3 || st.args[0].kind != TokenKind::Word || st.args[1].kind != TokenKind::Word ||
        st.args[2].kind != TokenKind::Word || (count_check && st.args.size() != 3)) {
      sink_.error(st.keyword.span, "BAD_VALUE", "'" + st.keyword.text + "' expects <hazard> <mode> <situation>");
      return std::nullopt;
    }
    TriplePattern t{st.args[0].text, st.args[1].text, st.args[2].text, st.keyword.span,
                    {st.args[0].span, st.args[1].span, st.args[2].span}};
    return t;
  }

  void read_feasibility_exception(const Statement& st) {
    detail::no_body(st, sink_);
    if (auto t = triple_args(st, 1)) {
      model_.feasibility_exceptions.push_back(FeasibilityException{std::move(*t), st.keyword.text == "feasible"});
    }
  }

  void read_hazard_text(const Statement& st) {
    detail::no_body(st, sink_);
    const auto& a = st.args;
    if (a.size() != 3 || a[0].kind != TokenKind::Word || a[1].kind != TokenKind::Word ||
        a[2].kind != TokenKind::String) {
      sink_.error(st.keyword.span, "BAD_VALUE", "expected 'hazard <function> <guide_word> \"text\";'");
      return;
    }
    auto g = parse_guide_word(a[1].text);
    if (!g) {
      sink_.error(a[1].span, "BAD_VALUE", "unknown guide word '" + a[1].text + "'");
      return;
    }
    if (a[2].text.empty()) {
      sink_.error(a[2].span, "MISSING_FIELD", "hazard text must not be empty");
      return;
    }
    model_.hazard_texts.push_back(AuthoredHazardText{detail::ref_of(a[0]), *g, a[2].text, st.keyword.span});
  }

  void set_class(const Token& t, RatingRule& rule) {
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(t.text.empty() ? ' ' : t.text[0])));
    auto assign = [&](auto& slot, int max, auto tag) {
      using Enum = decltype(tag);
      if (slot) sink_.error(t.span, "BAD_VALUE", "class '" + std::string(1, letter) + "' given twice");
      auto v = detail::parse_class(t, letter, max);
      if (!v) {
        sink_.error(t.span, "BAD_VALUE", "malformed rating '" + t.text + "'");
        return;
      }
      slot = static_cast<Enum>(*v);
    };
    if (letter == 'S') {
      assign(rule.severity, 3, Severity{});
    } else if (letter == 'E') {
      assign(rule.exposure, 4, Exposure{});
    } else if (letter == 'C') {
      assign(rule.controllability, 3, Controllability{});
    } else {
      sink_.error(t.span, "BAD_VALUE", "malformed rating '" + t.text + "' (expected S0-S3, E0-E4 or C0-C3)");
    }
  }

  void read_rating(const Statement& st) {
    auto t = triple_args(st, 0);
    if (!t) return;
    RatingRule rule;
    rule.pattern = std::move(*t);
    rule.span = st.keyword.span;
    for (std::size_t i = 3; i < st.args.size(); ++i) set_class(st.args[i], rule);
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      const char letter = key == "severity" ? 'S' : key == "exposure" ? 'E' : key == "controllability" ? 'C' : 0;
      if (letter == 0) {
        detail::unknown_key(e, "event_rating", sink_);
        continue;
      }
      auto w = detail::single_word(e, sink_);
      if (!w) continue;
      Token value = *w;
      if (!value.text.empty() && std::isdigit(static_cast<unsigned char>(value.text[0]))) {
        value.text.insert(value.text.begin(), letter);
      }
      if (std::toupper(static_cast<unsigned char>(value.text[0])) != letter) {
        sink_.error(w->span, "BAD_VALUE", "malformed " + key + " '" + w->text + "'");
        continue;
      }
      set_class(value, rule);
    }
    if (!rule.severity && !rule.exposure && !rule.controllability) {
      sink_.error(st.keyword.span, "BAD_VALUE", "event_rating supplies no severity, exposure or controllability");
      return;
    }
    model_.ratings.push_back(std::move(rule));
  }

  void read_merge_goal(const Statement& st) {
    const auto h = detail::read_header(st);
    if (!h.id) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "merge_goal needs an identifier");
      return;
    }
    MergeGoal g;
    g.id = h.id->text;
    g.text = h.name ? h.name->text : std::string{};
    g.span = h.id->span;
    for (const Statement& e : st.body) {
      if (e.keyword.text == "events") {
        for (const Token& t : detail::word_list(e, sink_)) g.event_patterns.push_back(detail::ref_of(t));
      } else if (e.keyword.text == "text") {
        if (auto s = detail::single_string(e, sink_)) g.text = s->text;
      } else {
        detail::unknown_key(e, "merge_goal", sink_);
      }
    }
    if (g.text.empty()) sink_.error(g.span, "MISSING_FIELD", "merge_goal '" + g.id + "' needs goal text", g.id);
    if (g.event_patterns.empty()) {
      sink_.error(g.span, "MISSING_FIELD", "merge_goal '" + g.id + "' lists no events", g.id);
    }
    model_.merge_goals.push_back(std::move(g));
  }

  void read_tech_component(const Statement& st) {
    const auto h = detail::read_header(st);
    if (!h.id) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "tech_component needs an identifier");
      return;
    }
    TechnicalComponent tc;
    tc.id = h.id->text;
    tc.name = h.name ? h.name->text : tc.id;
    tc.span = h.id->span;
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      if (key == "realizes") {
        const auto words = detail::word_list(e, sink_);
        if (words.size() != 1) {
          sink_.error(e.keyword.span, "BAD_VALUE", "a technical component realizes exactly one functional component",
                      tc.id);
        } else {
          tc.realizes = detail::ref_of(words[0]);
        }
      } else if (key == "links") {
        for (const Token& t : detail::word_list(e, sink_)) tc.linked_mechanisms.push_back(detail::ref_of(t));
      } else if (key == "mechanism") {
        tc.mechanism = true;
      } else if (key == "implements_tactic") {
        const auto& a = e.args;
        if (a.empty() || a.size() > 2 || a[0].kind != TokenKind::Word ||
            (a.size() == 2 && a[1].kind != TokenKind::String)) {
          sink_.error(e.keyword.span, "BAD_VALUE", "expected 'implements_tactic <tactic> \"evidence\";'");
          continue;
        }
        tc.tactics.push_back(ImplementedTactic{detail::ref_of(a[0]), a.size() == 2 ? a[1].text : std::string{}});
      } else {
        detail::unknown_key(e, "tech_component", sink_);
      }
    }
    model_.tech_components.push_back(std::move(tc));
  }

  void read_top_level_tactic(const Statement& st) {
    detail::no_body(st, sink_);
    const auto& a = st.args;
    if (a.size() < 2 || a.size() > 3 || a[0].kind != TokenKind::Word || a[1].kind != TokenKind::Word ||
        (a.size() == 3 && a[2].kind != TokenKind::String)) {
      sink_.error(st.keyword.span, "BAD_VALUE", "expected 'implements_tactic <tech_component> <tactic> \"evidence\";'");
      return;
    }
    pending_tactics_.push_back({detail::ref_of(a[0]), ImplementedTactic{detail::ref_of(a[1]),
                                                                        a.size() == 3 ? a[2].text : std::string{}}});
  }

  void read_annotation(const Statement& st) {
    const auto h = detail::read_header(st);
    if (!h.id) {
      sink_.error(st.keyword.span, "MISSING_FIELD", "fsr_annotation needs an identifier");
      return;
    }
    FsrAnnotation a;
    a.id = h.id->text;
    a.span = h.id->span;
    if (h.name) a.text = h.name->text;
    for (const Statement& e : st.body) {
      const std::string& key = e.keyword.text;
      if (key == "component") {
        for (const Token& t : detail::word_list(e, sink_)) a.components.push_back(detail::ref_of(t));
      } else if (key == "failure_mode") {
        if (auto w = detail::single_word(e, sink_)) a.failure_mode = w->text;
      } else if (key == "perspective") {
        a.perspective = perspective_of(e);
      } else if (key == "trigger") {
        if (auto w = detail::single_word(e, sink_)) a.trigger = w->text;
      } else if (key == "response" || key == "response_class") {
        if (auto w = detail::single_word(e, sink_)) a.response_class = w->text;
      } else if (key == "requires") {
        read_requirement(e, a);
      } else if (key == "text") {
        if (auto s = detail::single_string(e, sink_)) a.text = s->text;
      } else if (key == "conflicts_with") {
        for (const Token& t : detail::word_list(e, sink_)) a.conflicts_with.push_back(detail::ref_of(t));
      } else {
        detail::unknown_key(e, "fsr_annotation", sink_);
      }
    }
    auto require = [&](const std::string& value, const char* field) {
      if (value.empty()) {
        sink_.error(a.span, "MISSING_FIELD", "fsr_annotation '" + a.id + "' needs '" + field + "'", a.id);
      }
    };
    require(a.failure_mode, "failure_mode");
    require(a.trigger, "trigger");
    require(a.response_class, "response");
    if (a.components.empty()) {
      sink_.error(a.span, "MISSING_FIELD", "fsr_annotation '" + a.id + "' needs 'component'", a.id);
    }
    if (a.requirement.alternatives.empty()) {
      sink_.error(a.span, "EMPTY_REQUIREMENT", "fsr_annotation '" + a.id + "' needs a 'requires' expression", a.id);
    }
    model_.annotations.push_back(std::move(a));
  }

  void read_requirement(const Statement& e, FsrAnnotation& a) {
    CapabilitySet current;
    bool ok = true;
    auto close = [&](const SourceSpan& at) {
      if (current.empty()) {
        sink_.error(at, "EMPTY_REQUIREMENT", "empty alternative in requirement of '" + a.id + "'", a.id);
        ok = false;
      } else {
        a.requirement.alternatives.push_back(std::move(current));
      }
      current.clear();
    };
    for (const Token& t : e.args) {
      if (t.kind == TokenKind::Pipe) {
        close(t.span);
      } else if (t.kind == TokenKind::Word) {
        current.insert(t.text);
      } else {
        sink_.error(t.span, "BAD_VALUE", "requirement atoms are capability identifiers");
        ok = false;
      }
    }
    close(e.keyword.span);
    if (!ok) a.requirement.alternatives.clear();
  }

 public:
  void finish() {
    for (auto& [tech, tactic] : pending_tactics_) {
      auto it = std::find_if(model_.tech_components.begin(), model_.tech_components.end(),
                             [&](const TechnicalComponent& tc) { return tc.id == tech.id; });
      if (it == model_.tech_components.end()) {
        sink_.error(tech.span, "UNKNOWN_REF", "unknown technical component '" + tech.id + "'", tech.id);
        continue;
      }
      it->tactics.push_back(std::move(tactic));
    }
    pending_tactics_.clear();
    for (Flow& f : model_.flows) {
      if (!f.item.empty()) continue;
      if (const FunctionalComponent* c = model_.find_component(f.from.id)) f.item = c->item.id;
    }
  }

 private:
  Model& model_;
  DiagnosticSink& sink_;
  std::vector<std::pair<Ref, ImplementedTactic>> pending_tactics_;
};

class TreeExpander {
 public:
  TreeExpander(const std::map<std::string, const FaultTreeDecl*>& named, const TreeContext& context,
               DiagnosticSink& sink)
      : named_(named), context_(context), sink_(sink) {}

  std::optional<Gate> expand(const Gate& gate, std::vector<std::string>& stack) {
    switch (gate.kind) {
      case Gate::Kind::Basic:
        if (!context_.components.count(gate.basic.component)) {
          report(gate.component_span, "UNKNOWN_COMPONENT",
                 "basic event references unknown component '" + gate.basic.component + "'");
          return std::nullopt;
        }
        return gate;
      case Gate::Kind::Include: {
        auto it = named_.find(gate.include);
        if (it == named_.end()) {
          report(gate.component_span, "UNKNOWN_REF", "include of unknown tree '" + gate.include + "'");
          return std::nullopt;
        }
        if (auto at = std::find(stack.begin(), stack.end(), gate.include); at != stack.end()) {
          // Each cycle is reported once, from whichever tree reaches it first.
          std::set<std::string> members(at, stack.end());
          if (cycles_.insert(members).second) {
            std::string path;
            for (auto s = at; s != stack.end(); ++s) path += *s + " -> ";
            report(gate.component_span, "CYCLE", "tree include cycle: " + path + gate.include);
          }
          return std::nullopt;
        }
        const FaultTreeDecl* decl = it->second;
        if (!decl->root) return std::nullopt;
        stack.push_back(gate.include);
        auto expanded = expand(*decl->root, stack);
        stack.pop_back();
        return expanded;
      }
      case Gate::Kind::And:
      case Gate::Kind::Or: {
        Gate out;
        out.kind = gate.kind;
        out.span = gate.span;
        bool ok = true;
        for (const Gate& c : gate.children) {
          auto e = expand(c, stack);
          if (!e) {
            ok = false;
            continue;
          }
          out.children.push_back(std::move(*e));
        }
        if (!ok) return std::nullopt;
        return out;
      }
    }
    return std::nullopt;
  }

 private:
  void report(const SourceSpan& span, const std::string& code, const std::string& message) {
    const auto key = std::make_tuple(span.file, span.line, span.column, code);
    if (reported_.insert(key).second) sink_.error(span, code, message);
  }

  const std::map<std::string, const FaultTreeDecl*>& named_;
  const TreeContext& context_;
  DiagnosticSink& sink_;
  std::set<std::tuple<std::string, int, int, std::string>> reported_;
  std::set<std::set<std::string>> cycles_;
};

}  // namespace

ParseResult parse_model(std::span<const SourceFile> files) {
  ParseResult result;
  DiagnosticSink sink(result.diagnostics);
  ModelReader reader(result.model, sink);
  std::vector<syntax::Document> docs;
  for (const SourceFile& f : files) {
    docs.push_back(syntax::parse_document(f.content, f.path, result.diagnostics));
  }
  for (const auto& doc : docs) reader.read(doc);
  reader.finish();
  result.model.canonicalize();
  Diagnostics checks = validate_model(result.model);
  result.diagnostics.insert(result.diagnostics.end(), checks.begin(), checks.end());
  sort_diagnostics(result.diagnostics);
  return result;
}

TreeParseResult resolve_fault_trees(std::span<const FaultTreeDecl> decls, const TreeContext& context) {
  TreeParseResult result;
  DiagnosticSink sink(result.diagnostics);

  std::vector<const FaultTreeDecl*> ordered;
  for (const auto& d : decls) ordered.push_back(&d);
  std::stable_sort(ordered.begin(), ordered.end(), [](const FaultTreeDecl* a, const FaultTreeDecl* b) {
    return std::tie(a->span.file, a->span.line, a->span.column) < std::tie(b->span.file, b->span.line, b->span.column);
  });
  std::map<std::string, const FaultTreeDecl*> named;
  for (const FaultTreeDecl* d : ordered) {
    if (!named.emplace(d->name, d).second) {
      sink.error(d->span, "DUP_ID", "duplicate tree name '" + d->name + "'", d->name);
    }
  }

  TreeExpander expander(named, context, sink);
  for (const FaultTreeDecl* d : ordered) {
    if (!d->root) continue;
    std::vector<std::string> stack{d->name};
    auto root = expander.expand(*d->root, stack);
    if (!d->goal) continue;
    if (!context.goals.count(d->goal->id)) {
      sink.error(d->goal->span, "UNKNOWN_GOAL", "tree '" + d->name + "' names unknown safety goal '" + d->goal->id + "'",
                 d->goal->id);
      continue;
    }
    if (root) result.trees.push_back(FaultTree{d->name, d->goal->id, std::move(*root)});
  }
  std::sort(result.trees.begin(), result.trees.end(), [](const FaultTree& a, const FaultTree& b) {
    return std::tie(a.goal, a.name) < std::tie(b.goal, b.name);
  });
  sort_diagnostics(result.diagnostics);
  return result;
}

TreeParseResult parse_fault_trees(std::span<const SourceFile> files, const TreeContext& context) {
  Diagnostics parse_diags;
  DiagnosticSink sink(parse_diags);
  std::vector<FaultTreeDecl> decls;
  for (const SourceFile& f : files) {
    const syntax::Document doc = syntax::parse_document(f.content, f.path, parse_diags);
    for (const Statement& st : doc.statements) {
      if (st.keyword.text != "tree") continue;
      if (auto decl = read_tree(st, sink)) decls.push_back(std::move(*decl));
    }
  }
  TreeParseResult result = resolve_fault_trees(decls, context);
  result.diagnostics.insert(result.diagnostics.end(), parse_diags.begin(), parse_diags.end());
  sort_diagnostics(result.diagnostics);
  return result;
}

}  // namespace coopsafe
