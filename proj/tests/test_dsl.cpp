#include <algorithm>

#include "coopsafe/dsl.hpp"
#include "doctest.h"
#include "support/model_gen.hpp"
#include "support/test_models.hpp"

using namespace coopsafe;
using namespace coopsafe::testing;

TEST_CASE("base model parses without diagnostics") {
  const ParseResult r = parse_text(kBaseModel);
  CHECK(r.diagnostics.empty());
  const Model& m = r.model;
  CHECK(m.items.size() == 2);
  CHECK(m.components.size() == 4);
  CHECK(m.flows.size() == 2);
  CHECK(m.functions.size() == 2);
  CHECK(m.modes.size() == 2);
  CHECK(m.situations.size() == 2);
  CHECK(m.ratings.size() == 2);
  CHECK(m.merge_goals.size() == 1);
  CHECK(m.trees.size() == 2);
  CHECK(m.annotations.size() == 4);
  CHECK(m.tech_components.size() == 2);
}

TEST_CASE("nested components inherit their item and refs resolve") {
  const Model m = parse_text(kBaseModel).model;
  const FunctionalComponent* lvc = m.find_component("lvc");
  REQUIRE(lvc != nullptr);
  CHECK(lvc->item.id == "platoon");
  REQUIRE(lvc->ref.has_value());
  CHECK(lvc->ref->id == "vc");
  CHECK(m.allocation_target("lvc") == "vc");
  CHECK(m.allocation_target("cloud") == "cloud");
  CHECK(m.find_component("cloud")->external);
  CHECK(m.architecture_of("truck").components.size() == 2);
}

TEST_CASE("function ids default to a slug of the description") {
  const ParseResult r = parse_text("function \"Keep Lane, Safely\" { perspective vehicular; guide_words no; }\n");
  REQUIRE(r.model.functions.size() == 1);
  CHECK(r.model.functions[0].id == "keep_lane_safely");
  CHECK(r.model.functions[0].scenario == "base");
}

TEST_CASE("guide words are sorted canonically") {
  const ParseResult r = parse_text("function f \"f\" { perspective vehicular; guide_words other_than no less; }\n");
  REQUIRE(r.model.functions.size() == 1);
  const auto& g = r.model.functions[0].guide_words;
  CHECK(g == std::vector<GuideWord>{GuideWord::No, GuideWord::Less, GuideWord::OtherThan});
}

TEST_CASE("rating forms: inline classes and block with bare numbers") {
  const ParseResult r = parse_text(
      "event_rating a b c S2 E3;\n"
      "event_rating x y z { severity S1; exposure 4; controllability C2; }\n");
  REQUIRE(r.model.ratings.size() == 2);
  const auto& inline_rule = r.model.ratings[0].pattern.hazard == "a" ? r.model.ratings[0] : r.model.ratings[1];
  const auto& block_rule = r.model.ratings[0].pattern.hazard == "x" ? r.model.ratings[0] : r.model.ratings[1];
  CHECK(inline_rule.severity == Severity::S2);
  CHECK(inline_rule.exposure == Exposure::E3);
  CHECK_FALSE(inline_rule.controllability.has_value());
  CHECK(block_rule.exposure == Exposure::E4);
  CHECK(block_rule.controllability == Controllability::C2);
}

TEST_CASE("malformed values are BAD_VALUE") {
  CHECK(has_code(parse_text("event_rating a b c S4;\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("event_rating a b c X1;\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("event_rating a b c S1 S2;\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("event_rating a b c;\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("function f \"f\" { perspective sideways; }\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("function f \"f\" { perspective vehicular; guide_words never; }\n").diagnostics,
                 "BAD_VALUE"));
  CHECK(has_code(parse_text("item i \"I\" { kind boat; }\n").diagnostics, "BAD_VALUE"));
  CHECK(has_code(parse_text("feasibility_default maybe;\n").diagnostics, "BAD_VALUE"));
}

TEST_CASE("unknown keys and kinds") {
  CHECK(has_code(parse_text("item i \"I\" { kind vehicle; colour red; }\n").diagnostics, "UNKNOWN_KEY"));
  CHECK(has_code(parse_text("widget w;\n").diagnostics, "UNKNOWN_KIND"));
  CHECK(has_code(parse_text("tactic t \"T\" { provides x; }\n").diagnostics, "UNKNOWN_KIND"));
}

TEST_CASE("missing fields") {
  CHECK(has_code(parse_text("item i \"I\";\n").diagnostics, "MISSING_FIELD"));
  CHECK(has_code(parse_text("function f \"f\" { guide_words no; }\n").diagnostics, "MISSING_FIELD"));
  CHECK(has_code(parse_text("mode m \"M\";\n").diagnostics, "MISSING_FIELD"));
  CHECK(has_code(parse_text("fsr_annotation a { component x; requires p; }\n").diagnostics, "MISSING_FIELD"));
  CHECK(has_code(parse_text("merge_goal G \"g\";\n").diagnostics, "MISSING_FIELD"));
}

TEST_CASE("requirements parse as DNF and reject empty alternatives") {
  const ParseResult ok = parse_text(
      "fsr_annotation a { component x; failure_mode f; trigger t; response r; requires p q | r; }\n");
  REQUIRE(ok.model.annotations.size() == 1);
  const Requirement& req = ok.model.annotations[0].requirement;
  REQUIRE(req.alternatives.size() == 2);
  CHECK(req.alternatives[0] == CapabilitySet{"p", "q"});
  CHECK(req.atoms() == CapabilitySet{"p", "q", "r"});

  const ParseResult bad = parse_text(
      "fsr_annotation a { component x; failure_mode f; trigger t; response r; requires p | ; }\n");
  CHECK(has_code(bad.diagnostics, "EMPTY_REQUIREMENT"));
  const ParseResult none = parse_text("fsr_annotation a { component x; failure_mode f; trigger t; response r; }\n");
  CHECK(has_code(none.diagnostics, "EMPTY_REQUIREMENT"));
}

TEST_CASE("syntax errors stop parsing of that file only") {
  const std::vector<SourceFile> files{{"a.coop", "item a \"A\" { kind vehicle;\n"},
                                      {"b.coop", "item b \"B\" { kind vehicle; }\nwidget;\n"}};
  const ParseResult r = parse_model(files);
  CHECK(has_code(r.diagnostics, "SYNTAX"));
  CHECK(has_code(r.diagnostics, "UNKNOWN_KIND"));
}

TEST_CASE("file order does not change the model") {
  const std::string a = "item truck \"T\" { kind vehicle; component a \"A\"; }\n";
  const std::string b = "component b \"B\" { item truck; }\nflow a b;\n";
  const std::vector<SourceFile> ab{{"a.coop", a}, {"b.coop", b}};
  const std::vector<SourceFile> ba{{"b.coop", b}, {"a.coop", a}};
  const ParseResult r1 = parse_model(ab);
  const ParseResult r2 = parse_model(ba);
  CHECK(r1.diagnostics.empty());
  REQUIRE(r1.model.components.size() == r2.model.components.size());
  for (std::size_t i = 0; i < r1.model.components.size(); ++i) {
    CHECK(r1.model.components[i].id == r2.model.components[i].id);
  }
}

TEST_CASE("top-level flow takes the item of its source component") {
  const ParseResult r = parse_text("item truck \"T\" { kind vehicle; component a \"A\"; component b \"B\"; }\nflow a b;\n");
  CHECK(r.diagnostics.empty());
  REQUIRE(r.model.flows.size() == 1);
  CHECK(r.model.flows[0].item == "truck");
}

TEST_CASE("top-level implements_tactic attaches to its technical component") {
  const std::string text = std::string(kBaseModel) + "implements_tactic vc_sw heartbeat \"beat\";\n";
  const ParseResult r = parse_text(text);
  CHECK(r.diagnostics.empty());
  const TechnicalComponent* tc = r.model.find_tech_component("vc_sw");
  REQUIRE(tc != nullptr);
  CHECK(tc->tactics.size() == 2);
  CHECK(has_code(parse_text(std::string(kBaseModel) + "implements_tactic ghost heartbeat;\n").diagnostics,
                 "UNKNOWN_REF"));
}

TEST_CASE("fault trees expand includes") {
  const std::string text =
      "tree shared { or { basic vc a; basic vc b; } }\n"
      "tree top for G { and { include shared; basic act c; } }\n";
  const std::vector<SourceFile> files{{"t.coop", text}};
  const TreeParseResult r = parse_fault_trees(files, TreeContext{{"G"}, {"vc", "act"}});
  CHECK(r.diagnostics.empty());
  REQUIRE(r.trees.size() == 1);
  CHECK(r.trees[0].name == "top");
  CHECK(r.trees[0].goal == "G");
  REQUIRE(r.trees[0].root.children.size() == 2);
  CHECK(r.trees[0].root.children[0].kind == Gate::Kind::Or);
}

TEST_CASE("fault tree errors") {
  auto diagnose = [](const std::string& text) {
    const std::vector<SourceFile> files{{"t.coop", text}};
    return parse_fault_trees(files, TreeContext{{"G"}, {"vc"}}).diagnostics;
  };
  CHECK(has_code(diagnose("tree for H { or { basic vc a; } }\n"), "UNKNOWN_GOAL"));
  CHECK(has_code(diagnose("tree for G { or { basic ghost a; } }\n"), "UNKNOWN_COMPONENT"));
  CHECK(has_code(diagnose("tree for G { or { include nowhere; } }\n"), "UNKNOWN_REF"));
  CHECK(has_code(diagnose("tree for G { or { } }\n"), "MALFORMED_TREE"));
  CHECK(has_code(diagnose("tree for G { or { basic vc a; } and { basic vc b; } }\n"), "MALFORMED_TREE"));
  CHECK(has_code(diagnose("tree for G { xor { basic vc a; } }\n"), "MALFORMED_TREE"));
  CHECK(has_code(diagnose("tree x { or { basic vc a; } }\ntree x { or { basic vc b; } }\n"), "DUP_ID"));
}

TEST_CASE("a cycle is reported once, at the include that closes it") {
  const std::string text =
      "tree a { or { include b; } }\n"
      "tree b { or { include c; } }\n"
      "tree c { or { include a; } }\n";
  const std::vector<SourceFile> files{{"t.coop", text}};
  const Diagnostics d = parse_fault_trees(files, TreeContext{{}, {}}).diagnostics;
  REQUIRE(std::count_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "CYCLE"; }) == 1);
  const Diagnostic* cycle = find_code(d, "CYCLE");
  CHECK(cycle->span.line == 3);
  CHECK(cycle->span.column == 23);
}

TEST_CASE("read_sources expands directories to sorted .coop files") {
  TempDir dir;
  dir.write("b.coop", "# b\n");
  dir.write("a.coop", "# a\n");
  dir.write("notes.txt", "ignored");
  const auto sources = read_sources({dir.path()});
  REQUIRE(sources.size() == 2);
  CHECK(sources[0].path.ends_with("a.coop"));
  CHECK(sources[1].path.ends_with("b.coop"));
  CHECK_THROWS_AS(read_sources({dir.path() / "missing.coop"}), InputError);
}

TEST_CASE("designated diagnostics fixtures") {
  struct Case {
    const char* file;
    const char* code;
    int line;
    int column;
  };
  for (const Case& c : {Case{"dup_id.coop", "DUP_ID", 3, 11}, Case{"dangling_ref.coop", "UNKNOWN_REF", 4, 22},
                        Case{"cycle.coop", "CYCLE", 11, 13}, Case{"missing_rating.coop", "MISSING_RATING", 2, 10}}) {
    CAPTURE(c.file);
    const auto sources = read_sources({source_path(std::string("tests/fixtures/diagnostics/") + c.file)});
    const ParseResult r = parse_model(sources);
    const Diagnostic* d = find_code(r.diagnostics, c.code);
    REQUIRE(d != nullptr);
    CHECK(d->level == DiagnosticLevel::Error);
    CHECK(d->span.line == c.line);
    CHECK(d->span.column == c.column);
  }
}
