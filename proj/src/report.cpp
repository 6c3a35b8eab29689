#include "coopsafe/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "coopsafe/hara.hpp"
#include "coopsafe/validate.hpp"

namespace coopsafe {

using nlohmann::ordered_json;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Validate: return "validate";
    case Stage::Hara: return "hara";
    case Stage::Goals: return "goals";
    case Stage::Fsrs: return "fsrs";
    case Stage::Conflicts: return "conflicts";
    case Stage::Assess: return "assess";
    case Stage::Report: return "report";
  }
  return "report";
}

void PerspectiveCount::add(Perspective p, std::size_t n) {
  (p == Perspective::Vehicular ? vehicular : cooperative) += n;
}

Analysis analyze(Model model, Catalog catalog, Stage stage) {
  Analysis a;
  a.stage = stage;
  a.model = std::move(model);
  a.catalog = std::move(catalog);
  const Model& m = a.model;
  if (!a.reached(Stage::Hara)) return a;

  a.hazards = hara::generate_hazards(m);
  for (Perspective p : {Perspective::Vehicular, Perspective::Cooperative}) {
    a.raw_events[p] = hara::raw_triple_count(a.hazards, m.modes, m.situations, p);
  }
  const auto policies = hara::feasibility_policies(m);
  a.events = hara::enumerate_events(a.hazards, m.modes, m.situations, policies, m.ratings);
  if (!a.reached(Stage::Goals)) return a;

  a.goals = hara::derive_goals(a.events, m.merge_goals, a.hazards);
  if (!a.reached(Stage::Fsrs)) return a;

  TreeContext ctx;
  for (const SafetyGoal& g : a.goals) ctx.goals.insert(g.id);
  for (const FunctionalComponent& c : m.components) ctx.components.insert(c.id);
  TreeParseResult resolved = resolve_fault_trees(m.trees, ctx);
  if (has_errors(resolved.diagnostics)) throw InputError(std::move(resolved.diagnostics));
  a.trees = std::move(resolved.trees);
  a.derivation = fta::derive_fsrs(a.goals, a.trees, m.annotations, m);
  if (!a.reached(Stage::Conflicts)) return a;

  a.conflicts = conformance::detect_conflicts(a.derivation.fsrs, a.catalog.exclusivity);
  if (!a.reached(Stage::Assess)) return a;

  a.verdicts = conformance::assess(a.derivation.fsrs, m.tech_components, a.catalog);
  for (const auto& v : a.verdicts) {
    for (const std::string& atom : v.unsatisfiable_atoms) {
      a.warnings.push_back(Diagnostic{DiagnosticLevel::Warning, {}, "UNSATISFIABLE_ATOM", v.fsr,
                                      "capability '" + atom + "' of FSR '" + v.fsr + "' is provided by no tactic"});
    }
  }
  return a;
}

Counts compute_counts(const Analysis& a) {
  Counts c;
  for (const auto& f : a.model.functions) c.functions.add(f.perspective);
  for (const auto& h : a.hazards) c.hazards.add(h.perspective);
  for (const auto& [p, n] : a.raw_events) c.events_raw.add(p, n);
  for (const auto& e : a.events) c.events.add(e.perspective);
  for (Asil asil : {Asil::QM, Asil::A, Asil::B, Asil::C, Asil::D}) {
    c.goals_by_asil[asil] = 0;
    c.fsrs_by_asil[asil] = 0;
  }
  for (const auto& g : a.goals) {
    c.goals.add(g.perspective);
    ++c.goals_by_asil[g.asil];
    if (g.asil == Asil::D) c.goals_asil_d.add(g.perspective);
  }
  std::map<std::string, Perspective> fsr_perspective;
  for (const auto& f : a.derivation.fsrs) {
    c.fsrs.add(f.perspective);
    ++c.fsrs_by_asil[f.asil];
    if (f.asil == Asil::D) c.fsrs_asil_d.add(f.perspective);
    ++c.fsrs_by_component[f.component];
    fsr_perspective[f.id] = f.perspective;
  }
  for (const auto& v : a.verdicts) {
    const Perspective p = fsr_perspective.at(v.fsr);
    (v.status == conformance::Status::Fulfilled ? c.fulfilled : c.unfulfilled).add(p);
  }
  c.comparisons_grouped = a.conflicts.comparisons_grouped;
  c.comparisons_naive = a.conflicts.comparisons_naive;
  c.conflicts = a.conflicts.pairs.size();
  return c;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

AssessmentReport make_report(Analysis analysis, std::vector<InputDigest> inputs, InputDigest catalog) {
  AssessmentReport r;
  r.inputs = std::move(inputs);
  r.catalog = std::move(catalog);
  r.analysis = std::move(analysis);
  r.counts = compute_counts(r.analysis);
  return r;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

AssessmentReport run_pipeline(const PipelineConfig& config) {
  const std::vector<SourceFile> sources = read_sources(config.model_paths);
  ParseResult parsed = parse_model(sources);
  if (has_errors(parsed.diagnostics)) throw InputError(std::move(parsed.diagnostics));

  Catalog catalog;
  InputDigest catalog_digest;
  if (config.catalog_path) {
    catalog = load_catalog_file(config.catalog_path->string());
    std::ifstream in(*config.catalog_path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    catalog_digest = InputDigest{config.catalog_path->string(), sha256_hex(buffer.str())};
  } else {
    catalog = default_catalog();
    catalog_digest = InputDigest{"<bundled>", sha256_hex(default_catalog_text())};
  }
  Diagnostics catalog_checks = validate_against_catalog(parsed.model, catalog);
  if (has_errors(catalog_checks)) throw InputError(std::move(catalog_checks));

  Diagnostics warnings = std::move(parsed.diagnostics);
  warnings.insert(warnings.end(), catalog_checks.begin(), catalog_checks.end());

  std::vector<InputDigest> inputs;
  for (const SourceFile& f : sources) inputs.push_back(InputDigest{f.path, sha256_hex(f.content)});

  Analysis analysis = analyze(std::move(parsed.model), std::move(catalog), config.stage);
  warnings.insert(warnings.end(), analysis.warnings.begin(), analysis.warnings.end());
  sort_diagnostics(warnings);
  analysis.warnings = std::move(warnings);

  AssessmentReport report = make_report(std::move(analysis), std::move(inputs), std::move(catalog_digest));
  if (config.timestamps) report.timestamp = utc_now();
  return report;
}

// ------------------------------------------------------------------ JSON

namespace {

ordered_json perspective_json(const PerspectiveCount& c) {
  return ordered_json{{"vehicular", c.vehicular}, {"cooperative", c.cooperative}, {"total", c.total()}};
}

ordered_json asil_histogram(const std::map<Asil, std::size_t>& h) {
  ordered_json out = ordered_json::object();
  for (const auto& [asil, n] : h) out[std::string(to_string(asil))] = n;
  return out;
}

template <typename Container>
ordered_json strings(const Container& c) {
  ordered_json out = ordered_json::array();
  for (const auto& s : c) out.push_back(s);
  return out;
}

ordered_json requirement_json(const Requirement& r) {
  ordered_json out = ordered_json::array();
  for (const auto& alt : r.alternatives) out.push_back(strings(alt));
  return out;
}

std::string class_name(char letter, int value) { return std::string(1, letter) + std::to_string(value); }

ordered_json diagnostic_json(const Diagnostic& d) {
  ordered_json j{{"level", d.level == DiagnosticLevel::Error ? "error" : "warning"}, {"code", d.code}};
  if (d.span.valid()) {
    j["file"] = d.span.file;
    j["line"] = d.span.line;
    j["column"] = d.span.column;
  }
  if (!d.entity.empty()) j["entity"] = d.entity;
  j["message"] = d.message;
  return j;
}

ordered_json counts_json(const Counts& c) {
  ordered_json by_component = ordered_json::object();
  for (const auto& [component, n] : c.fsrs_by_component) by_component[component] = n;
  return ordered_json{
      {"functions", perspective_json(c.functions)},
      {"hazards", perspective_json(c.hazards)},
      {"events_raw", perspective_json(c.events_raw)},
      {"events", perspective_json(c.events)},
      {"goals", perspective_json(c.goals)},
      {"goals_by_asil", asil_histogram(c.goals_by_asil)},
      {"goals_asil_d", perspective_json(c.goals_asil_d)},
      {"fsrs", perspective_json(c.fsrs)},
      {"fsrs_by_asil", asil_histogram(c.fsrs_by_asil)},
      {"fsrs_asil_d", perspective_json(c.fsrs_asil_d)},
      {"fsrs_by_component", by_component},
      {"fulfilled", perspective_json(c.fulfilled)},
      {"unfulfilled", perspective_json(c.unfulfilled)},
      {"comparisons_grouped", c.comparisons_grouped},
      {"comparisons_naive", c.comparisons_naive},
      {"conflicts", c.conflicts},
  };
}

ordered_json hara_json(const Analysis& a) {
  ordered_json functions = ordered_json::array();
  for (const auto& f : a.model.functions) {
    ordered_json words = ordered_json::array();
    for (GuideWord g : f.guide_words) words.push_back(std::string(to_string(g)));
    functions.push_back({{"id", f.id},
                         {"description", f.description},
                         {"perspective", std::string(to_string(f.perspective))},
                         {"scenario", f.scenario},
                         {"guide_words", words}});
  }
  ordered_json hazards = ordered_json::array();
  for (const auto& h : a.hazards) {
    hazards.push_back({{"id", h.id},
                       {"function", h.function},
                       {"perspective", std::string(to_string(h.perspective))},
                       {"guide_word", std::string(to_string(h.guide_word))},
                       {"text", h.text},
                       {"draft", h.draft}});
  }
  ordered_json events = ordered_json::array();
  for (const auto& e : a.events) {
    events.push_back({{"id", e.id},
                      {"hazard", e.hazard},
                      {"mode", e.mode},
                      {"situation", e.situation},
                      {"perspective", std::string(to_string(e.perspective))},
                      {"severity", class_name('S', static_cast<int>(e.severity))},
                      {"exposure", class_name('E', static_cast<int>(e.exposure))},
                      {"controllability", class_name('C', static_cast<int>(e.controllability))},
                      {"asil", std::string(to_string(hara::event_asil(e)))}});
  }
  ordered_json goals = ordered_json::array();
  for (const auto& g : a.goals) {
    goals.push_back({{"id", g.id},
                     {"text", g.text},
                     {"draft", g.draft},
                     {"perspective", std::string(to_string(g.perspective))},
                     {"asil", std::string(to_string(g.asil))},
                     {"member_events", strings(g.member_events)}});
  }
  return ordered_json{{"functions", functions}, {"hazards", hazards}, {"events", events}, {"goals", goals}};
}

ordered_json fsr_json(const Fsr& f) {
  return ordered_json{{"id", f.id},
                      {"text", f.text},
                      {"draft", f.draft},
                      {"component", f.component},
                      {"failure_mode", f.failure_mode},
                      {"perspective", std::string(to_string(f.perspective))},
                      {"asil", std::string(to_string(f.asil))},
                      {"source_goals", strings(f.source_goals)},
                      {"trigger", f.trigger},
                      {"response_class", f.response_class},
                      {"requirement", requirement_json(f.requirement)},
                      {"conflicts_with", strings(f.conflicts_with)}};
}

ordered_json verdict_json(const conformance::AssessmentVerdict& v) {
  ordered_json applied = ordered_json::array();
  for (const auto& t : v.applied_tactics) {
    applied.push_back({{"tactic", t.tactic}, {"technical_component", t.technical_component}, {"evidence", t.evidence}});
  }
  ordered_json patterns = ordered_json::array();
  for (const auto& p : v.recommended_patterns) {
    patterns.push_back({{"pattern", p.pattern}, {"missing_atoms_covered", p.missing_atoms_covered}});
  }
  return ordered_json{
      {"fsr", v.fsr},
      {"status", std::string(conformance::to_string(v.status))},
      {"reason", v.reason ? ordered_json(*v.reason) : ordered_json(nullptr)},
      {"realized_by", strings(v.realized_by)},
      {"applicable_tactics", strings(v.applicable_tactics)},
      {"unsatisfiable_atoms", strings(v.unsatisfiable_atoms)},
      {"implemented_tactics_considered", strings(v.implemented_tactics_considered)},
      {"available_capabilities", strings(v.available_capabilities)},
      {"satisfied_alternative", v.satisfied_alternative ? strings(*v.satisfied_alternative) : ordered_json(nullptr)},
      {"applied_tactics", applied},
      {"recommended_patterns", patterns},
  };
}

ordered_json traceability_json(const Analysis& a) {
  std::map<std::string, const SafetyGoal*> goals;
  for (const auto& g : a.goals) goals.emplace(g.id, &g);
  std::map<std::string, const HazardousEvent*> events;
  for (const auto& e : a.events) events.emplace(e.id, &e);
  std::map<std::string, const Hazard*> hazards;
  for (const auto& h : a.hazards) hazards.emplace(h.id, &h);
  std::map<std::string, const conformance::AssessmentVerdict*> verdicts;
  for (const auto& v : a.verdicts) verdicts.emplace(v.fsr, &v);

  ordered_json out = ordered_json::array();
  for (const Fsr& f : a.derivation.fsrs) {
    ordered_json goal_chain = ordered_json::array();
    for (const std::string& gid : f.source_goals) {
      const SafetyGoal& g = *goals.at(gid);
      std::map<std::string, std::vector<std::string>> by_hazard;
      for (const std::string& eid : g.member_events) by_hazard[events.at(eid)->hazard].push_back(eid);
      ordered_json hz = ordered_json::array();
      for (const auto& [hid, eids] : by_hazard) {
        const Hazard& h = *hazards.at(hid);
        const SystemFunction* fn = a.model.find_function(h.function);
        hz.push_back({{"hazard", hid},
                      {"function", h.function},
                      {"scenario", fn ? fn->scenario : std::string{}},
                      {"events", strings(eids)}});
      }
      goal_chain.push_back({{"goal", gid}, {"asil", std::string(to_string(g.asil))}, {"hazards", hz}});
    }
    ordered_json entry{{"fsr", f.id},
                       {"perspective", std::string(to_string(f.perspective))},
                       {"component", f.component},
                       {"asil", std::string(to_string(f.asil))}};
    if (auto it = verdicts.find(f.id); it != verdicts.end()) {
      std::set<std::string> applied;
      for (const auto& t : it->second->applied_tactics) applied.insert(t.tactic);
      entry["status"] = std::string(conformance::to_string(it->second->status));
      entry["tactics"] = strings(applied);
    } else {
      entry["status"] = nullptr;
      entry["tactics"] = ordered_json::array();
    }
    entry["goals"] = goal_chain;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

ordered_json to_json(const AssessmentReport& r) {
  const Analysis& a = r.analysis;
  ordered_json inputs = ordered_json::array();
  for (const auto& i : r.inputs) inputs.push_back({{"path", i.path}, {"sha256", i.sha256}});
  ordered_json warnings = ordered_json::array();
  for (const auto& d : a.warnings) warnings.push_back(diagnostic_json(d));

  ordered_json meta{{"tool", std::string(kToolName)},
                    {"version", r.tool_version},
                    {"schema_version", kReportSchemaVersion},
                    {"stage", std::string(to_string(a.stage))},
                    {"inputs", inputs},
                    {"catalog", {{"path", r.catalog.path}, {"sha256", r.catalog.sha256}}}};
  if (r.timestamp) meta["timestamp"] = *r.timestamp;
  meta["warnings"] = warnings;

  ordered_json fsrs = ordered_json::array();
  for (const Fsr& f : a.derivation.fsrs) fsrs.push_back(fsr_json(f));
  ordered_json overlaps = ordered_json::array();
  for (const auto& b : a.derivation.overlaps) overlaps.push_back(to_string(b));

  ordered_json pairs = ordered_json::array();
  for (const auto& c : a.conflicts.pairs) pairs.push_back({{"first", c.first}, {"second", c.second}, {"rule", c.rule}});

  ordered_json verdicts = ordered_json::array();
  for (const auto& v : a.verdicts) verdicts.push_back(verdict_json(v));

  return ordered_json{
      {"meta", meta},
      {"counts", counts_json(r.counts)},
      {"hara", hara_json(a)},
      {"fsrs", fsrs},
      {"fsr_overlaps", overlaps},
      {"conflicts",
       {{"comparisons_grouped", a.conflicts.comparisons_grouped},
        {"comparisons_naive", a.conflicts.comparisons_naive},
        {"pairs", pairs}}},
      {"verdicts", verdicts},
      {"traceability", traceability_json(a)},
  };
}

std::string render_json(const AssessmentReport& report) { return to_json(report).dump(2) + "\n"; }

// -------------------------------------------------------------- Markdown

namespace {

std::string cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string draft_text(const std::string& text, bool draft) { return cell(text) + (draft ? " *(draft)*" : ""); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string requirement_text(const Requirement& r) {
  std::vector<std::string> alts;
  for (const auto& alt : r.alternatives) alts.push_back("{" + join({alt.begin(), alt.end()}, ", ") + "}");
  return join(alts, " or ");
}

void count_row(std::ostringstream& md, const std::string& label, const PerspectiveCount& c) {
  md << "| " << label << " | " << c.vehicular << " | " << c.cooperative << " | " << c.total() << " |\n";
}

}  // namespace

std::string render_markdown(const AssessmentReport& r) {
  const Analysis& a = r.analysis;
  const Counts& c = r.counts;
  std::ostringstream md;
  md << "# Safety conformance report\n\n";
  md << "Generated by " << kToolName << " " << r.tool_version << " (stage: " << to_string(a.stage) << ")";
  if (r.timestamp) md << " at " << *r.timestamp;
  md << ".\n\n";
  md << "Inputs:\n\n";
  for (const auto& i : r.inputs) md << "- `" << i.path << "` (sha256 " << i.sha256.substr(0, 12) << ")\n";
  md << "- catalog `" << r.catalog.path << "` (sha256 " << r.catalog.sha256.substr(0, 12) << ")\n\n";

  md << "## Summary\n\n";
  md << "| metric | vehicular | cooperative | total |\n|---|---|---|---|\n";
  count_row(md, "functions", c.functions);
  count_row(md, "hazards", c.hazards);
  count_row(md, "hazardous events (raw combinations)", c.events_raw);
  count_row(md, "hazardous events (feasible)", c.events);
  count_row(md, "safety goals", c.goals);
  count_row(md, "safety goals at ASIL D", c.goals_asil_d);
  count_row(md, "FSRs", c.fsrs);
  count_row(md, "FSRs at ASIL D", c.fsrs_asil_d);
  count_row(md, "fulfilled FSRs", c.fulfilled);
  count_row(md, "unfulfilled FSRs", c.unfulfilled);
  md << "\nConflict check: " << c.comparisons_grouped << " grouped comparisons instead of " << c.comparisons_naive
     << " pairwise comparisons; " << c.conflicts << " conflict(s) found.\n\n";

  if (!a.warnings.empty()) {
    md << "Warnings:\n\n";
    for (const auto& w : a.warnings) md << "- `" << w.code << "` " << cell(w.message) << "\n";
    md << "\n";
  }

  if (!a.goals.empty()) {
    md << "## Safety goals\n\n| goal | perspective | ASIL | events | text |\n|---|---|---|---|---|\n";
    for (const auto& g : a.goals) {
      md << "| " << g.id << " | " << to_string(g.perspective) << " | " << to_string(g.asil) << " | "
         << g.member_events.size() << " | " << draft_text(g.text, g.draft) << " |\n";
    }
    md << "\n";
  }

  if (a.derivation.fsrs.empty()) {
    md << "## FSRs\n\nNo FSRs derived.\n";
    return md.str();
  }

  std::map<std::string, const conformance::AssessmentVerdict*> verdicts;
  for (const auto& v : a.verdicts) verdicts.emplace(v.fsr, &v);
  std::map<std::string, const Fsr*> fsr_by_id;
  for (const auto& f : a.derivation.fsrs) fsr_by_id.emplace(f.id, &f);

  md << "## FSRs per component\n\n";
  md << "| component | total | veh fulfilled | veh unfulfilled | coop fulfilled | coop unfulfilled |\n";
  md << "|---|---|---|---|---|---|\n";
  std::map<std::string, std::array<std::size_t, 4>> stacked;
  for (const Fsr& f : a.derivation.fsrs) {
    auto& row = stacked[f.component];
    auto it = verdicts.find(f.id);
    if (it == verdicts.end()) continue;
    const bool ok = it->second->status == conformance::Status::Fulfilled;
    const std::size_t col = (f.perspective == Perspective::Vehicular ? 0 : 2) + (ok ? 0 : 1);
    ++row[col];
  }
  for (const auto& [component, n] : c.fsrs_by_component) {
    const auto& row = stacked[component];
    md << "| " << component << " | " << n << " | " << row[0] << " | " << row[1] << " | " << row[2] << " | "
       << row[3] << " |\n";
  }
  md << "\n";

  md << "## FSRs\n\n| FSR | perspective | component | ASIL | goals | status | text |\n|---|---|---|---|---|---|---|\n";
  for (const Fsr& f : a.derivation.fsrs) {
    auto it = verdicts.find(f.id);
    const std::string status = it == verdicts.end() ? "-" : std::string(conformance::to_string(it->second->status));
    md << "| " << f.id << " | " << to_string(f.perspective) << " | " << f.component << " | " << to_string(f.asil)
       << " | " << join({f.source_goals.begin(), f.source_goals.end()}, ", ") << " | " << status << " | "
       << draft_text(f.text, f.draft) << " |\n";
  }
  md << "\n";

  if (a.reached(Stage::Conflicts)) {
    md << "## Conflicts\n\n";
    if (a.conflicts.pairs.empty()) {
      md << "No conflicts found in " << c.fsrs_by_component.size() << " component group(s).\n\n";
    } else {
      md << "| FSR | FSR | rule |\n|---|---|---|\n";
      for (const auto& p : a.conflicts.pairs) md << "| " << p.first << " | " << p.second << " | " << cell(p.rule) << " |\n";
      md << "\n";
    }
  }

  if (a.reached(Stage::Assess)) {
    md << "## Fulfilled FSRs\n\n";
    std::vector<const conformance::AssessmentVerdict*> fulfilled;
    std::vector<const conformance::AssessmentVerdict*> unfulfilled;
    for (const auto& v : a.verdicts) {
      (v.status == conformance::Status::Fulfilled ? fulfilled : unfulfilled).push_back(&v);
    }
    if (fulfilled.empty()) {
      md << "No FSR is fulfilled.\n\n";
    } else {
      md << "| FSR | component | description | applied tactics | implementation in technical architecture |\n";
      md << "|---|---|---|---|---|\n";
      for (const auto* v : fulfilled) {
        const Fsr& f = *fsr_by_id.at(v->fsr);
        std::set<std::string> tactics;
        std::vector<std::string> evidence;
        for (const auto& t : v->applied_tactics) {
          tactics.insert(t.tactic);
          evidence.push_back(t.tactic + " @ " + t.technical_component +
                             (t.evidence.empty() ? std::string{} : ": " + t.evidence));
        }
        md << "| " << f.id << " | " << f.component << " | " << draft_text(f.text, f.draft) << " | "
           << join({tactics.begin(), tactics.end()}, ", ") << " | " << cell(join(evidence, "; ")) << " |\n";
      }
      md << "\n";
    }
    if (!unfulfilled.empty()) {
      md << "## Unfulfilled FSRs\n\n| FSR | component | ASIL | requirement | recommended patterns |\n";
      md << "|---|---|---|---|---|\n";
      for (const auto* v : unfulfilled) {
        const Fsr& f = *fsr_by_id.at(v->fsr);
        std::vector<std::string> top;
        for (std::size_t i = 0; i < v->recommended_patterns.size() && i < 3; ++i) {
          top.push_back(v->recommended_patterns[i].pattern);
        }
        std::string reason = v->reason ? " (" + *v->reason + ")" : std::string{};
        md << "| " << f.id << reason << " | " << f.component << " | " << to_string(f.asil) << " | "
           << requirement_text(f.requirement) << " | " << join(top, ", ") << " |\n";
      }
      md << "\n";
    }
  }
  return md.str();
}

std::string render(const AssessmentReport& report, std::string_view format) {
  if (format == "json") return render_json(report);
  if (format == "markdown" || format == "md") return render_markdown(report);
  throw UsageError("unknown report format '" + std::string(format) + "' (expected json or markdown)");
}

}  // namespace coopsafe
