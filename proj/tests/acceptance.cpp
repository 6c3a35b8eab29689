// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coopsafe/catalog.hpp"
#include "coopsafe/cli.hpp"
#include "coopsafe/fta.hpp"
#include "coopsafe/report.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace coopsafe;
using namespace coopsafe::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects mismatches for one criterion.
class Check {
 public:
  template <typename A, typename B>
  void equal(const std::string& what, const A& actual, const B& expected) {
    if (!(actual == expected)) {
      std::ostringstream s;
      s << what << ": got " << actual << ", expected " << expected;
      failures_.push_back(s.str());
    }
  }
  void that(const std::string& what, bool ok) {
    if (!ok) failures_.push_back(what);
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int failed = 0;

void report_line(int number, const std::string& title, const Check& check, const std::string& detail = {}) {
  const bool ok = check.failures().empty();
  if (!ok) ++failed;
  std::cout << (ok ? "PASS" : "FAIL") << " " << number << " " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  for (const std::string& f : check.failures()) std::cout << "    " << f << "\n";
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << s << " s";
  return out.str();
}

template <typename F>
void guarded(int number, const std::string& title, F body) {
  Check check;
  std::string detail;
  try {
    detail = body(check);
  } catch (const InputError& e) {
    check.that("input error: " + (e.diagnostics().empty() ? std::string(e.what())
                                                           : format_diagnostic(e.diagnostics().front())),
               false);
  } catch (const std::exception& e) {
    check.that(std::string("exception: ") + e.what(), false);
  }
  report_line(number, title, check, detail);
}

const AssessmentReport& fixture() {
  static const AssessmentReport r = fixture_report();
  return r;
}

std::size_t asil_count(const std::map<Asil, std::size_t>& histogram, Asil a) {
  auto it = histogram.find(a);
  return it == histogram.end() ? 0 : it->second;
}

}  // namespace

int main() {
  guarded(1, "hazard counts", [](Check& c) {
    const auto start = Clock::now();
    const AssessmentReport r = fixture_report(Stage::Hara);
    const double elapsed = seconds_since(start);
    c.equal("vehicular hazards", r.counts.hazards.vehicular, 31u);
    c.equal("cooperative hazards", r.counts.hazards.cooperative, 26u);
    c.equal("total hazards", r.counts.hazards.total(), 57u);
    const std::map<std::string, std::size_t> expected{
        {"safe_gap", 4},           {"make_room", 6},          {"merge_platoons", 4},   {"split_platoon", 4},
        {"change_leader", 4},      {"traffic_clearance", 4},  {"follow_front", 3},     {"surrounding_distance", 5},
        {"lead_platoon", 4},       {"take_leader_role", 3},   {"switch_to_follower", 3}, {"join_platoon", 2},
        {"leave_platoon", 2},      {"react_to_traffic", 5},   {"obey_traffic_rules", 4}};
    std::map<std::string, std::size_t> actual;
    for (const Hazard& h : r.analysis.hazards) ++actual[h.function];
    c.that("per-function hazard counts differ", actual == expected);
    c.that("hazard stage took " + fmt_seconds(elapsed), elapsed < 1.0);
    return fmt_seconds(elapsed);
  });

  guarded(2, "event counts", [](Check& c) {
    const Counts& n = fixture().counts;
    c.equal("vehicular raw", n.events_raw.vehicular, 372u);
    c.equal("cooperative raw", n.events_raw.cooperative, 364u);
    c.equal("vehicular events", n.events.vehicular, 140u);
    c.equal("cooperative events", n.events.cooperative, 200u);
    c.equal("total events", n.events.total(), 340u);
    return std::string{};
  });

  guarded(3, "goals and ASILs", [](Check& c) {
    const Counts& n = fixture().counts;
    c.equal("vehicular goals", n.goals.vehicular, 14u);
    c.equal("cooperative goals", n.goals.cooperative, 11u);
    c.equal("goals at ASIL D", asil_count(n.goals_by_asil, Asil::D), 7u);
    return std::string{};
  });

  guarded(4, "FSRs", [](Check& c) {
    const Counts& n = fixture().counts;
    c.equal("vehicular FSRs", n.fsrs.vehicular, 16u);
    c.equal("cooperative FSRs", n.fsrs.cooperative, 15u);
    c.equal("vehicular FSRs at D", n.fsrs_asil_d.vehicular, 12u);
    c.equal("cooperative FSRs at D", n.fsrs_asil_d.cooperative, 5u);
    c.equal("FSRs at D", asil_count(n.fsrs_by_asil, Asil::D), 17u);
    auto vc = n.fsrs_by_component.find("vehicle_control");
    c.equal("vehicle_control FSRs", vc == n.fsrs_by_component.end() ? 0u : vc->second, 9u);
    c.equal("component groups", n.fsrs_by_component.size(), 8u);
    return std::string{};
  });

  guarded(5, "conflict phase", [](Check& c) {
    const Counts& n = fixture().counts;
    c.equal("conflicts", n.conflicts, 0u);
    c.equal("grouped comparisons", n.comparisons_grouped, 60u);
    c.equal("naive comparisons", n.comparisons_naive, 465u);
    return std::string{};
  });

  guarded(6, "fulfillment", [](Check& c) {
    const Counts& n = fixture().counts;
    c.equal("vehicular fulfilled", n.fulfilled.vehicular, 3u);
    c.equal("cooperative fulfilled", n.fulfilled.cooperative, 3u);
    c.equal("vehicular unfulfilled", n.unfulfilled.vehicular, 13u);
    c.equal("cooperative unfulfilled", n.unfulfilled.cooperative, 12u);
    const std::map<std::string, std::set<std::string>> expected{
        {"FSR-C08", {"sanity_check", "barrier", "heartbeat", "condition_monitoring"}},
        {"FSR-V07", {"sanity_check"}},
        {"FSR-V01", {"barrier", "condition_monitoring"}},
        {"FSR-C01", {"simplicity"}},
        {"FSR-V02", {"sanity_check", "override", "condition_monitoring"}},
        {"FSR-C04", {"heartbeat"}}};
    for (const auto& [id, tactics] : expected) {
      const auto& vs = fixture().analysis.verdicts;
      auto it = std::find_if(vs.begin(), vs.end(), [&](const auto& v) { return v.fsr == id; });
      if (it == vs.end()) {
        c.that(id + " missing", false);
        continue;
      }
      c.that(id + " not fulfilled", it->status == conformance::Status::Fulfilled);
      std::set<std::string> applied;
      for (const auto& t : it->applied_tactics) applied.insert(t.tactic);
      c.that(id + " applied tactics differ", applied == tactics);
    }
    return std::string{};
  });

  guarded(7, "ASIL table", [](Check& c) {
    int mismatches = 0;
    int cells = 0;
    for (int s = 0; s <= 3; ++s) {
      for (int e = 0; e <= 4; ++e) {
        for (int k = 0; k <= 3; ++k) {
          ++cells;
          const Asil a = determine_asil(s, e, k);
          if (a != iso_risk_table(s, e, k)) ++mismatches;
          if (s < 3 && determine_asil(s + 1, e, k) < a) ++mismatches;
          if (e < 4 && determine_asil(s, e + 1, k) < a) ++mismatches;
          if (k < 3 && determine_asil(s, e, k + 1) < a) ++mismatches;
        }
      }
    }
    c.equal("cells", cells, 80);
    c.equal("mismatches", mismatches, 0);
    return std::to_string(cells) + " cells";
  });

  guarded(8, "cut-set oracle", [](Check& c) {
    std::mt19937 rng(8080);
    const auto start = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
      const Gate tree = random_tree(rng, 12);
      const auto sets = fta::minimal_cut_sets(tree);
      if (sets != brute_force_cut_sets(tree)) ++mismatches;
      for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = 0; b < sets.size(); ++b) {
          if (a != b && std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end())) ++mismatches;
        }
      }
    }
    const double elapsed = seconds_since(start);
    c.equal("mismatches", mismatches, 0);
    c.that("500 trees took " + fmt_seconds(elapsed), elapsed < 10.0);
    return "500 trees, " + fmt_seconds(elapsed);
  });

  guarded(9, "property suite", [](Check& c) {
    std::mt19937 rng(909);
    const std::uint32_t models = 100;
    for (std::uint32_t seed = 1000; seed < 1000 + models; ++seed) {
      for (const std::string& v : check_all_properties(generate_model_text(seed), rng)) {
        c.that("seed " + std::to_string(seed) + ": " + v, false);
      }
    }
    return std::to_string(models) + " generated models";
  });

  guarded(10, "parser diagnostics", [](Check& c) {
    struct Case {
      const char* file;
      const char* expected;
    };
    for (const Case& k : {Case{"dup_id.coop", ":3:11: error[DUP_ID]"},
                          Case{"dangling_ref.coop", ":4:22: error[UNKNOWN_REF]"},
                          Case{"cycle.coop", ":11:13: error[CYCLE]"},
                          Case{"missing_rating.coop", ":2:10: error[MISSING_RATING]"}}) {
      const std::string path = source_path(std::string("tests/fixtures/diagnostics/") + k.file).string();
      const char* argv[] = {"coopsafe", "validate", "--model", path.c_str()};
      std::ostringstream out;
      std::ostringstream err;
      const int code = run_cli(4, argv, out, err);
      c.equal(std::string(k.file) + " exit code", code, static_cast<int>(kExitInputError));
      c.that(std::string(k.file) + " lacks '" + k.expected + "'", err.str().find(path + k.expected) != std::string::npos);
    }
    return std::string{};
  });

  return failed == 0 ? 0 : 1;
}
