#include "support/oracles.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace coopsafe::testing {

Asil iso_risk_table(int s, int e, int c) {
  using enum Asil;
  // kTable[s-1][e-1][c-1]
  static constexpr std::array<std::array<std::array<Asil, 3>, 4>, 3> kTable{{
      {{{QM, QM, QM}, {QM, QM, QM}, {QM, QM, A}, {QM, A, B}}},  // S1
      {{{QM, QM, QM}, {QM, QM, A}, {QM, A, B}, {A, B, C}}},     // S2
      {{{QM, QM, A}, {QM, A, B}, {A, B, C}, {B, C, D}}},        // S3
  }};
  if (s == 0 || e == 0 || c == 0) return QM;
  return kTable.at(s - 1).at(e - 1).at(c - 1);
}

bool evaluates_true(const Gate& root, const fta::CutSet& failed) {
  switch (root.kind) {
    case Gate::Kind::Basic:
      return failed.count(root.basic) > 0;
    case Gate::Kind::And:
      return std::all_of(root.children.begin(), root.children.end(),
                         [&](const Gate& g) { return evaluates_true(g, failed); });
    case Gate::Kind::Or:
      return std::any_of(root.children.begin(), root.children.end(),
                         [&](const Gate& g) { return evaluates_true(g, failed); });
    case Gate::Kind::Include:
      return false;
  }
  return false;
}

namespace {

void collect_basics(const Gate& g, std::vector<BasicEvent>& out) {
  if (g.kind == Gate::Kind::Basic) {
    if (std::find(out.begin(), out.end(), g.basic) == out.end()) out.push_back(g.basic);
    return;
  }
  for (const Gate& c : g.children) collect_basics(c, out);
}

}  // namespace

std::vector<fta::CutSet> brute_force_cut_sets(const Gate& root) {
  std::vector<BasicEvent> basics;
  collect_basics(root, basics);
  const std::size_t n = basics.size();
  std::vector<fta::CutSet> minimal;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    fta::CutSet set;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) set.insert(basics[i]);
    }
    if (!evaluates_true(root, set)) continue;
    bool is_minimal = true;
    for (const BasicEvent& b : set) {
      fta::CutSet smaller = set;
      smaller.erase(b);
      if (evaluates_true(root, smaller)) {
        is_minimal = false;
        break;
      }
    }
    if (is_minimal) minimal.push_back(std::move(set));
  }
  std::sort(minimal.begin(), minimal.end(), [](const fta::CutSet& a, const fta::CutSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return minimal;
}

namespace {

Gate random_gate(std::mt19937& rng, int pool, int depth) {
  std::uniform_int_distribution<int> pick(0, pool - 1);
  std::uniform_int_distribution<int> coin(0, 99);
  Gate g;
  if (depth == 0 || coin(rng) < 30) {
    g.kind = Gate::Kind::Basic;
    const int i = pick(rng);
    g.basic = BasicEvent{"c" + std::to_string(i % 4), "fm" + std::to_string(i)};
    return g;
  }
  g.kind = coin(rng) < 50 ? Gate::Kind::And : Gate::Kind::Or;
  const int children = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < children; ++i) g.children.push_back(random_gate(rng, pool, depth - 1));
  return g;
}

}  // namespace

Gate random_tree(std::mt19937& rng, int max_basic) {
  const int pool = std::uniform_int_distribution<int>(1, max_basic)(rng);
  Gate root = random_gate(rng, pool, 4);
  if (root.kind == Gate::Kind::Basic) {
    Gate wrapper;
    wrapper.kind = Gate::Kind::Or;
    wrapper.children.push_back(std::move(root));
    return wrapper;
  }
  return root;
}

}  // namespace coopsafe::testing
