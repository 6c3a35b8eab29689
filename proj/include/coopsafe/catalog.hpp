#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coopsafe/diagnostics.hpp"
#include "coopsafe/model.hpp"

namespace coopsafe {

struct SafetyTactic {
  std::string id;
  std::string name;
  std::string aim;
  std::string description;
  CapabilitySet provides;
};

struct SafetyPattern {
  std::string id;
  std::string name;
  std::vector<std::string> tactics;
};

/// Response classes that cannot both be honoured for the same trigger.
class ResponseExclusivity {
 public:
  void add(std::string a, std::string b);
  bool exclusive(std::string_view a, std::string_view b) const;
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  // Stored with first <= second.
  std::set<std::pair<std::string, std::string>> pairs_;
};

class Catalog {
 public:
  std::vector<SafetyTactic> tactics;    // sorted by id
  std::vector<SafetyPattern> patterns;  // sorted by id
  ResponseExclusivity exclusivity;
  std::map<std::string, std::string> responses;  // declared response classes

  const SafetyTactic* find_tactic(std::string_view id) const;
  const SafetyPattern* find_pattern(std::string_view id) const;

  /// Union of every tactic's `provides`.
  CapabilitySet capability_vocabulary() const;
  /// Union of `provides` over the given tactic ids (unknown ids ignored).
  CapabilitySet capabilities_of(const std::set<std::string>& tactic_ids) const;
};

/// ASIL from severity, exposure and controllability. QM when any class is
/// zero; otherwise the sum S+E+C maps 7..10 onto A..D and lower sums to QM.
Asil determine_asil(Severity s, Exposure e, Controllability c);
/// Index form; throws std::domain_error on out-of-range classes.
Asil determine_asil(int s, int e, int c);

/// Parses a catalog file. Throws InputError carrying located diagnostics on
/// syntax, schema or reference errors.
Catalog load_catalog(std::string_view text, const std::string& file_name);
Catalog load_catalog_file(const std::string& path);

/// The bundled 13-tactic / 15-pattern catalog.
const Catalog& default_catalog();
std::string_view default_catalog_text();

}  // namespace coopsafe
