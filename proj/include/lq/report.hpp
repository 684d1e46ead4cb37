#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "lq/caps.hpp"
#include "lq/det_typing.hpp"
#include "lq/families.hpp"
#include "lq/nondet_typing.hpp"

namespace lq {

using Json = nlohmann::ordered_json;

/// Types as nested {args: [...], result}; the atom is the string "r" (det)
/// or "o" (nondet). Nondet argument elements are {Z, F, type}.
Json type_json(const DetTypes& types, TypeId t);
Json type_json(const NDTypes& types, TypeId t);

/// Derivation trees. Every node has rule, judgment {environment, path, term,
/// ...} and its value; nondet nodes add Z, F, m, kValues and balancedFlags
/// (balancedFlags[k] is true iff the node's triple is k-balanced, k = 0..m).
Json derivation_json(const DetDerivation& d);
Json derivation_json(const NDDerivation& d);

struct AnalysisReport {
  std::string input;
  std::string term;
  Mode mode = Mode::det;
  int m = 0;
  // det
  Flag flag = Flag::np;
  std::uint64_t value = 0;
  // nondet; empty when ⊢_m t : (m,m,o) has no derivation
  std::optional<std::uint64_t> max_value;
  NDTypes::Weakening weakening = NDTypes::Weakening::unproductive;
  std::uint64_t derivations = 0;
  std::string normal_form;
  std::uint64_t count_a = 0;
  std::uint64_t max_branch_a = 0;
  double seconds = 0;
  std::optional<Json> derivation;

  /// det: value ≤ count_a. nondet: max value ≤ max_branch_a (vacuous without a derivation).
  bool upper_bound_holds() const;
  /// det: value > 0 iff flag pr. nondet: max_branch_a ≥ 1 implies a derivation with value ≥ 1.
  bool lower_bound_holds() const;
};

struct AnalyzeOptions {
  /// Order bound for nondet; defaults to the term's complexity.
  std::optional<int> m;
  /// Attach the (unique, resp. one maximal) derivation as JSON.
  bool derivation = false;
  NDTypes::Weakening weakening = NDTypes::Weakening::unproductive;
};

/// Runs the analysis selected by `mode` on the text of a closed term of sort
/// o. Propagates ParseError, SortError, PreconditionError, CapacityError and
/// UniquenessViolation.
AnalysisReport analyze(const std::string& text, Mode mode, const AnalyzeOptions& options = {}, const Caps& caps = {});

/// `timing` off gives byte-identical output for identical inputs.
Json report_json(const AnalysisReport& r, bool timing = true);

Json family_json(const FamilyRun& run);

}  // namespace lq
