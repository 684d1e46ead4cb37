#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lq/caps.hpp"
#include "lq/term.hpp"

namespace lq {

enum class Mode { det, nondet };

const char* mode_str(Mode m);
/// "det" or "nondet"; throws std::invalid_argument otherwise.
Mode parse_mode(const std::string& text);

/// Names accepted by family_term: "example1", "spine", "balanced-b".
const std::vector<std::string>& family_names();

/// Instance j ≥ 0 of a parametric family:
///   example1    (\y:(o->o). N (... (N y)) (a e)) a with j copies of N = \y:(o->o).\x:o. y (y x)
///   spine       a (a (... e)) with j copies of a
///   balanced-b  (\f:(o->o). f (... (f e))) (\x:o. b (a x) (a x)) with j applications of f
/// Throws std::invalid_argument for an unknown name.
Term family_term(const std::string& name, unsigned j);

struct FamilyRecord {
  unsigned j = 0;
  std::string term;
  int m = 0;                    // order bound used (nondet); complexity of the instance
  std::uint64_t value = 0;      // det value, or max val^{m+1}
  bool derivable = true;        // nondet: a root derivation exists
  std::uint64_t metric = 0;     // count_a (det) or max_branch_a (nondet) of the normal form
};

struct FamilyRun {
  std::string name;
  Mode mode = Mode::det;
  std::vector<FamilyRecord> records;
};

/// Records for j = 1..max. Throws CapacityError when an instance exceeds caps.
FamilyRun run_family(const std::string& name, unsigned max, Mode mode, const Caps& caps = {});

/// "both increase" when both sequences are non-decreasing and end above
/// where they start, "both bounded" when both are constant, "MISMATCH"
/// otherwise. Computed from the records on every call.
std::string family_verdict(const FamilyRun& run);

}  // namespace lq
