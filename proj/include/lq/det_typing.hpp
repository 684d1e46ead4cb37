#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lq/caps.hpp"
#include "lq/term.hpp"
#include "lq/type_arena.hpp"

namespace lq {

/// Productivity flag.
enum class Flag : std::uint8_t { np = 0, pr = 1 };

inline const char* flag_str(Flag f) { return f == Flag::pr ? "pr" : "np"; }

/// An element of an argument set: the flag the argument is used with and its type.
struct DetItem {
  Flag flag;
  TypeId type;
  friend auto operator<=>(const DetItem&, const DetItem&) = default;
};

/// Types of the productivity-flag system: 𝒯^o = {r}, 𝒯^{α→β} = 𝒫({pr,np} × 𝒯^α) × 𝒯^β.
class DetTypes : public TypeArena<DetItem> {
 public:
  /// All of 𝒯^s, memoized. Throws CapacityError when the space exceeds `cap`.
  const std::vector<TypeId>& all_of(const Sort& s, std::size_t cap);

  /// `r`, `(pr,r) -> r`, `T -> r` (empty intersection), `(np,r) & (pr,r) -> r`.
  std::string str(TypeId id) const;

 private:
  std::map<Sort, std::vector<TypeId>> spaces_;
};

/// Enumerates 𝒯^s into a fresh arena.
std::vector<TypeId> det_types_of(const Sort& s, DetTypes& types, std::size_t cap = std::size_t{1} << 16);

enum class DetRule { constant, variable, lambda, application };

const char* rule_str(DetRule r);

struct DetBinding {
  std::string var;
  Sort sort;
  Flag flag;
  TypeId type;
  friend bool operator==(const DetBinding&, const DetBinding&) = default;
};

/// One node of a materialized derivation: the judgment `env ⊢ subject : (flag, type)`,
/// the rule instantiated here, and the node value.
struct DetNode {
  DetRule rule;
  Term subject;
  std::vector<DetBinding> env;
  Flag flag;
  TypeId type;
  std::uint64_t value = 0;
  /// Application: function premise first, then one argument premise per element
  /// of the argument set. Lambda: the body premise.
  std::vector<DetNode> children;
};

struct DetDerivation {
  std::shared_ptr<DetTypes> types;
  DetNode root;
};

/// Sum of the recorded node values.
std::uint64_t derivation_value(const DetNode& d);

struct CheckResult {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

/// Verifies that every node instantiates a rule, with environments exactly the
/// unions the rules produce, and that recorded node values match the rule.
CheckResult check_det(const DetDerivation& d);

/// All derivations of one root judgment ⊢ t : (flag, r).
struct DetRoot {
  Flag flag;
  /// Number of derivations (saturates at UINT64_MAX).
  std::uint64_t derivations = 0;
  /// Derivation value -> number of derivations with that value.
  std::map<std::uint64_t, std::uint64_t> values;
  /// Up to Caps::max_materialize derivations.
  std::vector<DetDerivation> materialized;
};

struct DetAnalysis {
  std::shared_ptr<DetTypes> types;
  std::vector<DetRoot> roots;
  std::size_t judgments = 0;
  std::size_t ways = 0;
};

/// Enumerates every derivation of ⊢ t : (f, r) for a closed term of sort o.
/// Throws PreconditionError for open or non-ground terms, CapacityError when caps are hit.
DetAnalysis derive_det(const Term& t, const Caps& caps = {}, bool materialize = true);

/// The root judgment count or shape contradicts the claim that a closed ground
/// term has exactly one derivation.
class UniquenessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlagValue {
  Flag flag;
  std::uint64_t value;
};

/// Flag and value of the unique derivation for t. Throws UniquenessViolation
/// when there is no derivation or more than one.
FlagValue det_value_and_flag(const Term& t, const Caps& caps = {});

}  // namespace lq
