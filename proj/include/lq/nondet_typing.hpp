#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lq/caps.hpp"
#include "lq/det_typing.hpp"
#include "lq/term.hpp"
#include "lq/type_arena.hpp"

namespace lq {

/// A type triple (Z, F, τ): zone order, productivity order and type.
struct NDTriple {
  std::uint8_t zone = 0;
  std::uint8_t productivity = 0;
  TypeId type = kAtomType;
  friend auto operator<=>(const NDTriple&, const NDTriple&) = default;
};

/// Types of the zone system. 𝒯^o = {o}; an arrow's argument set holds triples
/// of the argument sort at that sort's own order. Types do not depend on the
/// ambient order bound; only triples do.
class NDTypes : public TypeArena<NDTriple> {
 public:
  /// All of 𝒯^s, memoized. Throws CapacityError when the space exceeds `cap`.
  const std::vector<TypeId>& all_of(const Sort& s, std::size_t cap);
  /// All triples (Z, F, τ) of sort s with Z, F ≤ m and F ≤ Z + 1.
  std::vector<NDTriple> triples_of(const Sort& s, int m, std::size_t cap);

  /// True iff all triples in every argument set of `t` (at every arrow level)
  /// are k-balanced.
  bool all_arguments_k_balanced(TypeId t, int k);
  bool k_unbalanced(const NDTriple& tr, int k) { return tr.zone >= k && all_arguments_k_balanced(tr.type, k); }
  /// k-balanced for every k ≤ Z (larger k are balanced trivially).
  bool balanced(const NDTriple& tr);

  /// Which argument triples a lambda may leave unused.
  enum class Weakening {
    /// Any balanced triple.
    balanced,
    /// Balanced triples with productivity order 0. An unused argument then
    /// cannot raise F of the enclosing application, which would credit
    /// constants a that disappear from the normal form.
    unproductive,
  };
  Weakening weakening() const { return weakening_; }
  void set_weakening(Weakening w) { weakening_ = w; }
  bool ignorable(const NDTriple& tr) {
    return balanced(tr) && (weakening_ == Weakening::balanced || tr.productivity == 0);
  }

  /// Whether the pattern `p` can be instantiated to the concrete type `c`:
  /// each open argument set may be extended by balanced triples.
  bool matches(TypeId p, TypeId c);

  /// `o`, `(0,1,(0,0,o) -> o) & (1,1,(0,0,o) -> o) -> o`, `T -> o`. An open
  /// argument set is rendered with a trailing `& ..`.
  std::string str(TypeId id) const;
  std::string str(const NDTriple& t) const;

 private:
  std::map<Sort, std::vector<TypeId>> spaces_;
  std::map<std::pair<TypeId, int>, bool> balance_memo_;
  std::map<std::pair<TypeId, TypeId>, bool> match_memo_;
  Weakening weakening_ = Weakening::unproductive;
};

/// Enumerates 𝒯̂^s_m.
std::vector<NDTriple> nd_triples_of(const Sort& s, int m, NDTypes& types, std::size_t cap = std::size_t{1} << 16);

/// Per the inductive definition: Z ≥ k and all argument triples k-balanced.
bool is_k_unbalanced(NDTypes& types, const NDTriple& tr, int k);

enum class NDRule { constant, variable, lambda, application };

const char* rule_str(NDRule r);

struct NDBinding {
  std::string var;
  Sort sort;
  NDTriple triple;
  friend bool operator==(const NDBinding&, const NDBinding&) = default;
};

/// One node of a derivation for Γ ⊢_m subject : triple.
struct NDNode {
  NDRule rule;
  Term subject;
  std::vector<NDBinding> env;
  NDTriple triple;
  /// kvalues[k-1] is the k-value of this node, k = 1..m+1.
  std::vector<std::uint64_t> kvalues;
  /// Application: function premise first, then one premise per argument-set
  /// element. Lambda: the body premise.
  std::vector<NDNode> children;
};

struct NDDerivation {
  std::shared_ptr<NDTypes> types;
  int m = 0;
  NDNode root;
};

/// Componentwise sums of node k-values, indexed k = 1..m+1.
std::vector<std::uint64_t> nd_value_vector(const NDDerivation& d);

/// Verifies every node against the rules, including the side conditions of
/// (Var), the restricted weakening of (λ), argument clipping, per-k
/// uniqueness of unbalanced premises, and the recorded k-values.
CheckResult check_nd(const NDDerivation& d);

struct NDAnalysis {
  std::shared_ptr<NDTypes> types;
  int m = 0;
  /// Number of derivations of ⊢_m t : (m, m, o), saturating.
  std::uint64_t derivations = 0;
  /// Maximum of val^{m+1} over those derivations; empty when there is none.
  std::optional<std::uint64_t> max_value;
  /// Up to Caps::max_materialize derivations, maximal-value ones first.
  std::vector<NDDerivation> materialized;
  std::size_t judgments = 0;
  std::size_t ways = 0;
};

/// Analyzes ⊢_m t : (m, m, o) for a closed homogeneous term of sort o whose
/// complexity is at most m + 1. Throws PreconditionError on other input and
/// CapacityError when caps are hit.
NDAnalysis derive_nd(const Term& t, int m, const Caps& caps = {}, bool materialize = false,
                     NDTypes::Weakening weakening = NDTypes::Weakening::unproductive);

/// Maximum val^{m+1} over derivations of ⊢_m t : (m, m, o), or none.
std::optional<std::uint64_t> max_nd_value(const Term& t, int m, const Caps& caps = {},
                                          NDTypes::Weakening weakening = NDTypes::Weakening::unproductive);

}  // namespace lq
