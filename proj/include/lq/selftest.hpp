#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lq/caps.hpp"
#include "lq/corpus.hpp"
#include "lq/report.hpp"

namespace lq {

/// Outcome of one property over a corpus. A term is "checked" when the
/// property applies to it and ran to completion, "skipped" when an analysis
/// hit a capacity cap.
struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  /// Up to a few violating terms, in corpus order.
  std::vector<std::string> examples;
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<PropertyResult> properties;

  bool ok() const;
  const PropertyResult& property(const std::string& name) const;
};

/// Property names, in report order.
namespace prop {
inline constexpr const char* well_formed = "corpus terms are closed, homogeneous, of sort o, within size and complexity";
inline constexpr const char* round_trip = "parse(print(t)) is alpha-equal to t";
inline constexpr const char* sort_preservation = "RMF steps preserve the sort";
inline constexpr const char* rmf_order = "RMF redex orders are non-increasing";
inline constexpr const char* rmf_argument_vars = "free variables of L in an RMF(m) redex have order <= m-2";
inline constexpr const char* confluence = "OI and RMF normal forms are alpha-equal";
inline constexpr const char* det_unique = "det: exactly one root derivation";
inline constexpr const char* det_coupling = "det: value > 0 iff flag pr";
inline constexpr const char* det_upper = "det: value <= count_a";
inline constexpr const char* det_zero = "det: no a in the normal form implies (np, 0)";
inline constexpr const char* det_subject_reduction = "det: val <= val' <= 2^val across one RMF(m) step";
inline constexpr const char* det_checker = "det: materialized derivation checks and has the reported value";
inline constexpr const char* nd_upper = "nondet: max value <= max_branch_a";
inline constexpr const char* nd_weak_lower = "nondet: max_branch_a >= 1 implies max value >= 1";
inline constexpr const char* nd_preservation = "nondet: one RMF(m+1) step preserves the max value at order m";
inline constexpr const char* nd_checker = "nondet: best derivation checks and has the reported value";
inline constexpr const char* branch_le_count = "max_branch_a <= count_a";
}  // namespace prop

SelftestReport run_selftest(const CorpusOptions& corpus, const Caps& caps = {});

/// Deterministic: no timing.
Json selftest_json(const SelftestReport& r);

}  // namespace lq
