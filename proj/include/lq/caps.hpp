#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace lq {

/// Capacity caps for the type-system analyses and for normalization.
///
/// Type spaces grow non-elementarily with the sort, so every analysis runs
/// under explicit caps and reports CapacityError instead of running away.
struct Caps {
  int max_complexity = 3;
  int max_m = 3;
  std::size_t max_types = std::size_t{1} << 16;  // per enumerated type space
  std::size_t max_judgments = 2'000'000;         // per analysis, over all subterms
  std::size_t max_ways = 8'000'000;              // rule instances per analysis
  std::size_t max_materialize = 10'000;          // derivations materialized per root judgment
  std::uint64_t step_budget = 1'000'000;
  std::size_t max_tree_nodes = 1'000'000;

  /// Overrides from "key=value,key=value". Unknown keys or malformed values
  /// throw std::invalid_argument.
  static Caps parse(const std::string& overrides, Caps base);
  static Caps parse(const std::string& overrides);
  /// Defaults overridden by the LQ_CAPS environment variable, if set.
  static Caps from_env();
};

}  // namespace lq
