#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lq/term.hpp"

namespace lq {

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t count = 50;
  std::size_t max_size = 30;
  int max_complexity = 3;
  /// Terms whose normalization needs more steps, or whose normal form has
  /// more nodes, are discarded and regenerated.
  std::uint64_t max_steps = 20'000;
  std::size_t max_normal_form = 4'096;
};

/// Random closed homogeneous terms of sort o over the standard signature.
///
/// Generation is type-directed: a term of a requested sort is grown from
/// constants, bound variables applied to arguments, lambdas, and redexes
/// (λv:τ. K) L whose binder sort τ keeps the redex homogeneous. Bound
/// variables range over o, o→o, o→o→o, (o→o)→o and (o→o)→o→o. The result is
/// deterministic in the options and free of alpha-equivalent duplicates.
std::vector<Term> generate_corpus(const CorpusOptions& options);

}  // namespace lq
