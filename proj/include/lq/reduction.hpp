#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lq/term.hpp"
#include "lq/tree.hpp"

namespace lq {

/// Child selector: function part of an application, its argument, or the body of a lambda.
enum class Selector : char { fun = 'f', arg = 'a', body = 'b' };

/// Address of a subterm, from the root.
using Path = std::vector<Selector>;

/// "/f/a/b"; the root is "/".
std::string path_str(const Path& p);
/// Throws std::out_of_range if the path does not exist in t.
const Term& subterm_at(const Term& t, const Path& p);

/// Order of the redex (λx.K) L, i.e. ord(λx.K). Precondition: t.is_redex().
int redex_order(const Term& redex);

/// Capture-avoiding body[value/name]. Throws SortError if an occurrence of
/// `name` has a sort different from value's.
Term substitute(const Term& body, const std::string& name, const Term& value);

/// Redexes not located inside another redex, left to right.
std::vector<Path> outermost_redexes(const Term& t);

/// The rightmost redex of maximal order m whose argument has no order-m redex
/// and which is not inside the body of another order-m redex. "Rightmost"
/// means the greatest path under f < b < a. None iff t is beta-normal.
std::optional<Path> rmf_redex(const Term& t);

/// One beta step at p. Throws std::invalid_argument if p does not address a redex.
Term step(const Term& t, const Path& p);

enum class Strategy { oi, rmf };

struct TraceEntry {
  std::size_t step;
  int order;
  Path path;
};

struct NormalizeOptions {
  std::uint64_t step_budget = 1'000'000;
  bool trace = false;
};

struct Normalized {
  Term normal_form;
  std::uint64_t steps = 0;
  std::vector<TraceEntry> trace;
};

/// Throws CapacityError when the step budget is exhausted.
Normalized normalize(const Term& t, Strategy strategy, const NormalizeOptions& options = {});

/// `<step#> <order> <path>` per line.
std::string format_trace(const std::vector<TraceEntry>& trace);

/// Converts a closed beta-normal term of sort o to a tree. Throws
/// PreconditionError if t contains a lambda or a variable.
Tree to_tree(const Term& t);

}  // namespace lq
