#include "lq/tree_metrics.hpp"

#include <algorithm>
#include <vector>

#include "lq/errors.hpp"

namespace lq {

std::size_t count_a(const Tree& t) {
  std::size_t n = t.label == "a" ? 1 : 0;
  for (const auto& c : t.children) n += count_a(c);
  return n;
}

std::size_t max_branch_a(const Tree& t) {
  std::size_t best = 0;
  for (const auto& c : t.children) best = std::max(best, max_branch_a(c));
  return best + (t.label == "a" ? 1 : 0);
}

namespace {

// Largest n with A_n embedded somewhere in t, or -1 when not even A_0 is.
long embed_rec(const Tree& t) {
  long below = t.children.empty() ? (t.label == "e" ? 0 : -1) : -1;
  std::vector<long> sub;
  sub.reserve(t.children.size());
  for (const auto& c : t.children) {
    sub.push_back(embed_rec(c));
    below = std::max(below, sub.back());
  }
  if (t.label != "a") return below;
  if (sub.size() != 2) throw PreconditionError("embed_depth needs binary a nodes");
  const long lo = std::min(sub[0], sub[1]);
  const long here = lo >= 0 ? 1 + lo : -1;
  return std::max(below, here);
}

}  // namespace

std::size_t embed_depth(const Tree& t) {
  const long n = embed_rec(t);
  return n < 0 ? 0 : static_cast<std::size_t>(n);
}

Tree build_An(std::size_t n) {
  if (n == 0) return Tree{"e", {}};
  Tree sub = build_An(n - 1);
  return Tree{"a", {sub, sub}};
}

}  // namespace lq
