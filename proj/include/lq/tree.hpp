#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lq {

/// A finite ranked tree over a signature: the normal form of a closed term of sort o.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Parenthesized prefix form, e.g. `b(a(e),a(a(e)))`.
std::string serialize(const Tree& t);
/// Inverse of serialize. Throws ParseError.
Tree parse_tree(std::string_view text);

std::size_t node_count(const Tree& t);

}  // namespace lq
