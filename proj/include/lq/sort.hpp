#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lq {

/// A simple type built from the ground sort `o` and the arrow.
///
/// Sorts are immutable handles; copies share structure. Equality and
/// ordering are structural.
class Sort {
 public:
  /// The ground sort `o`.
  Sort();

  static Sort base() { return Sort(); }
  static Sort arrow(Sort argument, Sort result);
  /// Builds α₁→…→α_k→o.
  static Sort function(const std::vector<Sort>& arguments);

  bool is_base() const { return node_ == nullptr; }
  /// Only valid for arrows.
  const Sort& argument() const;
  const Sort& result() const;

  /// ord(o) = 0, ord(α→β) = max(1 + ord(α), ord(β)).
  int order() const;
  /// Number of arguments k in α₁→…→α_k→o.
  int arity() const;
  /// The argument sorts α₁,…,α_k.
  std::vector<Sort> arguments() const;
  /// Argument orders are non-increasing and every argument is homogeneous.
  bool is_homogeneous() const;

  std::string str() const;

  friend int compare(const Sort& lhs, const Sort& rhs);
  friend bool operator==(const Sort& lhs, const Sort& rhs) { return compare(lhs, rhs) == 0; }
  friend bool operator!=(const Sort& lhs, const Sort& rhs) { return compare(lhs, rhs) != 0; }
  friend bool operator<(const Sort& lhs, const Sort& rhs) { return compare(lhs, rhs) < 0; }

 private:
  struct Node;
  explicit Sort(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Sort::Node {
  Sort argument;
  Sort result;
  int order;
  int arity;
  bool homogeneous;
};

}  // namespace lq
