#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lq/sort.hpp"

namespace lq {

struct ConstantDecl {
  std::string name;
  Sort sort;
};

/// A finite set of node constructors, each of order at most 1.
class Signature {
 public:
  /// Throws std::invalid_argument on duplicate names or constants of order > 1.
  explicit Signature(std::vector<ConstantDecl> constants);

  /// a : o→o, b : o→o→o, e : o.
  static const Signature& standard();
  /// a : o→o→o, b : o→o→o, e : o. Used for embedding depth.
  static const Signature& binary_a();

  const ConstantDecl* find(std::string_view name) const;
  const std::vector<ConstantDecl>& constants() const { return constants_; }

 private:
  std::vector<ConstantDecl> constants_;
};

}  // namespace lq
