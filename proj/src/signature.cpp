#include "lq/signature.hpp"

#include <stdexcept>

namespace lq {

Signature::Signature(std::vector<ConstantDecl> constants) : constants_(std::move(constants)) {
  for (std::size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i].sort.order() > 1) {
      throw std::invalid_argument("constant " + constants_[i].name + " has order " +
                                  std::to_string(constants_[i].sort.order()) + " > 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (constants_[i].name == constants_[j].name) {
        throw std::invalid_argument("duplicate constant " + constants_[i].name);
      }
    }
  }
}

const Signature& Signature::standard() {
  static const Signature sig({{"a", Sort::function({Sort()})},
                              {"b", Sort::function({Sort(), Sort()})},
                              {"e", Sort()}});
  return sig;
}

const Signature& Signature::binary_a() {
  static const Signature sig({{"a", Sort::function({Sort(), Sort()})},
                              {"b", Sort::function({Sort(), Sort()})},
                              {"e", Sort()}});
  return sig;
}

const ConstantDecl* Signature::find(std::string_view name) const {
  for (const auto& c : constants_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace lq
