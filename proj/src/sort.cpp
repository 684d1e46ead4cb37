#include "lq/sort.hpp"

#include <algorithm>

namespace lq {

Sort::Sort() = default;

Sort Sort::arrow(Sort argument, Sort result) {
  const int order = std::max(1 + argument.order(), result.order());
  const int arity = 1 + result.arity();
  // The result contributes its own arguments; the new argument must not be of
  // lower order than the first of them.
  bool homogeneous = argument.is_homogeneous() && result.is_homogeneous();
  if (homogeneous && !result.is_base()) {
    homogeneous = argument.order() >= result.argument().order();
  }
  auto node = std::make_shared<const Node>(
      Node{std::move(argument), std::move(result), order, arity, homogeneous});
  return Sort(std::move(node));
}

Sort Sort::function(const std::vector<Sort>& arguments) {
  Sort s;
  for (auto it = arguments.rbegin(); it != arguments.rend(); ++it) s = arrow(*it, s);
  return s;
}

const Sort& Sort::argument() const {
  if (!node_) throw std::logic_error("ground sort has no argument");
  return node_->argument;
}

const Sort& Sort::result() const {
  if (!node_) throw std::logic_error("ground sort has no result");
  return node_->result;
}

int Sort::order() const { return node_ ? node_->order : 0; }
int Sort::arity() const { return node_ ? node_->arity : 0; }
bool Sort::is_homogeneous() const { return node_ ? node_->homogeneous : true; }

std::vector<Sort> Sort::arguments() const {
  std::vector<Sort> out;
  for (const Sort* s = this; !s->is_base(); s = &s->result()) out.push_back(s->argument());
  return out;
}

std::string Sort::str() const {
  if (is_base()) return "o";
  std::string arg = argument().str();
  if (!argument().is_base()) arg = "(" + arg + ")";
  return arg + "->" + result().str();
}

int compare(const Sort& lhs, const Sort& rhs) {
  if (lhs.node_ == rhs.node_) return 0;
  if (lhs.is_base()) return -1;
  if (rhs.is_base()) return 1;
  if (int c = compare(lhs.node_->argument, rhs.node_->argument); c != 0) return c;
  return compare(lhs.node_->result, rhs.node_->result);
}

}  // namespace lq
