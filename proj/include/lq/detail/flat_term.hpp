#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lq/term.hpp"

namespace lq::detail {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct VarInfo {
  std::string name;
  Sort sort;
};

struct FlatNode {
  TermKind kind;
  Term term;
  NodeId first = kNone;   // fun or body
  NodeId second = kNone;  // arg
  VarId var = kNone;      // referenced variable, or the variable bound by a lambda
};

/// A term with one node per occurrence and one variable id per binder, so
/// that analyses can key tables by occurrence and never confuse shadowed names.
class FlatTerm {
 public:
  explicit FlatTerm(const Term& t) : root_(add(t)) {}

  NodeId root() const { return root_; }
  const FlatNode& operator[](NodeId n) const { return nodes_[n]; }
  std::size_t size() const { return nodes_.size(); }
  const VarInfo& var(VarId v) const { return vars_[v]; }
  std::size_t var_count() const { return vars_.size(); }

  /// Leftmost non-application node of the application spine at n.
  NodeId head(NodeId n) const {
    while (nodes_[n].kind == TermKind::application) n = nodes_[n].first;
    return n;
  }

 private:
  NodeId add(const Term& t) {
    const NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(FlatNode{t.kind(), t});
    switch (t.kind()) {
      case TermKind::constant:
        break;
      case TermKind::variable: {
        VarId v = kNone;
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (vars_[*it].name == t.name()) {
            v = *it;
            break;
          }
        }
        if (v == kNone) {
          for (VarId f : free_) {
            if (vars_[f].name == t.name()) v = f;
          }
        }
        if (v == kNone) {
          v = static_cast<VarId>(vars_.size());
          vars_.push_back({t.name(), t.sort()});
          free_.push_back(v);
        }
        nodes_[id].var = v;
        break;
      }
      case TermKind::lambda: {
        const VarId v = static_cast<VarId>(vars_.size());
        vars_.push_back({t.name(), t.binder_sort()});
        nodes_[id].var = v;
        scope_.push_back(v);
        const NodeId body = add(t.body());
        scope_.pop_back();
        nodes_[id].first = body;
        break;
      }
      case TermKind::application: {
        const NodeId f = add(t.fun());
        const NodeId a = add(t.arg());
        nodes_[id].first = f;
        nodes_[id].second = a;
        break;
      }
    }
    return id;
  }

  std::vector<FlatNode> nodes_;
  std::vector<VarInfo> vars_;
  std::vector<VarId> scope_;
  std::vector<VarId> free_;
  NodeId root_;
};

}  // namespace lq::detail
