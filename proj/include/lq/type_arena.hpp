#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "lq/sort.hpp"

namespace lq {

using TypeId = std::uint32_t;
inline constexpr TypeId kAtomType = 0;

/// Interning store for intersection types refining a sort.
///
/// A type is either the atom (id 0, sort o) or an arrow `⋀args → result`
/// whose argument set is kept sorted and duplicate-free, so structural
/// equality is id equality. `Item` is what argument sets contain: a
/// (flag, type) pair or a (zone, productivity, type) triple.
///
/// `open` marks an arrow whose argument set may still be extended by
/// balanced triples (the restricted weakening of the nondeterministic
/// system). Such arrows are patterns, not concrete types.
template <class Item>
class TypeArena {
 public:
  struct Data {
    Sort sort;
    std::vector<Item> args;
    TypeId result = kAtomType;
    bool open = false;
  };

  TypeArena() { data_.push_back(Data{Sort(), {}, kAtomType, false}); }

  TypeId atom() const { return kAtomType; }

  TypeId arrow(const Sort& sort, std::vector<Item> args, TypeId result, bool open = false) {
    if (sort.is_base()) throw std::logic_error("arrow type over ground sort");
    std::sort(args.begin(), args.end());
    args.erase(std::unique(args.begin(), args.end()), args.end());
    auto sid = sort_ids_.try_emplace(sort, static_cast<int>(sort_ids_.size())).first->second;
    auto key = std::make_tuple(sid, args, result, open);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const TypeId id = static_cast<TypeId>(data_.size());
    data_.push_back(Data{sort, std::move(args), result, open});
    index_.emplace(std::move(key), id);
    return id;
  }

  const Data& operator[](TypeId id) const { return data_.at(id); }
  const Sort& sort(TypeId id) const { return data_.at(id).sort; }
  bool is_atom(TypeId id) const { return id == kAtomType; }
  std::size_t size() const { return data_.size(); }

  /// True if no arrow anywhere in the type is open.
  bool concrete(TypeId id) const {
    for (TypeId t = id; t != kAtomType; t = data_[t].result) {
      if (data_[t].open) return false;
    }
    return true;
  }

 private:
  std::vector<Data> data_;
  std::map<std::tuple<int, std::vector<Item>, TypeId, bool>, TypeId> index_;
  std::map<Sort, int> sort_ids_;
};

using VarIndex = std::uint32_t;
using EnvId = std::uint32_t;

template <class Item>
struct Binding {
  VarIndex var;
  Item item;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};

/// Interning store for type environments: sets of variable bindings, possibly
/// several per variable.
template <class Item>
class EnvArena {
 public:
  using Env = std::vector<Binding<Item>>;

  EnvArena() { intern({}); }

  static constexpr EnvId empty() { return 0; }

  EnvId intern(Env env) {
    std::sort(env.begin(), env.end());
    env.erase(std::unique(env.begin(), env.end()), env.end());
    auto it = index_.find(env);
    if (it != index_.end()) return it->second;
    const EnvId id = static_cast<EnvId>(envs_.size());
    envs_.push_back(env);
    index_.emplace(std::move(env), id);
    return id;
  }

  const Env& operator[](EnvId id) const { return envs_.at(id); }

  EnvId join(EnvId lhs, EnvId rhs) {
    if (lhs == rhs || rhs == empty()) return lhs;
    if (lhs == empty()) return rhs;
    Env out;
    std::set_union(envs_[lhs].begin(), envs_[lhs].end(), envs_[rhs].begin(), envs_[rhs].end(),
                   std::back_inserter(out));
    return intern(std::move(out));
  }

  /// Splits off the bindings of `var`: returns (rest, items bound to var).
  std::pair<EnvId, std::vector<Item>> extract(EnvId id, VarIndex var) {
    Env rest;
    std::vector<Item> items;
    for (const auto& b : envs_[id]) {
      if (b.var == var) {
        items.push_back(b.item);
      } else {
        rest.push_back(b);
      }
    }
    if (items.empty()) return {id, {}};
    return {intern(std::move(rest)), std::move(items)};
  }

  std::size_t size() const { return envs_.size(); }

 private:
  std::vector<Env> envs_;
  std::map<Env, EnvId> index_;
};

}  // namespace lq
