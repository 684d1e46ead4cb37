#include "lq/nondet_typing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "lq/detail/flat_term.hpp"
#include "lq/errors.hpp"

namespace lq {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

void check_subsets(std::size_t n, std::size_t per_subset, std::size_t cap, const std::string& what) {
  if (n >= 63 || (std::uint64_t{1} << n) > cap / std::max<std::size_t>(1, per_subset)) {
    throw CapacityError(what + " exceeds cap " + std::to_string(cap));
  }
}

NDTriple clip(const NDTriple& t, int order) {
  const auto o = static_cast<std::uint8_t>(order);
  return {std::min(t.zone, o), std::min(t.productivity, o), t.type};
}

}  // namespace

// ---------------------------------------------------------------------------
// Types and triples
// ---------------------------------------------------------------------------

const std::vector<TypeId>& NDTypes::all_of(const Sort& s, std::size_t cap) {
  if (auto it = spaces_.find(s); it != spaces_.end()) return it->second;
  std::vector<TypeId> out;
  if (s.is_base()) {
    out.push_back(atom());
  } else {
    const std::vector<NDTriple> arg_triples = triples_of(s.argument(), s.argument().order(), cap);
    const std::vector<TypeId> results = all_of(s.result(), cap);
    check_subsets(arg_triples.size(), results.size(), cap, "type space of sort " + s.str());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << arg_triples.size()); ++mask) {
      std::vector<NDTriple> chosen;
      for (std::size_t i = 0; i < arg_triples.size(); ++i) {
        if (mask >> i & 1) chosen.push_back(arg_triples[i]);
      }
      for (TypeId r : results) out.push_back(arrow(s, chosen, r));
    }
  }
  return spaces_.emplace(s, std::move(out)).first->second;
}

std::vector<NDTriple> NDTypes::triples_of(const Sort& s, int m, std::size_t cap) {
  const std::vector<TypeId> types = all_of(s, cap);
  std::vector<NDTriple> out;
  for (int z = 0; z <= m; ++z) {
    for (int f = 0; f <= std::min(m, z + 1); ++f) {
      if (out.size() + types.size() > cap) {
        throw CapacityError("triple space of sort " + s.str() + " exceeds cap " + std::to_string(cap));
      }
      for (TypeId t : types) out.push_back({static_cast<std::uint8_t>(z), static_cast<std::uint8_t>(f), t});
    }
  }
  return out;
}

bool NDTypes::all_arguments_k_balanced(TypeId t, int k) {
  if (is_atom(t)) return true;
  const auto key = std::make_pair(t, k);
  if (auto it = balance_memo_.find(key); it != balance_memo_.end()) return it->second;
  bool ok = true;
  for (TypeId x = t; ok && !is_atom(x); x = (*this)[x].result) {
    const std::vector<NDTriple> args = (*this)[x].args;
    for (const NDTriple& el : args) {
      if (k_unbalanced(el, k)) {
        ok = false;
        break;
      }
    }
  }
  balance_memo_.emplace(key, ok);
  return ok;
}

bool NDTypes::balanced(const NDTriple& tr) {
  for (int k = 0; k <= tr.zone; ++k) {
    if (k_unbalanced(tr, k)) return false;
  }
  return true;
}

bool NDTypes::matches(TypeId p, TypeId c) {
  if (p == c) return true;
  if (is_atom(p) || is_atom(c)) return false;
  const auto key = std::make_pair(p, c);
  if (auto it = match_memo_.find(key); it != match_memo_.end()) return it->second;
  const Data pd = (*this)[p];
  const Data cd = (*this)[c];
  bool ok = pd.sort == cd.sort && !cd.open;
  if (ok && !pd.open) ok = pd.args == cd.args;
  if (ok && pd.open) {
    ok = std::includes(cd.args.begin(), cd.args.end(), pd.args.begin(), pd.args.end());
    for (const NDTriple& el : cd.args) {
      if (!ok) break;
      if (!std::binary_search(pd.args.begin(), pd.args.end(), el)) ok = ignorable(el);
    }
  }
  ok = ok && matches(pd.result, cd.result);
  match_memo_.emplace(key, ok);
  return ok;
}

std::string NDTypes::str(const NDTriple& t) const {
  return "(" + std::to_string(t.zone) + "," + std::to_string(t.productivity) + "," + str(t.type) + ")";
}

std::string NDTypes::str(TypeId id) const {
  if (is_atom(id)) return "o";
  const auto& d = (*this)[id];
  std::string args;
  for (std::size_t i = 0; i < d.args.size(); ++i) {
    if (i) args += " & ";
    args += str(d.args[i]);
  }
  if (d.open) args += args.empty() ? ".." : " & ..";
  if (args.empty()) args = "T";
  return args + " -> " + str(d.result);
}

std::vector<NDTriple> nd_triples_of(const Sort& s, int m, NDTypes& types, std::size_t cap) {
  return types.triples_of(s, m, cap);
}

bool is_k_unbalanced(NDTypes& types, const NDTriple& tr, int k) { return types.k_unbalanced(tr, k); }

const char* rule_str(NDRule r) {
  switch (r) {
    case NDRule::constant:
      return "const";
    case NDRule::variable:
      return "var";
    case NDRule::lambda:
      return "lambda";
    case NDRule::application:
      return "app";
  }
  return "?";
}

std::vector<std::uint64_t> nd_value_vector(const NDDerivation& d) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(d.m) + 1, 0);
  std::vector<const NDNode*> stack{&d.root};
  while (!stack.empty()) {
    const NDNode* n = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < out.size() && k < n->kvalues.size(); ++k) out[k] += n->kvalues[k];
    for (const auto& c : n->children) stack.push_back(&c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivation search
// ---------------------------------------------------------------------------
//
// Judgments are collected bottom-up per subterm occurrence, each with the
// rule instances ("ways") deriving it from judgments of the premises.
//
// A lambda whose binder has an arrow sort may ignore any balanced triples of
// its argument set, so its judgments carry "open" types standing for every
// such extension. The application rule then decides, element by element of
// the argument set (required ones and ignorable balanced ones), which
// judgment of the argument derives it. That fold runs over partial states
// (environment, Z, max F, unbalanced-k mask, special-F candidates), so
// choices leading to the same state are shared instead of multiplied out.

namespace {

using detail::FlatNode;
using detail::FlatTerm;
using detail::NodeId;
using detail::VarId;
using Envs = EnvArena<NDTriple>;

constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

struct Judgment {
  EnvId env;
  NDTriple triple;
  friend auto operator<=>(const Judgment&, const Judgment&) = default;
};

struct Way {
  // k-values are 1 exactly for k in [klo, khi].
  std::uint8_t klo = 1;
  std::uint8_t khi = 0;
  // Lambda: the body judgment.
  std::uint32_t body = kNoIndex;
  // Application: the final partial state.
  std::uint32_t partial = kNoIndex;
};

struct Entry {
  Judgment judgment;
  std::vector<Way> ways;
};

struct Table {
  std::vector<Entry> entries;
  std::map<Judgment, std::uint32_t> index;
};

// One step of the application fold: from a previous partial state, either
// skip an ignorable element or derive `element` by argument judgment `arg`.
struct Edge {
  std::uint32_t from;
  std::uint32_t arg;  // kNoIndex: skipped
  NDTriple element;
};

struct Partial {
  NodeId app;
  std::uint32_t function = kNoIndex;  // set on initial states only
  std::vector<Edge> in;
};

struct PartialKey {
  EnvId env;
  std::uint8_t zone;
  std::uint8_t productivity;
  std::uint8_t unbalanced;
  std::uint8_t candidates;
  friend auto operator<=>(const PartialKey&, const PartialKey&) = default;
};

// The premises of one application rule instance.
struct AppChoice {
  std::uint32_t function;
  std::vector<std::pair<NDTriple, std::uint32_t>> args;  // (element, argument judgment)
};

struct Demand {
  const std::set<TypeId>* types = nullptr;
  std::vector<std::vector<NDTriple>> head_args;
  // For a term in operator position: the triples each pending argument can
  // supply, outermost application last. A lambda consumes the first entry.
  std::vector<const std::set<NDTriple>*> binders;
};

class Engine {
 public:
  Engine(const Term& t, int m, const Caps& caps)
      : flat_(t), m_(m), caps_(caps), types_(std::make_shared<NDTypes>()), tables_(flat_.size()) {}

  void run() { analyze(flat_.root(), {}); }

  const FlatTerm& flat() const { return flat_; }
  const Table& table(NodeId n) const { return tables_[n]; }
  std::shared_ptr<NDTypes> types() const { return types_; }
  std::size_t judgments() const { return judgments_; }
  std::size_t ways() const { return ways_; }

  std::uint64_t count(NodeId n, std::uint32_t e) {
    auto& memo = counts_[n];
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    for (const Way& w : tables_[n].entries[e].ways) total = sat_add(total, count_way(n, w));
    memo.emplace(e, total);
    return total;
  }

  std::uint64_t best(NodeId n, std::uint32_t e) { return best_way(n, e).second; }

  NDNode materialize_best(NodeId n, std::uint32_t e, TypeId target) {
    const Way& w = tables_[n].entries[e].ways[best_way(n, e).first];
    NDNode node = node_for(n, e, w, target);
    const FlatNode& fn = flat_[n];
    if (fn.kind == TermKind::lambda) {
      node.children.push_back(materialize_best(fn.first, w.body, (*types_)[target].result));
    } else if (fn.kind == TermKind::application) {
      const AppChoice c = best_choice(w.partial);
      node.children.push_back(materialize_best(fn.first, c.function, function_target(fn, c, target)));
      for (const auto& [el, le] : c.args) node.children.push_back(materialize_best(fn.second, le, el.type));
    }
    return node;
  }

  std::vector<NDNode> materialize(NodeId n, std::uint32_t e, TypeId target, std::size_t limit) {
    std::vector<NDNode> out;
    const FlatNode& fn = flat_[n];
    for (const Way& w : tables_[n].entries[e].ways) {
      if (out.size() >= limit) break;
      const NDNode base = node_for(n, e, w, target);
      std::vector<std::vector<std::pair<NodeId, std::pair<std::uint32_t, TypeId>>>> premise_sets;
      if (fn.kind == TermKind::lambda) {
        premise_sets.push_back({{fn.first, {w.body, (*types_)[target].result}}});
      } else if (fn.kind == TermKind::application) {
        for (const AppChoice& c : choices(w.partial, limit)) {
          std::vector<std::pair<NodeId, std::pair<std::uint32_t, TypeId>>> premises;
          premises.push_back({fn.first, {c.function, function_target(fn, c, target)}});
          for (const auto& [el, le] : c.args) premises.push_back({fn.second, {le, el.type}});
          premise_sets.push_back(std::move(premises));
        }
      } else {
        premise_sets.emplace_back();
      }
      for (const auto& premises : premise_sets) {
        if (out.size() >= limit) break;
        std::vector<std::vector<NDNode>> options;
        for (const auto& [node, je] : premises) options.push_back(materialize(node, je.first, je.second, limit));
        std::vector<std::size_t> pick(options.size(), 0);
        for (;;) {
          if (out.size() >= limit) break;
          NDNode d = base;
          for (std::size_t i = 0; i < options.size(); ++i) d.children.push_back(options[i][pick[i]]);
          out.push_back(std::move(d));
          std::size_t i = 0;
          for (; i < pick.size(); ++i) {
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
          }
          if (i == pick.size()) break;
        }
      }
    }
    return out;
  }

 private:
  static NDRule rule_of(TermKind k) {
    switch (k) {
      case TermKind::constant:
        return NDRule::constant;
      case TermKind::variable:
        return NDRule::variable;
      case TermKind::lambda:
        return NDRule::lambda;
      case TermKind::application:
        return NDRule::application;
    }
    return NDRule::constant;
  }

  std::uint64_t local_top_value(const Way& w) const {
    const int top = m_ + 1;
    return w.klo <= top && top <= w.khi ? 1 : 0;
  }

  std::uint64_t count_way(NodeId n, const Way& w) {
    const FlatNode& fn = flat_[n];
    if (fn.kind == TermKind::lambda) return count(fn.first, w.body);
    if (fn.kind == TermKind::application) return count_partial(w.partial);
    return 1;
  }

  std::uint64_t count_partial(std::uint32_t p) {
    if (partial_counts_.size() < partials_.size()) partial_counts_.resize(partials_.size());
    if (partial_counts_[p]) return *partial_counts_[p];
    const Partial& part = partials_[p];
    const FlatNode& fn = flat_[part.app];
    std::uint64_t total = 0;
    if (part.function != kNoIndex) {
      total = count(fn.first, part.function);
    } else {
      for (const Edge& e : part.in) {
        const std::uint64_t arg = e.arg == kNoIndex ? 1 : count(fn.second, e.arg);
        total = sat_add(total, sat_mul(count_partial(e.from), arg));
      }
    }
    partial_counts_[p] = total;
    return total;
  }

  // (best incoming edge, best value); the edge index is meaningless for initial states.
  std::pair<std::size_t, std::uint64_t> best_partial(std::uint32_t p) {
    if (partial_best_.size() < partials_.size()) partial_best_.resize(partials_.size());
    if (partial_best_[p]) return *partial_best_[p];
    const Partial& part = partials_[p];
    const FlatNode& fn = flat_[part.app];
    std::pair<std::size_t, std::uint64_t> out{0, 0};
    if (part.function != kNoIndex) {
      out.second = best(fn.first, part.function);
    } else {
      bool first = true;
      for (std::size_t i = 0; i < part.in.size(); ++i) {
        const Edge& e = part.in[i];
        const std::uint64_t v = best_partial(e.from).second + (e.arg == kNoIndex ? 0 : best(fn.second, e.arg));
        if (first || v > out.second) out = {i, v};
        first = false;
      }
    }
    partial_best_[p] = out;
    return out;
  }

  std::pair<std::size_t, std::uint64_t> best_way(NodeId n, std::uint32_t e) {
    auto& memo = best_[n];
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    const FlatNode& fn = flat_[n];
    std::pair<std::size_t, std::uint64_t> out{0, 0};
    bool first = true;
    const auto& ways = tables_[n].entries[e].ways;
    for (std::size_t wi = 0; wi < ways.size(); ++wi) {
      std::uint64_t v = local_top_value(ways[wi]);
      if (fn.kind == TermKind::lambda) v += best(fn.first, ways[wi].body);
      if (fn.kind == TermKind::application) v += best_partial(ways[wi].partial).second;
      if (first || v > out.second) out = {wi, v};
      first = false;
    }
    memo.emplace(e, out);
    return out;
  }

  AppChoice best_choice(std::uint32_t p) {
    AppChoice c;
    for (;;) {
      const Partial& part = partials_[p];
      if (part.function != kNoIndex) {
        c.function = part.function;
        break;
      }
      const Edge& e = part.in[best_partial(p).first];
      if (e.arg != kNoIndex) c.args.push_back({e.element, e.arg});
      p = e.from;
    }
    std::reverse(c.args.begin(), c.args.end());
    return c;
  }

  std::vector<AppChoice> choices(std::uint32_t p, std::size_t limit) {
    const Partial& part = partials_[p];
    if (part.function != kNoIndex) return {AppChoice{part.function, {}}};
    std::vector<AppChoice> out;
    for (const Edge& e : part.in) {
      for (AppChoice c : choices(e.from, limit)) {
        if (out.size() >= limit) return out;
        if (e.arg != kNoIndex) c.args.push_back({e.element, e.arg});
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  TypeId function_target(const FlatNode& fn, const AppChoice& c, TypeId target) {
    std::vector<NDTriple> args;
    for (const auto& a : c.args) args.push_back(a.first);
    return types_->arrow(flat_[fn.first].term.sort(), std::move(args), target);
  }

  NDNode node_for(NodeId n, std::uint32_t e, const Way& w, TypeId target) {
    const FlatNode& node = flat_[n];
    const Judgment& j = tables_[n].entries[e].judgment;
    if (!types_->matches(j.triple.type, target)) throw std::logic_error("materialization target does not match");
    NDNode out{rule_of(node.kind), node.term, {}, {j.triple.zone, j.triple.productivity, target}, {}, {}};
    for (const auto& b : envs_[j.env]) {
      const auto& v = flat_.var(b.var);
      out.env.push_back({v.name, v.sort, b.item});
    }
    out.kvalues.assign(static_cast<std::size_t>(m_) + 1, 0);
    for (int k = w.klo; k <= w.khi && k <= m_ + 1; ++k) out.kvalues[static_cast<std::size_t>(k) - 1] = 1;
    return out;
  }

  std::uint32_t unbalanced_mask(const NDTriple& t) {
    if (auto it = masks_.find(t); it != masks_.end()) return it->second;
    std::uint32_t mask = 0;
    for (int k = 0; k <= m_; ++k) {
      if (types_->k_unbalanced(t, k)) mask |= 1u << k;
    }
    masks_.emplace(t, mask);
    return mask;
  }

  void count_way_budget() {
    if (++ways_ > caps_.max_ways) throw CapacityError("more than " + std::to_string(caps_.max_ways) + " rule instances");
  }

  void add(NodeId n, const Judgment& j, Way w) {
    Table& tab = tables_[n];
    auto [it, inserted] = tab.index.try_emplace(j, static_cast<std::uint32_t>(tab.entries.size()));
    if (inserted) {
      tab.entries.push_back({j, {}});
      if (++judgments_ > caps_.max_judgments) {
        throw CapacityError("more than " + std::to_string(caps_.max_judgments) + " judgments");
      }
    }
    tab.entries[it->second].ways.push_back(w);
    count_way_budget();
  }

  // Balanced triples of sort s at its own order.
  const std::vector<NDTriple>& balanced_triples(const Sort& s) {
    if (auto it = balanced_.find(s); it != balanced_.end()) return it->second;
    std::vector<NDTriple> out;
    for (const NDTriple& t : types_->triples_of(s, s.order(), caps_.max_types)) {
      if (types_->ignorable(t)) out.push_back(t);
    }
    return balanced_.emplace(s, std::move(out)).first->second;
  }

  // Concrete types a (possibly open) type can be instantiated to.
  const std::vector<TypeId>& instances(TypeId p) {
    if (auto it = instances_.find(p); it != instances_.end()) return it->second;
    std::vector<TypeId> out;
    if (types_->concrete(p)) {
      out.push_back(p);
    } else {
      const auto d = (*types_)[p];
      const std::vector<TypeId> results = instances(d.result);
      std::vector<NDTriple> extras;
      if (d.open) {
        for (const NDTriple& t : balanced_triples(d.sort.argument())) {
          if (!std::binary_search(d.args.begin(), d.args.end(), t)) extras.push_back(t);
        }
      }
      check_subsets(extras.size(), results.size(), caps_.max_types, "instances of a weakened type");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << extras.size()); ++mask) {
        std::vector<NDTriple> args = d.args;
        for (std::size_t i = 0; i < extras.size(); ++i) {
          if (mask >> i & 1) args.push_back(extras[i]);
        }
        for (TypeId r : results) out.push_back(types_->arrow(d.sort, args, r));
      }
    }
    return instances_.emplace(p, std::move(out)).first->second;
  }

  // Clipped concrete triples derivable for the argument node l.
  std::set<NDTriple> achievable(NodeId l) {
    const int order = flat_[l].term.sort().order();
    std::set<NDTriple> out;
    for (const Entry& e : tables_[l].entries) {
      const NDTriple c = clip(e.judgment.triple, order);
      for (TypeId t : instances(c.type)) out.insert({c.zone, c.productivity, t});
    }
    return out;
  }

  void analyze(NodeId n, const Demand& demand) {
    switch (flat_[n].kind) {
      case TermKind::constant:
        return analyze_constant(n);
      case TermKind::variable:
        return analyze_variable(n, demand);
      case TermKind::lambda:
        return analyze_lambda(n, demand);
      case TermKind::application:
        return analyze_application(n, demand);
    }
  }

  void analyze_constant(NodeId n) {
    const FlatNode& node = flat_[n];
    const std::vector<Sort> args = node.term.sort().arguments();
    const bool productive = node.term.name() == "a";
    const NDTriple ground{0, 0, types_->atom()};
    for (int z = 0; z <= m_; ++z) {
      const auto f = static_cast<std::uint8_t>(productive ? std::min(z + 1, m_) : 0);
      Way w;
      if (productive) w.khi = static_cast<std::uint8_t>(z + 1);
      const std::size_t rules = std::max<std::size_t>(1, args.size());
      for (std::size_t used = 0; used < rules; ++used) {
        TypeId t = types_->atom();
        Sort s;
        for (std::size_t i = args.size(); i-- > 0;) {
          s = Sort::arrow(args[i], s);
          t = types_->arrow(s, i == used ? std::vector<NDTriple>{ground} : std::vector<NDTriple>{}, t);
        }
        add(n, {Envs::empty(), {static_cast<std::uint8_t>(z), f, t}}, w);
      }
    }
  }

  std::vector<TypeId> head_types(const Sort& s, const Demand& demand, std::size_t idx) {
    if (idx == demand.head_args.size()) {
      if (demand.types) return {demand.types->begin(), demand.types->end()};
      return types_->all_of(s, caps_.max_types);
    }
    const std::vector<TypeId> results = head_types(s.result(), demand, idx + 1);
    const auto& items = demand.head_args[idx];
    check_subsets(items.size(), results.size(), caps_.max_types, "head variable type space of sort " + s.str());
    std::vector<TypeId> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
      std::vector<NDTriple> chosen;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (mask >> i & 1) chosen.push_back(items[i]);
      }
      for (TypeId r : results) out.push_back(types_->arrow(s, chosen, r));
    }
    return out;
  }

  void analyze_variable(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    const Sort& sort = node.term.sort();
    const int order = sort.order();
    if (auto it = allowed_.find(node.var); it != allowed_.end()) {
      // The binder's argument is known, so its bindings are exactly the
      // triples that argument can supply.
      for (const NDTriple& bound : *it->second) {
        const EnvId env = envs_.intern({Binding<NDTriple>{node.var, bound}});
        for (int z = 0; z <= m_; ++z) {
          if (z == bound.zone || (bound.zone == order && z >= bound.zone)) {
            add(n, {env, {static_cast<std::uint8_t>(z), bound.productivity, bound.type}}, Way{});
          }
        }
      }
      return;
    }
    std::vector<TypeId> candidates;
    if (!demand.head_args.empty()) {
      candidates = head_types(sort, demand, 0);
    } else if (demand.types) {
      candidates.assign(demand.types->begin(), demand.types->end());
    } else {
      candidates = types_->all_of(sort, caps_.max_types);
    }
    for (TypeId t : candidates) {
      for (int zx = 0; zx <= order; ++zx) {
        for (int fx = 0; fx <= std::min(order, zx + 1); ++fx) {
          const NDTriple bound{static_cast<std::uint8_t>(zx), static_cast<std::uint8_t>(fx), t};
          const EnvId env = envs_.intern({Binding<NDTriple>{node.var, bound}});
          for (int z = 0; z <= m_; ++z) {
            if (z == zx || (zx == order && z >= zx)) {
              add(n, {env, {static_cast<std::uint8_t>(z), bound.productivity, t}}, Way{});
            }
          }
        }
      }
    }
  }

  void analyze_lambda(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    Demand db;
    if (!demand.binders.empty()) {
      allowed_.emplace(node.var, demand.binders.front());
      db.binders.assign(demand.binders.begin() + 1, demand.binders.end());
    }
    analyze(node.first, db);
    const bool weakening = !node.term.binder_sort().is_base();
    const Table& body = tables_[node.first];
    for (std::uint32_t e = 0; e < body.entries.size(); ++e) {
      const Judgment j = body.entries[e].judgment;
      auto [rest, items] = envs_.extract(j.env, node.var);
      const TypeId t = types_->arrow(node.term.sort(), std::move(items), j.triple.type, weakening);
      Way w;
      w.body = e;
      add(n, {rest, {j.triple.zone, j.triple.productivity, t}}, w);
    }
  }

  void analyze_application(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    const NodeId k = node.first;
    const NodeId l = node.second;
    if (flat_[flat_.head(n)].kind == TermKind::variable) {
      analyze(l, {});
      const std::set<NDTriple> items = achievable(l);
      Demand dk;
      dk.types = demand.types;
      dk.head_args.emplace_back(items.begin(), items.end());
      dk.head_args.insert(dk.head_args.end(), demand.head_args.begin(), demand.head_args.end());
      analyze(k, dk);
    } else if (flat_[l].kind != TermKind::variable || allowed_.count(flat_[l].var)) {
      // Analyze the argument first and pass what it can supply down the
      // operator spine, where it bounds the matching binder.
      analyze(l, {});
      const std::set<NDTriple>& items = supplies_.emplace_back(achievable(l));
      Demand dk;
      dk.binders.push_back(&items);
      dk.binders.insert(dk.binders.end(), demand.binders.begin(), demand.binders.end());
      analyze(k, dk);
    } else {
      analyze(k, {});
      std::set<TypeId> wanted;
      bool open = false;
      for (const Entry& e : tables_[k].entries) {
        const auto& d = (*types_)[e.judgment.triple.type];
        open = open || d.open;
        for (const NDTriple& item : d.args) wanted.insert(item.type);
      }
      if (open) {
        for (const NDTriple& t : balanced_triples(flat_[l].term.sort())) wanted.insert(t.type);
      }
      Demand dl;
      dl.types = &wanted;
      analyze(l, dl);
    }
    combine(n);
  }

  // Bit F set when a premise satisfies ord(L) ≤ Z_i < F_i; whether F_i ≤ Z
  // holds is decided once Z is final.
  static std::uint8_t candidate_bit(const NDTriple& t, int order) {
    return order <= t.zone && t.zone < t.productivity ? static_cast<std::uint8_t>(1u << t.productivity) : 0;
  }

  std::uint32_t new_partial(NodeId app, std::uint32_t function) {
    partials_.push_back({app, function, {}});
    count_way_budget();
    return static_cast<std::uint32_t>(partials_.size() - 1);
  }

  void combine(NodeId n) {
    const FlatNode& node = flat_[n];
    const NodeId k = node.first;
    const NodeId l = node.second;
    const int order = flat_[l].term.sort().order();
    const std::size_t n_k = tables_[k].entries.size();
    const std::size_t n_l = tables_[l].entries.size();

    std::vector<std::uint32_t> l_masks(n_l);
    std::map<std::pair<std::uint8_t, std::uint8_t>, std::vector<std::uint32_t>> by_clip;
    for (std::uint32_t e = 0; e < n_l; ++e) {
      const NDTriple t = tables_[l].entries[e].judgment.triple;
      l_masks[e] = unbalanced_mask(t);
      const NDTriple c = clip(t, order);
      by_clip[{c.zone, c.productivity}].push_back(e);
    }
    std::optional<std::vector<NDTriple>> balanced_items;
    std::map<NDTriple, std::vector<std::uint32_t>> options_memo;
    auto options_for = [&](const NDTriple& el) -> const std::vector<std::uint32_t>& {
      auto [it, inserted] = options_memo.try_emplace(el);
      if (inserted) {
        auto bc = by_clip.find({el.zone, el.productivity});
        if (bc != by_clip.end()) {
          for (std::uint32_t le : bc->second) {
            if (types_->matches(tables_[l].entries[le].judgment.triple.type, el.type)) it->second.push_back(le);
          }
        }
      }
      return it->second;
    };

    for (std::uint32_t ke = 0; ke < n_k; ++ke) {
      const Judgment kj = tables_[k].entries[ke].judgment;
      const auto data = (*types_)[kj.triple.type];

      // Elements to decide, in order; the bool marks ignorable ones.
      std::vector<std::pair<NDTriple, bool>> elements;
      bool feasible = true;
      for (const NDTriple& el : data.args) {
        elements.push_back({el, false});
        feasible = feasible && !options_for(el).empty();
      }
      if (!feasible) continue;
      if (data.open) {
        if (!balanced_items) {
          balanced_items.emplace();
          for (const NDTriple& t : achievable(l)) {
            if (types_->ignorable(t)) balanced_items->push_back(t);
          }
        }
        for (const NDTriple& t : *balanced_items) {
          if (!std::binary_search(data.args.begin(), data.args.end(), t) && !options_for(t).empty()) {
            elements.push_back({t, true});
          }
        }
      }

      std::map<PartialKey, std::uint32_t> layer;
      layer.emplace(PartialKey{kj.env, kj.triple.zone, kj.triple.productivity,
                               static_cast<std::uint8_t>(unbalanced_mask(kj.triple)),
                               candidate_bit(kj.triple, order)},
                    new_partial(n, ke));
      for (const auto& [el, ignorable] : elements) {
        std::map<PartialKey, std::uint32_t> next;
        auto edge_to = [&](const PartialKey& key, Edge e) {
          auto [it, inserted] = next.try_emplace(key, 0);
          if (inserted) it->second = new_partial(n, kNoIndex);
          partials_[it->second].in.push_back(e);
          count_way_budget();
        };
        for (const auto& [key, pid] : layer) {
          if (ignorable) edge_to(key, Edge{pid, kNoIndex, el});
          for (std::uint32_t le : options_for(el)) {
            if (key.unbalanced & l_masks[le]) continue;  // two premises k-unbalanced for the same k
            const NDTriple& t = tables_[l].entries[le].judgment.triple;
            const PartialKey grown{envs_.join(key.env, tables_[l].entries[le].judgment.env),
                                   std::max(key.zone, t.zone), std::max(key.productivity, t.productivity),
                                   static_cast<std::uint8_t>(key.unbalanced | l_masks[le]),
                                   static_cast<std::uint8_t>(key.candidates | candidate_bit(t, order))};
            edge_to(grown, Edge{pid, le, el});
          }
        }
        layer = std::move(next);
        if (layer.empty()) break;
      }

      for (const auto& [key, pid] : layer) {
        int special = -1;
        for (int f = 0; f <= key.zone; ++f) {
          if (key.candidates >> f & 1) {
            special = f;
            break;
          }
        }
        Way w;
        w.partial = pid;
        int productivity = key.productivity;
        if (special >= 0) {
          productivity = std::min(key.zone + 1, m_);
          w.klo = static_cast<std::uint8_t>(special + 1);
          w.khi = static_cast<std::uint8_t>(key.zone + 1);
        }
        add(n, {key.env, {key.zone, static_cast<std::uint8_t>(productivity), data.result}}, w);
      }
    }
  }


  FlatTerm flat_;
  int m_;
  Caps caps_;
  std::shared_ptr<NDTypes> types_;
  Envs envs_;
  std::vector<Table> tables_;
  std::size_t judgments_ = 0;
  std::size_t ways_ = 0;
  std::vector<Partial> partials_;
  std::vector<std::optional<std::uint64_t>> partial_counts_;
  std::vector<std::optional<std::pair<std::size_t, std::uint64_t>>> partial_best_;
  std::map<NDTriple, std::uint32_t> masks_;
  std::map<Sort, std::vector<NDTriple>> balanced_;
  std::map<TypeId, std::vector<TypeId>> instances_;
  std::deque<std::set<NDTriple>> supplies_;
  std::map<VarId, const std::set<NDTriple>*> allowed_;
  std::map<NodeId, std::map<std::uint32_t, std::uint64_t>> counts_;
  std::map<NodeId, std::map<std::uint32_t, std::pair<std::size_t, std::uint64_t>>> best_;
};

}  // namespace

NDAnalysis derive_nd(const Term& t, int m, const Caps& caps, bool materialize, NDTypes::Weakening weakening) {
  if (m < 0) throw PreconditionError("order bound must be non-negative");
  if (m > caps.max_m) throw CapacityError("order bound " + std::to_string(m) + " exceeds cap " + std::to_string(caps.max_m));
  if (!t.sort().is_base()) throw PreconditionError("term has sort " + t.sort().str() + ", expected o");
  if (!is_closed(t)) throw PreconditionError("term is not closed");
  if (!t.homogeneous()) throw PreconditionError("term is not homogeneous");
  if (t.complexity() > m + 1) {
    throw PreconditionError("complexity " + std::to_string(t.complexity()) + " exceeds m + 1 = " + std::to_string(m + 1));
  }
  if (t.complexity() > caps.max_complexity) {
    throw CapacityError("complexity " + std::to_string(t.complexity()) + " exceeds cap " +
                        std::to_string(caps.max_complexity));
  }
  Engine engine(t, m, caps);
  engine.types()->set_weakening(weakening);
  engine.run();

  NDAnalysis out;
  out.types = engine.types();
  out.m = m;
  out.judgments = engine.judgments();
  out.ways = engine.ways();
  const NodeId root = engine.flat().root();
  const Table& tab = engine.table(root);
  const auto top = static_cast<std::uint8_t>(m);
  auto it = tab.index.find(Judgment{Envs::empty(), {top, top, kAtomType}});
  if (it == tab.index.end()) return out;
  out.derivations = engine.count(root, it->second);
  out.max_value = engine.best(root, it->second);
  if (materialize && caps.max_materialize > 0) {
    std::vector<std::pair<std::uint64_t, NDNode>> found;
    for (auto& node : engine.materialize(root, it->second, kAtomType, caps.max_materialize)) {
      NDDerivation d{out.types, m, node};
      found.emplace_back(nd_value_vector(d).back(), std::move(node));
    }
    // A truncated enumeration may miss every maximal derivation.
    if (found.empty() || std::max_element(found.begin(), found.end(), [](const auto& l, const auto& r) {
                           return l.first < r.first;
                         })->first < *out.max_value) {
      if (found.size() == caps.max_materialize) found.pop_back();
      found.emplace_back(*out.max_value, engine.materialize_best(root, it->second, kAtomType));
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (auto& [value, node] : found) out.materialized.push_back({out.types, m, std::move(node)});
  }
  return out;
}

std::optional<std::uint64_t> max_nd_value(const Term& t, int m, const Caps& caps, NDTypes::Weakening weakening) {
  return derive_nd(t, m, caps, false, weakening).max_value;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

using BindingKey = std::tuple<std::string, std::string, NDTriple>;
using EnvSet = std::set<BindingKey>;

EnvSet env_set(const std::vector<NDBinding>& env) {
  EnvSet out;
  for (const auto& b : env) out.emplace(b.var, b.sort.str(), b.triple);
  return out;
}

class Checker {
 public:
  Checker(NDTypes& types, int m) : types_(types), m_(m) {}

  CheckResult check(const NDNode& d) {
    CheckResult r = check_node(d);
    if (!r) return r;
    for (const auto& c : d.children) {
      r = check(c);
      if (!r) return r;
    }
    return r;
  }

 private:
  CheckResult fail(const NDNode& d, const std::string& why) const {
    return {false, std::string(rule_str(d.rule)) + " node for " + nameless_key(d.subject) + ": " + why};
  }

  bool deep_concrete(TypeId t) const {
    if (t >= types_.size()) return false;
    for (TypeId x = t; !types_.is_atom(x); x = types_[x].result) {
      if (types_[x].open) return false;
      for (const NDTriple& el : types_[x].args) {
        if (!deep_concrete(el.type)) return false;
      }
    }
    return true;
  }

  static bool in_range(const NDTriple& t, int bound) {
    return t.zone <= bound && t.productivity <= bound && t.productivity <= t.zone + 1;
  }

  std::vector<std::uint64_t> zeros() const { return std::vector<std::uint64_t>(static_cast<std::size_t>(m_) + 1, 0); }

  std::vector<std::uint64_t> ones(int lo, int hi) const {
    auto v = zeros();
    for (int k = std::max(lo, 1); k <= hi && k <= m_ + 1; ++k) v[static_cast<std::size_t>(k) - 1] = 1;
    return v;
  }

  CheckResult check_node(const NDNode& d) {
    if (!deep_concrete(d.triple.type)) return fail(d, "type is unknown or not concrete");
    if (types_.sort(d.triple.type) != d.subject.sort()) return fail(d, "type does not refine the subject's sort");
    if (!in_range(d.triple, m_)) return fail(d, "triple outside the triple space for this order bound");
    if (d.kvalues.size() != static_cast<std::size_t>(m_) + 1) return fail(d, "k-value vector must have m + 1 entries");
    for (const auto& b : d.env) {
      if (!deep_concrete(b.triple.type) || types_.sort(b.triple.type) != b.sort) {
        return fail(d, "binding for " + b.var + " has a type of the wrong sort");
      }
      if (!in_range(b.triple, b.sort.order())) return fail(d, "binding for " + b.var + " exceeds the variable's order");
    }
    switch (d.rule) {
      case NDRule::constant:
        return check_constant(d);
      case NDRule::variable:
        return check_variable(d);
      case NDRule::lambda:
        return check_lambda(d);
      case NDRule::application:
        return check_application(d);
    }
    return fail(d, "unknown rule");
  }

  CheckResult check_constant(const NDNode& d) {
    if (!d.subject.is_constant()) return fail(d, "subject is not a constant");
    if (!d.env.empty()) return fail(d, "constant rule has an empty environment");
    if (!d.children.empty()) return fail(d, "constant rule has no premises");
    std::size_t used = 0;
    std::size_t arity = 0;
    for (TypeId t = d.triple.type; !types_.is_atom(t); t = types_[t].result, ++arity) {
      const auto& args = types_[t].args;
      if (args.empty()) continue;
      if (args.size() != 1 || args[0] != NDTriple{0, 0, kAtomType}) {
        return fail(d, "constant arguments take exactly (0,0,o) or nothing");
      }
      ++used;
    }
    if (used != std::min<std::size_t>(arity, 1)) return fail(d, "a constant descends into exactly one argument");
    const bool productive = d.subject.name() == "a";
    const int z = d.triple.zone;
    if (d.triple.productivity != (productive ? std::min(z + 1, m_) : 0)) return fail(d, "wrong productivity order");
    if (d.kvalues != (productive ? ones(1, z + 1) : zeros())) return fail(d, "wrong k-values for constant");
    return {};
  }

  CheckResult check_variable(const NDNode& d) {
    if (!d.subject.is_variable()) return fail(d, "subject is not a variable");
    if (!d.children.empty()) return fail(d, "variable rule has no premises");
    if (d.env.size() != 1) return fail(d, "environment must hold exactly the variable's binding");
    const auto& b = d.env.front();
    if (b.var != d.subject.name() || b.sort != d.subject.sort()) return fail(d, "binding is not for the subject");
    if (b.triple.type != d.triple.type) return fail(d, "type must be taken from the environment");
    if (b.triple.productivity != d.triple.productivity) return fail(d, "productivity order must be taken from the environment");
    const int order = d.subject.sort().order();
    const int zx = b.triple.zone;
    const int z = d.triple.zone;
    if (!(z == zx || (zx == order && z >= zx))) return fail(d, "zone order may only grow from ord(x)");
    if (d.kvalues != zeros()) return fail(d, "variable k-values must be 0");
    return {};
  }

  CheckResult check_lambda(const NDNode& d) {
    if (!d.subject.is_lambda()) return fail(d, "subject is not a lambda");
    if (d.children.size() != 1) return fail(d, "lambda rule has one premise");
    const NDNode& body = d.children.front();
    if (!alpha_equal(body.subject, d.subject.body())) return fail(d, "premise is not about the body");
    if (types_.is_atom(d.triple.type)) return fail(d, "lambda needs an arrow type");
    const std::string& x = d.subject.name();
    for (const auto& b : d.env) {
      if (b.var == x) return fail(d, "bound variable occurs in the conclusion's environment");
    }
    EnvSet rest;
    std::set<NDTriple> used;
    for (const auto& b : body.env) {
      if (b.var == x) {
        if (b.sort != d.subject.binder_sort()) return fail(d, "binding for the bound variable has the wrong sort");
        used.insert(b.triple);
      } else {
        rest.emplace(b.var, b.sort.str(), b.triple);
      }
    }
    if (rest != env_set(d.env)) return fail(d, "environment is not the premise's minus the bound variable");
    const auto& data = types_[d.triple.type];
    const std::set<NDTriple> all(data.args.begin(), data.args.end());
    if (!std::includes(all.begin(), all.end(), used.begin(), used.end())) {
      return fail(d, "premise uses the bound variable at a triple missing from the argument set");
    }
    for (const NDTriple& t : all) {
      if (!used.count(t) && !types_.ignorable(t)) return fail(d, "only balanced triples may be ignored");
    }
    if (data.result != body.triple.type) return fail(d, "result type differs from the body's type");
    if (d.triple.zone != body.triple.zone || d.triple.productivity != body.triple.productivity) {
      return fail(d, "zone and productivity orders differ from the body's");
    }
    if (d.kvalues != zeros()) return fail(d, "lambda k-values must be 0");
    return {};
  }

  CheckResult check_application(const NDNode& d) {
    if (!d.subject.is_application()) return fail(d, "subject is not an application");
    if (d.children.empty()) return fail(d, "application rule needs a function premise");
    const NDNode& fun = d.children.front();
    if (!alpha_equal(fun.subject, d.subject.fun())) return fail(d, "first premise is not about the function");
    if (types_.is_atom(fun.triple.type)) return fail(d, "function premise needs an arrow type");
    const auto& data = types_[fun.triple.type];
    if (data.result != d.triple.type) return fail(d, "result type differs from the function's result");

    const int order = d.subject.arg().sort().order();
    std::set<NDTriple> clipped;
    EnvSet joined = env_set(fun.env);
    int zone = fun.triple.zone;
    for (std::size_t i = 1; i < d.children.size(); ++i) {
      const NDNode& a = d.children[i];
      if (!alpha_equal(a.subject, d.subject.arg())) return fail(d, "argument premise is not about the argument");
      clipped.insert(clip(a.triple, order));
      for (const auto& b : a.env) joined.emplace(b.var, b.sort.str(), b.triple);
      zone = std::max<int>(zone, a.triple.zone);
    }
    if (clipped != std::set<NDTriple>(data.args.begin(), data.args.end())) {
      return fail(d, "clipped argument triples do not form the function's argument set");
    }
    if (joined != env_set(d.env)) return fail(d, "environment is not the union of the premises' environments");
    if (d.triple.zone != zone) return fail(d, "zone order must be the maximum over premises");
    for (int k = 0; k <= m_; ++k) {
      int unbalanced = 0;
      for (const auto& c : d.children) unbalanced += types_.k_unbalanced(c.triple, k) ? 1 : 0;
      if (unbalanced > 1) return fail(d, std::to_string(unbalanced) + " premises are " + std::to_string(k) + "-unbalanced");
    }
    int special = -1;
    int productivity = 0;
    for (const auto& c : d.children) {
      const NDTriple& t = c.triple;
      productivity = std::max<int>(productivity, t.productivity);
      if (order <= t.zone && t.zone < t.productivity && t.productivity <= zone) {
        if (special < 0 || t.productivity < special) special = t.productivity;
      }
    }
    if (special >= 0) {
      if (d.triple.productivity != std::min(zone + 1, m_)) return fail(d, "productivity order should be min(Z+1, m)");
      if (d.kvalues != ones(special + 1, zone + 1)) return fail(d, "k-values do not match the productive premise");
    } else {
      if (d.triple.productivity != productivity) return fail(d, "productivity order should be the maximum over premises");
      if (d.kvalues != zeros()) return fail(d, "k-values must be 0");
    }
    return {};
  }

  NDTypes& types_;
  int m_;
};

}  // namespace

CheckResult check_nd(const NDDerivation& d) {
  if (!d.types) return {false, "derivation has no type arena"};
  if (d.m < 0) return {false, "negative order bound"};
  return Checker(*d.types, d.m).check(d.root);
}

}  // namespace lq
