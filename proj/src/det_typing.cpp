#include "lq/det_typing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
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

std::string item_str(const DetTypes& types, const DetItem& item) {
  return std::string("(") + flag_str(item.flag) + "," + types.str(item.type) + ")";
}

}  // namespace

const std::vector<TypeId>& DetTypes::all_of(const Sort& s, std::size_t cap) {
  if (auto it = spaces_.find(s); it != spaces_.end()) return it->second;
  std::vector<TypeId> out;
  if (s.is_base()) {
    out.push_back(atom());
  } else {
    const std::vector<TypeId> arg_types = all_of(s.argument(), cap);
    const std::vector<TypeId> results = all_of(s.result(), cap);
    const std::size_t n_items = 2 * arg_types.size();
    if (n_items >= 63 || (std::uint64_t{1} << n_items) > cap / results.size()) {
      throw CapacityError("type space of sort " + s.str() + " exceeds cap " + std::to_string(cap));
    }
    std::vector<DetItem> items;
    for (TypeId t : arg_types) {
      items.push_back({Flag::np, t});
      items.push_back({Flag::pr, t});
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_items); ++mask) {
      std::vector<DetItem> chosen;
      for (std::size_t i = 0; i < n_items; ++i) {
        if (mask >> i & 1) chosen.push_back(items[i]);
      }
      for (TypeId r : results) out.push_back(arrow(s, chosen, r));
    }
  }
  return spaces_.emplace(s, std::move(out)).first->second;
}

std::string DetTypes::str(TypeId id) const {
  if (is_atom(id)) return "r";
  const auto& d = (*this)[id];
  std::string args;
  if (d.args.empty()) {
    args = "T";
  } else {
    for (std::size_t i = 0; i < d.args.size(); ++i) {
      if (i) args += " & ";
      args += item_str(*this, d.args[i]);
    }
  }
  return args + " -> " + str(d.result);
}

std::vector<TypeId> det_types_of(const Sort& s, DetTypes& types, std::size_t cap) { return types.all_of(s, cap); }

const char* rule_str(DetRule r) {
  switch (r) {
    case DetRule::constant:
      return "const";
    case DetRule::variable:
      return "var";
    case DetRule::lambda:
      return "lambda";
    case DetRule::application:
      return "app";
  }
  return "?";
}

std::uint64_t derivation_value(const DetNode& d) {
  std::uint64_t v = d.value;
  for (const auto& c : d.children) v += derivation_value(c);
  return v;
}

// ---------------------------------------------------------------------------
// Derivation search
// ---------------------------------------------------------------------------

namespace {

using detail::FlatTerm;
using detail::NodeId;
using Envs = EnvArena<DetItem>;

struct Judgment {
  EnvId env;
  Flag flag;
  TypeId type;
  friend auto operator<=>(const Judgment&, const Judgment&) = default;
};

struct Way {
  std::uint32_t value;
  std::vector<std::uint32_t> children;
};

struct Entry {
  Judgment judgment;
  std::vector<Way> ways;
};

struct Table {
  std::vector<Entry> entries;
  std::map<Judgment, std::uint32_t> index;
};

struct Demand {
  // Acceptable types for a variable occurrence; null means all of its sort.
  const std::set<TypeId>* types = nullptr;
  // For the head of an application spine: achievable argument items per
  // argument position, first argument first.
  std::vector<std::vector<DetItem>> head_args;
  // For a term in operator position: the items each pending argument can
  // supply, outermost application last. A lambda consumes the first entry.
  std::vector<const std::set<DetItem>*> binders;
};

class Engine {
 public:
  Engine(const Term& t, const Caps& caps)
      : flat_(t), caps_(caps), types_(std::make_shared<DetTypes>()), tables_(flat_.size()) {}

  void run() { analyze(flat_.root(), {}); }

  const FlatTerm& flat() const { return flat_; }
  const Table& table(NodeId n) const { return tables_[n]; }
  std::shared_ptr<DetTypes> types() const { return types_; }
  std::size_t judgments() const { return judgments_; }
  std::size_t ways() const { return ways_; }

  std::uint64_t count(NodeId n, std::uint32_t e) {
    auto& memo = counts_[n];
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    for (const Way& w : tables_[n].entries[e].ways) {
      std::uint64_t c = 1;
      for (std::size_t i = 0; i < w.children.size(); ++i) c = sat_mul(c, count(child_node(n, i), w.children[i]));
      total = sat_add(total, c);
    }
    memo.emplace(e, total);
    return total;
  }

  const std::map<std::uint64_t, std::uint64_t>& values(NodeId n, std::uint32_t e) {
    auto& memo = values_[n];
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    std::map<std::uint64_t, std::uint64_t> total;
    for (const Way& w : tables_[n].entries[e].ways) {
      std::map<std::uint64_t, std::uint64_t> acc{{w.value, 1}};
      for (std::size_t i = 0; i < w.children.size(); ++i) {
        const auto& sub = values(child_node(n, i), w.children[i]);
        std::map<std::uint64_t, std::uint64_t> next;
        for (const auto& [va, ca] : acc) {
          for (const auto& [vb, cb] : sub) next[va + vb] = sat_add(next[va + vb], sat_mul(ca, cb));
        }
        acc = std::move(next);
      }
      for (const auto& [v, c] : acc) total[v] = sat_add(total[v], c);
    }
    return memo.emplace(e, std::move(total)).first->second;
  }

  std::vector<DetNode> materialize(NodeId n, std::uint32_t e, std::size_t limit) {
    std::vector<DetNode> out;
    const FlatNode& node = flat_[n];
    const Entry& entry = tables_[n].entries[e];
    DetNode base{rule_of(node.kind), node.term, bindings(entry.judgment.env), entry.judgment.flag,
                 entry.judgment.type, 0, {}};
    for (const Way& w : entry.ways) {
      if (out.size() >= limit) break;
      std::vector<std::vector<DetNode>> options;
      for (std::size_t i = 0; i < w.children.size(); ++i) {
        options.push_back(materialize(child_node(n, i), w.children[i], limit));
      }
      std::vector<std::size_t> pick(options.size(), 0);
      for (;;) {
        if (out.size() >= limit) break;
        DetNode d = base;
        d.value = w.value;
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
    return out;
  }

 private:
  using FlatNode = detail::FlatNode;

  static DetRule rule_of(TermKind k) {
    switch (k) {
      case TermKind::constant:
        return DetRule::constant;
      case TermKind::variable:
        return DetRule::variable;
      case TermKind::lambda:
        return DetRule::lambda;
      case TermKind::application:
        return DetRule::application;
    }
    return DetRule::constant;
  }

  NodeId child_node(NodeId n, std::size_t i) const {
    const FlatNode& node = flat_[n];
    return i == 0 ? node.first : node.second;
  }

  std::vector<DetBinding> bindings(EnvId env) const {
    std::vector<DetBinding> out;
    for (const auto& b : envs_[env]) {
      const auto& v = flat_.var(b.var);
      out.push_back({v.name, v.sort, b.item.flag, b.item.type});
    }
    return out;
  }

  std::uint32_t pr_count(EnvId env) {
    if (env >= pr_counts_.size()) pr_counts_.resize(envs_.size(), kUnknown);
    auto& slot = pr_counts_[env];
    if (slot == kUnknown) {
      slot = 0;
      for (const auto& b : envs_[env]) slot += b.item.flag == Flag::pr ? 1 : 0;
    }
    return slot;
  }

  Flag link_flag(const Judgment& j) { return j.flag == Flag::pr || pr_count(j.env) > 0 ? Flag::pr : Flag::np; }

  void add(NodeId n, const Judgment& j, Way w) {
    Table& tab = tables_[n];
    auto [it, inserted] = tab.index.try_emplace(j, static_cast<std::uint32_t>(tab.entries.size()));
    if (inserted) {
      tab.entries.push_back({j, {}});
      if (++judgments_ > caps_.max_judgments) {
        throw CapacityError("more than " + std::to_string(caps_.max_judgments) + " judgments");
      }
    }
    tab.entries[it->second].ways.push_back(std::move(w));
    if (++ways_ > caps_.max_ways) throw CapacityError("more than " + std::to_string(caps_.max_ways) + " rule instances");
  }

  void analyze(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    switch (node.kind) {
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

  std::set<DetItem> achievable(NodeId l) {
    std::set<DetItem> out;
    for (const Entry& e : tables_[l].entries) out.insert({link_flag(e.judgment), e.judgment.type});
    return out;
  }

  void analyze_constant(NodeId n) {
    const FlatNode& node = flat_[n];
    const std::vector<Sort> args = node.term.sort().arguments();
    const bool productive = node.term.name() == "a";
    for (std::uint32_t mask = 0; mask < (1u << args.size()); ++mask) {
      TypeId t = types_->atom();
      Sort s;
      for (std::size_t i = args.size(); i-- > 0;) {
        s = Sort::arrow(args[i], s);
        const Flag f = (mask >> i & 1) ? Flag::pr : Flag::np;
        t = types_->arrow(s, {DetItem{f, types_->atom()}}, t);
      }
      add(n, {Envs::empty(), productive ? Flag::pr : Flag::np, t}, {productive ? 1u : 0u, {}});
    }
  }

  std::vector<TypeId> head_types(const Sort& s, const Demand& demand, std::size_t idx) {
    if (idx == demand.head_args.size()) {
      if (demand.types) return {demand.types->begin(), demand.types->end()};
      return types_->all_of(s, caps_.max_types);
    }
    const std::vector<TypeId> results = head_types(s.result(), demand, idx + 1);
    const auto& items = demand.head_args[idx];
    if (items.size() >= 63 || (std::uint64_t{1} << items.size()) > caps_.max_types / std::max<std::size_t>(1, results.size())) {
      throw CapacityError("head variable type space of sort " + s.str() + " exceeds cap");
    }
    std::vector<TypeId> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
      std::vector<DetItem> chosen;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (mask >> i & 1) chosen.push_back(items[i]);
      }
      for (TypeId r : results) out.push_back(types_->arrow(s, chosen, r));
    }
    return out;
  }

  void analyze_variable(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    if (auto it = allowed_.find(node.var); it != allowed_.end()) {
      for (const DetItem& item : *it->second) {
        add(n, {envs_.intern({Binding<DetItem>{node.var, item}}), Flag::np, item.type}, {0, {}});
      }
      return;
    }
    std::vector<TypeId> candidates;
    if (!demand.head_args.empty()) {
      candidates = head_types(node.term.sort(), demand, 0);
    } else if (demand.types) {
      candidates.assign(demand.types->begin(), demand.types->end());
    } else {
      candidates = types_->all_of(node.term.sort(), caps_.max_types);
    }
    for (TypeId t : candidates) {
      for (Flag f : {Flag::np, Flag::pr}) {
        const EnvId env = envs_.intern({Binding<DetItem>{node.var, DetItem{f, t}}});
        add(n, {env, Flag::np, t}, {0, {}});
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
    const Table& body = tables_[node.first];
    for (std::uint32_t e = 0; e < body.entries.size(); ++e) {
      const Judgment j = body.entries[e].judgment;
      auto [rest, items] = envs_.extract(j.env, node.var);
      const TypeId t = types_->arrow(node.term.sort(), std::move(items), j.type);
      add(n, {rest, j.flag, t}, {0, {e}});
    }
  }

  void analyze_application(NodeId n, const Demand& demand) {
    const FlatNode& node = flat_[n];
    const NodeId k = node.first;
    const NodeId l = node.second;
    if (flat_[flat_.head(n)].kind == TermKind::variable) {
      analyze(l, {});
      const std::set<DetItem> items = achievable(l);
      Demand dk;
      dk.types = demand.types;
      dk.head_args.emplace_back(items.begin(), items.end());
      dk.head_args.insert(dk.head_args.end(), demand.head_args.begin(), demand.head_args.end());
      analyze(k, dk);
    } else if (flat_[l].kind != TermKind::variable || allowed_.count(flat_[l].var)) {
      // Analyze the argument first; what it can supply bounds the bindings
      // of the matching binder on the operator spine.
      analyze(l, {});
      Demand dk;
      dk.binders.push_back(&supplies_.emplace_back(achievable(l)));
      dk.binders.insert(dk.binders.end(), demand.binders.begin(), demand.binders.end());
      analyze(k, dk);
    } else {
      analyze(k, {});
      std::set<TypeId> wanted;
      for (const Entry& e : tables_[k].entries) {
        for (const DetItem& item : (*types_)[e.judgment.type].args) wanted.insert(item.type);
      }
      Demand dl;
      dl.types = &wanted;
      analyze(l, dl);
    }
    combine(n);
  }

  void combine(NodeId n) {
    const FlatNode& node = flat_[n];
    const Table& kt = tables_[node.first];
    const Table& lt = tables_[node.second];
    std::map<DetItem, std::vector<std::uint32_t>> by_item;
    for (std::uint32_t e = 0; e < lt.entries.size(); ++e) {
      const Judgment& j = lt.entries[e].judgment;
      by_item[{link_flag(j), j.type}].push_back(e);
    }
    // kt is not modified below (entries are added to node n only).
    for (std::uint32_t ke = 0; ke < kt.entries.size(); ++ke) {
      const Judgment kj = kt.entries[ke].judgment;
      const auto& data = (*types_)[kj.type];
      std::vector<const std::vector<std::uint32_t>*> options;
      bool feasible = true;
      for (const DetItem& item : data.args) {
        auto it = by_item.find(item);
        if (it == by_item.end()) {
          feasible = false;
          break;
        }
        options.push_back(&it->second);
      }
      if (!feasible) continue;
      const TypeId result = data.result;
      std::vector<std::size_t> pick(options.size(), 0);
      for (;;) {
        EnvId env = kj.env;
        std::uint32_t separate = pr_count(kj.env);
        bool argument_productive = false;
        Way w{0, {ke}};
        for (std::size_t i = 0; i < options.size(); ++i) {
          const std::uint32_t le = (*options[i])[pick[i]];
          const Judgment& lj = lt.entries[le].judgment;
          env = envs_.join(env, lj.env);
          separate += pr_count(lj.env);
          argument_productive = argument_productive || lj.flag == Flag::pr;
          w.children.push_back(le);
        }
        w.value = separate - pr_count(env);
        const bool productive = kj.flag == Flag::pr || argument_productive || w.value > 0;
        add(n, {env, productive ? Flag::pr : Flag::np, result}, std::move(w));
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < options[i]->size()) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    }
  }

  static constexpr std::uint32_t kUnknown = std::numeric_limits<std::uint32_t>::max();

  FlatTerm flat_;
  Caps caps_;
  std::shared_ptr<DetTypes> types_;
  Envs envs_;
  std::vector<Table> tables_;
  std::vector<std::uint32_t> pr_counts_;
  std::size_t judgments_ = 0;
  std::size_t ways_ = 0;
  std::map<NodeId, std::map<std::uint32_t, std::uint64_t>> counts_;
  std::map<NodeId, std::map<std::uint32_t, std::map<std::uint64_t, std::uint64_t>>> values_;
  std::deque<std::set<DetItem>> supplies_;
  std::map<detail::VarId, const std::set<DetItem>*> allowed_;
};

void require_closed_ground(const Term& t, const Caps& caps) {
  if (!t.sort().is_base()) throw PreconditionError("term has sort " + t.sort().str() + ", expected o");
  if (!is_closed(t)) throw PreconditionError("term is not closed");
  if (t.complexity() > caps.max_complexity) {
    throw CapacityError("complexity " + std::to_string(t.complexity()) + " exceeds cap " +
                        std::to_string(caps.max_complexity));
  }
}

}  // namespace

DetAnalysis derive_det(const Term& t, const Caps& caps, bool materialize) {
  require_closed_ground(t, caps);
  Engine engine(t, caps);
  engine.run();
  DetAnalysis out;
  out.types = engine.types();
  out.judgments = engine.judgments();
  out.ways = engine.ways();
  const NodeId root = engine.flat().root();
  const Table& tab = engine.table(root);
  for (std::uint32_t e = 0; e < tab.entries.size(); ++e) {
    const Judgment& j = tab.entries[e].judgment;
    if (j.env != Envs::empty() || j.type != kAtomType) continue;
    DetRoot r;
    r.flag = j.flag;
    r.derivations = engine.count(root, e);
    r.values = engine.values(root, e);
    if (materialize) {
      for (auto& node : engine.materialize(root, e, caps.max_materialize)) {
        r.materialized.push_back(DetDerivation{out.types, std::move(node)});
      }
    }
    out.roots.push_back(std::move(r));
  }
  return out;
}

FlagValue det_value_and_flag(const Term& t, const Caps& caps) {
  const DetAnalysis a = derive_det(t, caps, false);
  std::uint64_t total = 0;
  for (const auto& r : a.roots) total = sat_add(total, r.derivations);
  if (total == 0) throw UniquenessViolation("no derivation of |- M : (f, r)");
  if (total > 1) {
    throw UniquenessViolation(std::to_string(total) + " derivations of |- M : (f, r) over " +
                              std::to_string(a.roots.size()) + " root judgment(s)");
  }
  const DetRoot& r = a.roots.front();
  return {r.flag, r.values.begin()->first};
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

using BindingKey = std::tuple<std::string, std::string, Flag, TypeId>;
using EnvSet = std::set<BindingKey>;

EnvSet env_set(const std::vector<DetBinding>& env) {
  EnvSet out;
  for (const auto& b : env) out.emplace(b.var, b.sort.str(), b.flag, b.type);
  return out;
}

std::size_t pr_size(const EnvSet& env) {
  std::size_t n = 0;
  for (const auto& b : env) n += std::get<2>(b) == Flag::pr ? 1 : 0;
  return n;
}

class Checker {
 public:
  explicit Checker(const DetTypes& types) : types_(types) {}

  CheckResult check(const DetNode& d) {
    CheckResult r = check_node(d);
    if (!r) return r;
    for (const auto& c : d.children) {
      r = check(c);
      if (!r) return r;
    }
    return r;
  }

 private:
  CheckResult fail(const DetNode& d, const std::string& why) const {
    return {false, std::string(rule_str(d.rule)) + " node for " + print_subject(d) + ": " + why};
  }

  static std::string print_subject(const DetNode& d) { return nameless_key(d.subject); }

  bool valid_type(TypeId t) const { return t < types_.size(); }

  CheckResult check_node(const DetNode& d) {
    if (!valid_type(d.type)) return fail(d, "unknown type id");
    if (types_.sort(d.type) != d.subject.sort()) return fail(d, "type does not refine the subject's sort");
    for (const auto& b : d.env) {
      if (!valid_type(b.type) || types_.sort(b.type) != b.sort) {
        return fail(d, "binding for " + b.var + " has a type of the wrong sort");
      }
    }
    switch (d.rule) {
      case DetRule::constant:
        return check_constant(d);
      case DetRule::variable:
        return check_variable(d);
      case DetRule::lambda:
        return check_lambda(d);
      case DetRule::application:
        return check_application(d);
    }
    return fail(d, "unknown rule");
  }

  CheckResult check_constant(const DetNode& d) {
    if (!d.subject.is_constant()) return fail(d, "subject is not a constant");
    if (!d.env.empty()) return fail(d, "constant rule has an empty environment");
    if (!d.children.empty()) return fail(d, "constant rule has no premises");
    TypeId t = d.type;
    while (!types_.is_atom(t)) {
      const auto& data = types_[t];
      if (data.args.size() != 1 || !types_.is_atom(data.args[0].type)) {
        return fail(d, "constant arguments must be used exactly once at type r");
      }
      t = data.result;
    }
    const bool productive = d.subject.name() == "a";
    if (d.flag != (productive ? Flag::pr : Flag::np)) return fail(d, "wrong productivity flag for constant");
    if (d.value != (productive ? 1u : 0u)) return fail(d, "wrong node value for constant");
    return {};
  }

  CheckResult check_variable(const DetNode& d) {
    if (!d.subject.is_variable()) return fail(d, "subject is not a variable");
    if (!d.children.empty()) return fail(d, "variable rule has no premises");
    if (d.env.size() != 1) return fail(d, "environment must hold exactly the variable's binding");
    const auto& b = d.env.front();
    if (b.var != d.subject.name() || b.sort != d.subject.sort()) return fail(d, "binding is not for the subject");
    if (b.type != d.type) return fail(d, "type must be taken from the environment");
    if (d.flag != Flag::np) return fail(d, "the flag of a variable is always np");
    if (d.value != 0) return fail(d, "variable node value must be 0");
    return {};
  }

  CheckResult check_lambda(const DetNode& d) {
    if (!d.subject.is_lambda()) return fail(d, "subject is not a lambda");
    if (d.children.size() != 1) return fail(d, "lambda rule has one premise");
    const DetNode& body = d.children.front();
    if (!alpha_equal(body.subject, d.subject.body())) return fail(d, "premise is not about the body");
    if (types_.is_atom(d.type)) return fail(d, "lambda needs an arrow type");
    const std::string& x = d.subject.name();
    for (const auto& b : d.env) {
      if (b.var == x) return fail(d, "bound variable occurs in the conclusion's environment");
    }
    EnvSet rest;
    std::set<DetItem> bound;
    for (const auto& b : body.env) {
      if (b.var == x) {
        if (b.sort != d.subject.binder_sort()) return fail(d, "binding for the bound variable has the wrong sort");
        bound.insert({b.flag, b.type});
      } else {
        rest.emplace(b.var, b.sort.str(), b.flag, b.type);
      }
    }
    if (rest != env_set(d.env)) return fail(d, "environment is not the premise's minus the bound variable");
    const auto& data = types_[d.type];
    if (std::set<DetItem>(data.args.begin(), data.args.end()) != bound) {
      return fail(d, "argument set differs from the bindings of the bound variable");
    }
    if (data.result != body.type) return fail(d, "result type differs from the body's type");
    if (d.flag != body.flag) return fail(d, "flag differs from the body's flag");
    if (d.value != 0) return fail(d, "lambda node value must be 0");
    return {};
  }

  CheckResult check_application(const DetNode& d) {
    if (!d.subject.is_application()) return fail(d, "subject is not an application");
    if (d.children.empty()) return fail(d, "application rule needs a function premise");
    const DetNode& fun = d.children.front();
    if (!alpha_equal(fun.subject, d.subject.fun())) return fail(d, "first premise is not about the function");
    if (types_.is_atom(fun.type)) return fail(d, "function premise needs an arrow type");
    const auto& data = types_[fun.type];
    if (data.result != d.type) return fail(d, "result type differs from the function's result");

    std::multiset<DetItem> provided;
    EnvSet joined = env_set(fun.env);
    std::size_t separate = pr_size(joined);
    bool argument_productive = false;
    for (std::size_t i = 1; i < d.children.size(); ++i) {
      const DetNode& a = d.children[i];
      if (!alpha_equal(a.subject, d.subject.arg())) return fail(d, "argument premise is not about the argument");
      const EnvSet env = env_set(a.env);
      const Flag linked = a.flag == Flag::pr || pr_size(env) > 0 ? Flag::pr : Flag::np;
      provided.insert({linked, a.type});
      separate += pr_size(env);
      joined.insert(env.begin(), env.end());
      argument_productive = argument_productive || a.flag == Flag::pr;
    }
    if (provided != std::multiset<DetItem>(data.args.begin(), data.args.end())) {
      return fail(d, "argument premises do not match the argument set one-to-one (with flag linkage)");
    }
    if (joined != env_set(d.env)) return fail(d, "environment is not the union of the premises' environments");
    const std::size_t value = separate - pr_size(joined);
    if (d.value != value) return fail(d, "node value should be " + std::to_string(value));
    const bool productive = fun.flag == Flag::pr || argument_productive || value > 0;
    if (d.flag != (productive ? Flag::pr : Flag::np)) return fail(d, "productivity flag condition violated");
    return {};
  }

  const DetTypes& types_;
};

}  // namespace

CheckResult check_det(const DetDerivation& d) {
  if (!d.types) return {false, "derivation has no type arena"};
  return Checker(*d.types).check(d.root);
}

}  // namespace lq
