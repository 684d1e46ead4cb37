#include "lq/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "lq/errors.hpp"
#include "lq/reduction.hpp"
#include "lq/signature.hpp"
#include "lq/tree.hpp"

namespace lq {

namespace {

struct Bound {
  std::string name;
  Sort sort;
};

// The sort reached from `s` after applying `n` arguments, if s has that many.
bool result_after(const Sort& s, int n, const Sort& target) {
  Sort cur = s;
  for (int i = 0; i < n; ++i) {
    if (cur.is_base()) return false;
    cur = cur.result();
  }
  return cur == target;
}

class Generator {
 public:
  explicit Generator(const CorpusOptions& options) : options_(options), rng_(options.seed) {
    const Sort o;
    const Sort oo = Sort::arrow(o, o);
    binder_sorts_ = {o, oo, Sort::arrow(o, oo), Sort::arrow(oo, o), Sort::arrow(oo, oo)};
  }

  Term next() {
    for (;;) {
      scope_.clear();
      fresh_ = 0;
      const int budget = uniform(3, static_cast<int>(options_.max_size));
      Term t = chance(70) ? redex(Sort(), budget) : term(Sort(), budget);
      if (t.size() <= options_.max_size && t.complexity() <= options_.max_complexity && t.homogeneous() && is_closed(t)) {
        return t;
      }
    }
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng_); }
  bool chance(int percent) { return uniform(1, 100) <= percent; }

  Term term(const Sort& s, int budget) {
    std::vector<std::pair<int, int>> choices;  // (kind, weight)
    enum { kConstant, kVariable, kLambda, kRedex };
    if (has_constant_head(s)) choices.push_back({kConstant, s.is_base() ? 45 : 25});
    if (has_variable_head(s)) choices.push_back({kVariable, 45});
    if (!s.is_base()) choices.push_back({kLambda, 40});
    if (budget >= 4 && !redex_binders(s).empty()) choices.push_back({kRedex, 25});
    if (budget <= 1) {
      // Prefer the cheapest productions near the end of the budget.
      if (s.is_base()) return Term::constant("e", s);
      if (has_variable_head(s) && chance(50)) return variable_head(s, budget);
      return lambda(s, budget);
    }
    int total = 0;
    for (const auto& c : choices) total += c.second;
    int pick = uniform(1, total);
    for (const auto& [kind, weight] : choices) {
      if ((pick -= weight) > 0) continue;
      switch (kind) {
        case kConstant:
          return constant_head(s, budget);
        case kVariable:
          return variable_head(s, budget);
        case kLambda:
          return lambda(s, budget);
        default:
          return redex(s, budget);
      }
    }
    return lambda(s, budget);
  }

  bool has_constant_head(const Sort& s) const {
    for (const auto& c : Signature::standard().constants()) {
      for (int n = 0; n <= c.sort.arity(); ++n) {
        if (result_after(c.sort, n, s)) return true;
      }
    }
    return false;
  }

  bool has_variable_head(const Sort& s) const {
    for (const auto& v : scope_) {
      for (int n = 0; n <= v.sort.arity(); ++n) {
        if (result_after(v.sort, n, s)) return true;
      }
    }
    return false;
  }

  Term apply_head(Term head, int n, int budget) {
    const std::vector<Sort> args = head.sort().arguments();
    const int share = std::max(1, (budget - 1) / std::max(1, n));
    for (int i = 0; i < n; ++i) head = Term::apply(std::move(head), term(args[static_cast<std::size_t>(i)], share));
    return head;
  }

  Term constant_head(const Sort& s, int budget) {
    std::vector<std::pair<const ConstantDecl*, int>> options;
    for (const auto& c : Signature::standard().constants()) {
      for (int n = 0; n <= c.sort.arity(); ++n) {
        if (result_after(c.sort, n, s)) options.push_back({&c, n});
      }
    }
    const auto& [decl, n] = options[static_cast<std::size_t>(uniform(0, static_cast<int>(options.size()) - 1))];
    return apply_head(Term::constant(decl->name, decl->sort), n, budget);
  }

  Term variable_head(const Sort& s, int budget) {
    std::vector<std::pair<const Bound*, int>> options;
    for (const auto& v : scope_) {
      for (int n = 0; n <= v.sort.arity(); ++n) {
        if (result_after(v.sort, n, s)) options.push_back({&v, n});
      }
    }
    // Later binders first: bodies should tend to use their own variable.
    const int hi = static_cast<int>(options.size()) - 1;
    const int idx = chance(60) ? hi : uniform(0, hi);
    const Bound v = *options[static_cast<std::size_t>(idx)].first;
    return apply_head(Term::variable(v.name, v.sort), options[static_cast<std::size_t>(idx)].second, budget);
  }

  Term lambda(const Sort& s, int budget) {
    const Sort binder = s.argument();
    const std::string name = "v" + std::to_string(++fresh_);
    scope_.push_back({name, binder});
    Term body = term(s.result(), budget - 1);
    scope_.pop_back();
    return Term::lambda(name, binder, std::move(body));
  }

  std::vector<Sort> redex_binders(const Sort& s) const {
    std::vector<Sort> out;
    for (const Sort& tau : binder_sorts_) {
      if (!s.is_base() && tau.order() < s.argument().order()) continue;
      if (std::max(1 + tau.order(), s.order()) > options_.max_complexity) continue;
      out.push_back(tau);
    }
    return out;
  }

  Term redex(const Sort& s, int budget) {
    const std::vector<Sort> binders = redex_binders(s);
    if (binders.empty()) return term(s, budget);
    const Sort tau = binders[static_cast<std::size_t>(uniform(0, static_cast<int>(binders.size()) - 1))];
    const std::string name = "v" + std::to_string(++fresh_);
    const int body_budget = std::max(1, (budget - 1) * 3 / 5);
    scope_.push_back({name, tau});
    Term body = term(s, body_budget);
    scope_.pop_back();
    Term arg = term(tau, std::max(1, budget - 1 - body_budget));
    return Term::apply(Term::lambda(name, tau, std::move(body)), std::move(arg));
  }

  CorpusOptions options_;
  std::mt19937_64 rng_;
  std::vector<Sort> binder_sorts_;
  std::vector<Bound> scope_;
  int fresh_ = 0;
};

bool normalizes_within(const Term& t, const CorpusOptions& options) {
  try {
    NormalizeOptions n;
    n.step_budget = options.max_steps;
    const Normalized r = normalize(t, Strategy::rmf, n);
    return r.normal_form.size() <= options.max_normal_form;
  } catch (const CapacityError&) {
    return false;
  }
}

}  // namespace

std::vector<Term> generate_corpus(const CorpusOptions& options) {
  Generator gen(options);
  std::vector<Term> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 200 * options.count + 1000;
  while (out.size() < options.count) {
    if (++attempts > max_attempts) throw CapacityError("corpus generator could not find enough distinct terms");
    Term t = gen.next();
    if (!seen.insert(nameless_key(t)).second) continue;
    if (!normalizes_within(t, options)) continue;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace lq
