#include "lq/reduction.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lq/errors.hpp"

namespace lq {

std::string path_str(const Path& p) {
  if (p.empty()) return "/";
  std::string out;
  for (Selector s : p) {
    out += '/';
    out += static_cast<char>(s);
  }
  return out;
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (Selector s : p) {
    switch (s) {
      case Selector::fun:
        if (!cur->is_application()) throw std::out_of_range("path " + path_str(p) + ": not an application");
        cur = &cur->fun();
        break;
      case Selector::arg:
        if (!cur->is_application()) throw std::out_of_range("path " + path_str(p) + ": not an application");
        cur = &cur->arg();
        break;
      case Selector::body:
        if (!cur->is_lambda()) throw std::out_of_range("path " + path_str(p) + ": not a lambda");
        cur = &cur->body();
        break;
    }
  }
  return *cur;
}

int redex_order(const Term& redex) { return redex.fun().sort().order(); }

namespace {

std::string fresh_name(const std::string& base, const std::map<std::string, Sort>& avoid_a,
                       const std::map<std::string, Sort>& avoid_b, const std::string& avoid_c) {
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid_a.count(candidate) && !avoid_b.count(candidate) && candidate != avoid_c) return candidate;
  }
}

class Substitution {
 public:
  Substitution(const std::string& name, const Term& value)
      : name_(name), value_(value), value_free_(free_vars(value)) {}

  // nullopt means "unchanged".
  std::optional<Term> apply(const Term& t) {
    switch (t.kind()) {
      case TermKind::constant:
        return std::nullopt;
      case TermKind::variable:
        if (t.name() != name_) return std::nullopt;
        if (t.sort() != value_.sort()) {
          throw SortError("substituting " + value_.sort().str() + " for variable " + name_ + " of sort " +
                          t.sort().str());
        }
        return value_;
      case TermKind::application: {
        auto f = apply(t.fun());
        auto a = apply(t.arg());
        if (!f && !a) return std::nullopt;
        return Term::apply(f ? *f : t.fun(), a ? *a : t.arg());
      }
      case TermKind::lambda: {
        if (t.name() == name_) return std::nullopt;
        if (value_free_.count(t.name()) && occurs_free(t.body(), name_)) {
          auto body_free = free_vars(t.body());
          std::string renamed = fresh_name(t.name(), value_free_, body_free, name_);
          Term body = substitute(t.body(), t.name(), Term::variable(renamed, t.binder_sort()));
          auto b = apply(body);
          return Term::lambda(renamed, t.binder_sort(), b ? *b : body);
        }
        auto b = apply(t.body());
        if (!b) return std::nullopt;
        return Term::lambda(t.name(), t.binder_sort(), *b);
      }
    }
    return std::nullopt;
  }

 private:
  const std::string& name_;
  const Term& value_;
  std::map<std::string, Sort> value_free_;
};

void outermost_rec(const Term& t, Path& path, std::vector<Path>& out) {
  if (t.is_redex()) {
    out.push_back(path);
    return;
  }
  if (t.is_lambda()) {
    path.push_back(Selector::body);
    outermost_rec(t.body(), path, out);
    path.pop_back();
  } else if (t.is_application()) {
    path.push_back(Selector::fun);
    outermost_rec(t.fun(), path, out);
    path.back() = Selector::arg;
    outermost_rec(t.arg(), path, out);
    path.pop_back();
  }
}

int max_redex_order(const Term& t) {
  switch (t.kind()) {
    case TermKind::constant:
    case TermKind::variable:
      return -1;
    case TermKind::lambda:
      return max_redex_order(t.body());
    case TermKind::application: {
      int m = std::max(max_redex_order(t.fun()), max_redex_order(t.arg()));
      if (t.is_redex()) m = std::max(m, redex_order(t));
      return m;
    }
  }
  return -1;
}

int selector_rank(Selector s) {
  switch (s) {
    case Selector::fun:
      return 0;
    case Selector::body:
      return 1;
    case Selector::arg:
      return 2;
  }
  return 0;
}

bool path_less(const Path& lhs, const Path& rhs) {
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                      [](Selector a, Selector b) { return selector_rank(a) < selector_rank(b); });
}

void rmf_candidates(const Term& t, int m, bool in_body, Path& path, std::vector<Path>& out) {
  switch (t.kind()) {
    case TermKind::constant:
    case TermKind::variable:
      return;
    case TermKind::lambda:
      path.push_back(Selector::body);
      rmf_candidates(t.body(), m, in_body, path, out);
      path.pop_back();
      return;
    case TermKind::application: {
      const bool order_m = t.is_redex() && redex_order(t) == m;
      if (order_m && !in_body && max_redex_order(t.arg()) < m) out.push_back(path);
      path.push_back(Selector::fun);
      rmf_candidates(t.fun(), m, in_body || order_m, path, out);
      path.back() = Selector::arg;
      rmf_candidates(t.arg(), m, in_body, path, out);
      path.pop_back();
      return;
    }
  }
}

Term replace_at(const Term& t, const Path& p, std::size_t depth, const std::function<Term(const Term&)>& f) {
  if (depth == p.size()) return f(t);
  switch (p[depth]) {
    case Selector::fun:
      return Term::apply(replace_at(t.fun(), p, depth + 1, f), t.arg());
    case Selector::arg:
      return Term::apply(t.fun(), replace_at(t.arg(), p, depth + 1, f));
    case Selector::body:
      return Term::lambda(t.name(), t.binder_sort(), replace_at(t.body(), p, depth + 1, f));
  }
  throw std::logic_error("bad selector");
}

void to_tree_rec(const Term& t, Tree& out) {
  std::vector<const Term*> args;
  const Term* head = &t;
  while (head->is_application()) {
    args.push_back(&head->arg());
    head = &head->fun();
  }
  if (!head->is_constant()) {
    throw PreconditionError("not a ground normal form: found " +
                            std::string(head->is_variable() ? "variable " + head->name() : "a lambda"));
  }
  if (!t.sort().is_base()) throw PreconditionError("not a ground normal form: subterm of sort " + t.sort().str());
  out.label = head->name();
  out.children.resize(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) to_tree_rec(*args[args.size() - 1 - i], out.children[i]);
}

}  // namespace

Term substitute(const Term& body, const std::string& name, const Term& value) {
  Substitution s(name, value);
  auto out = s.apply(body);
  return out ? *out : body;
}

std::vector<Path> outermost_redexes(const Term& t) {
  std::vector<Path> out;
  Path path;
  outermost_rec(t, path, out);
  return out;
}

std::optional<Path> rmf_redex(const Term& t) {
  const int m = max_redex_order(t);
  if (m < 0) return std::nullopt;
  std::vector<Path> candidates;
  Path path;
  rmf_candidates(t, m, false, path, candidates);
  if (candidates.empty()) throw std::logic_error("no RMF candidate in a non-normal term");
  return *std::max_element(candidates.begin(), candidates.end(), path_less);
}

Term step(const Term& t, const Path& p) {
  subterm_at(t, p);
  return replace_at(t, p, 0, [&](const Term& redex) {
    if (!redex.is_redex()) throw std::invalid_argument("path " + path_str(p) + " does not address a redex");
    const Term& lam = redex.fun();
    return substitute(lam.body(), lam.name(), redex.arg());
  });
}

Normalized normalize(const Term& t, Strategy strategy, const NormalizeOptions& options) {
  Normalized out{t, 0, {}};
  for (;;) {
    std::optional<Path> p;
    if (strategy == Strategy::oi) {
      auto all = outermost_redexes(out.normal_form);
      if (!all.empty()) p = std::move(all.front());
    } else {
      p = rmf_redex(out.normal_form);
    }
    if (!p) return out;
    if (out.steps >= options.step_budget) {
      throw CapacityError("step budget of " + std::to_string(options.step_budget) + " exhausted");
    }
    if (options.trace) {
      out.trace.push_back({out.steps + 1, redex_order(subterm_at(out.normal_form, *p)), *p});
    }
    out.normal_form = step(out.normal_form, *p);
    ++out.steps;
  }
}

std::string format_trace(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  for (const auto& e : trace) os << e.step << ' ' << e.order << ' ' << path_str(e.path) << '\n';
  return os.str();
}

Tree to_tree(const Term& t) {
  Tree out;
  to_tree_rec(t, out);
  return out;
}

}  // namespace lq
