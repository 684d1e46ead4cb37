#include "lq/term.hpp"

#include <algorithm>

#include "lq/errors.hpp"

namespace lq {

Term Term::constant(std::string name, Sort sort) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::constant;
  node->name = std::move(name);
  node->complexity = sort.order();
  node->homogeneous = sort.is_homogeneous();
  node->sort = std::move(sort);
  return Term(std::move(node));
}

Term Term::variable(std::string name, Sort sort) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::variable;
  node->name = std::move(name);
  node->complexity = sort.order();
  node->homogeneous = sort.is_homogeneous();
  node->sort = std::move(sort);
  return Term(std::move(node));
}

Term Term::lambda(std::string variable, Sort variable_sort, Term body) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::lambda;
  node->name = std::move(variable);
  node->sort = Sort::arrow(variable_sort, body.sort());
  node->binder_sort = std::move(variable_sort);
  node->complexity = std::max(node->sort.order(), body.complexity());
  node->size = 1 + body.size();
  node->homogeneous = node->sort.is_homogeneous() && body.homogeneous();
  node->first = std::make_unique<Term>(std::move(body));
  return Term(std::move(node));
}

Term Term::apply(Term fun, Term arg) {
  if (fun.sort().is_base()) {
    throw SortError("cannot apply a term of sort o");
  }
  if (fun.sort().argument() != arg.sort()) {
    throw SortError("argument sort mismatch: expected " + fun.sort().argument().str() + ", got " +
                    arg.sort().str());
  }
  auto node = std::make_shared<Node>();
  node->kind = TermKind::application;
  node->sort = fun.sort().result();
  node->complexity = std::max({node->sort.order(), fun.complexity(), arg.complexity()});
  node->size = 1 + fun.size() + arg.size();
  node->homogeneous = node->sort.is_homogeneous() && fun.homogeneous() && arg.homogeneous();
  node->first = std::make_unique<Term>(std::move(fun));
  node->second = std::make_unique<Term>(std::move(arg));
  return Term(std::move(node));
}

Term Term::apply(Term fun, std::initializer_list<Term> args) {
  for (const Term& a : args) fun = apply(std::move(fun), a);
  return fun;
}

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::map<std::string, Sort>& out) {
  switch (t.kind()) {
    case TermKind::constant:
      return;
    case TermKind::variable:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.emplace(t.name(), t.sort());
      return;
    case TermKind::lambda:
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      return;
    case TermKind::application:
      collect_free(t.fun(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
  }
}

bool alpha_equal_rec(const Term& l, const Term& r, std::vector<std::string>& lb, std::vector<std::string>& rb) {
  if (l.kind() != r.kind() || l.sort() != r.sort()) return false;
  switch (l.kind()) {
    case TermKind::constant:
      return l.name() == r.name();
    case TermKind::variable: {
      auto li = std::find(lb.rbegin(), lb.rend(), l.name());
      auto ri = std::find(rb.rbegin(), rb.rend(), r.name());
      const bool lfree = li == lb.rend();
      const bool rfree = ri == rb.rend();
      if (lfree || rfree) return lfree && rfree && l.name() == r.name();
      return std::distance(lb.rbegin(), li) == std::distance(rb.rbegin(), ri);
    }
    case TermKind::lambda: {
      lb.push_back(l.name());
      rb.push_back(r.name());
      const bool eq = alpha_equal_rec(l.body(), r.body(), lb, rb);
      lb.pop_back();
      rb.pop_back();
      return eq;
    }
    case TermKind::application:
      return alpha_equal_rec(l.fun(), r.fun(), lb, rb) && alpha_equal_rec(l.arg(), r.arg(), lb, rb);
  }
  return false;
}

void nameless_rec(const Term& t, std::vector<std::string>& bound, std::string& out) {
  switch (t.kind()) {
    case TermKind::constant:
      out += t.name();
      return;
    case TermKind::variable: {
      auto it = std::find(bound.rbegin(), bound.rend(), t.name());
      if (it == bound.rend()) {
        out += "$" + t.name() + ":" + t.sort().str();
      } else {
        out += "#" + std::to_string(std::distance(bound.rbegin(), it));
      }
      return;
    }
    case TermKind::lambda:
      out += "(\\" + t.binder_sort().str() + ".";
      bound.push_back(t.name());
      nameless_rec(t.body(), bound, out);
      bound.pop_back();
      out += ")";
      return;
    case TermKind::application:
      out += "(";
      nameless_rec(t.fun(), bound, out);
      out += " ";
      nameless_rec(t.arg(), bound, out);
      out += ")";
      return;
  }
}

}  // namespace

std::map<std::string, Sort> free_vars(const Term& t) {
  std::map<std::string, Sort> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const Term& t) { return free_vars(t).empty(); }

bool occurs_free(const Term& t, const std::string& name) { return free_vars(t).count(name) > 0; }

bool alpha_equal(const Term& lhs, const Term& rhs) {
  std::vector<std::string> lb, rb;
  return alpha_equal_rec(lhs, rhs, lb, rb);
}

std::string nameless_key(const Term& t) {
  std::string out;
  std::vector<std::string> bound;
  nameless_rec(t, bound, out);
  return out;
}

std::size_t count_constant(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case TermKind::constant:
      return t.name() == name ? 1 : 0;
    case TermKind::variable:
      return 0;
    case TermKind::lambda:
      return count_constant(t.body(), name);
    case TermKind::application:
      return count_constant(t.fun(), name) + count_constant(t.arg(), name);
  }
  return 0;
}

}  // namespace lq
