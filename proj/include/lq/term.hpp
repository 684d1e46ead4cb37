#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lq/sort.hpp"

namespace lq {

enum class TermKind { constant, variable, lambda, application };

/// An immutable, well-sorted simply typed lambda-term.
///
/// Application checks sorts. Variables are identified by name with the usual
/// lexical scoping; a variable carries its sort, which must agree with its
/// binder (the parser enforces this, programmatic builders must too).
class Term {
 public:
  static Term constant(std::string name, Sort sort);
  static Term variable(std::string name, Sort sort);
  static Term lambda(std::string variable, Sort variable_sort, Term body);
  /// Throws SortError unless fun has sort α→β and arg has sort α.
  static Term apply(Term fun, Term arg);
  static Term apply(Term fun, std::initializer_list<Term> args);

  TermKind kind() const;
  bool is_constant() const { return kind() == TermKind::constant; }
  bool is_variable() const { return kind() == TermKind::variable; }
  bool is_lambda() const { return kind() == TermKind::lambda; }
  bool is_application() const { return kind() == TermKind::application; }
  /// (λx.K) L
  bool is_redex() const { return is_application() && fun().is_lambda(); }

  /// Constant or variable name, or the bound variable of a lambda.
  const std::string& name() const;
  const Sort& sort() const;
  /// Sort of the bound variable of a lambda.
  const Sort& binder_sort() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  /// Maximum order over the sorts of all subterms.
  int complexity() const;
  /// Number of nodes.
  std::size_t size() const;
  /// Every subterm has a homogeneous sort.
  bool homogeneous() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  std::string name;
  Sort sort;
  Sort binder_sort;
  std::unique_ptr<Term> first;
  std::unique_ptr<Term> second;
  int complexity = 0;
  std::size_t size = 1;
  bool homogeneous = true;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Sort& Term::sort() const { return node_->sort; }
inline const Sort& Term::binder_sort() const { return node_->binder_sort; }
inline const Term& Term::body() const { return *node_->first; }
inline const Term& Term::fun() const { return *node_->first; }
inline const Term& Term::arg() const { return *node_->second; }
inline int Term::complexity() const { return node_->complexity; }
inline std::size_t Term::size() const { return node_->size; }
inline bool Term::homogeneous() const { return node_->homogeneous; }

inline const Sort& sort_of(const Term& t) { return t.sort(); }
inline int complexity(const Term& t) { return t.complexity(); }
inline bool is_homogeneous(const Term& t) { return t.homogeneous(); }

/// Free variables with their sorts.
std::map<std::string, Sort> free_vars(const Term& t);
bool is_closed(const Term& t);
bool occurs_free(const Term& t, const std::string& name);

/// Equality up to renaming of bound variables.
bool alpha_equal(const Term& lhs, const Term& rhs);
/// A nameless rendering (bound variables as binder indices); two terms are
/// alpha-equal iff their keys are equal.
std::string nameless_key(const Term& t);

/// Number of occurrences of the constant `name`.
std::size_t count_constant(const Term& t, const std::string& name);

}  // namespace lq
