#include "lq/syntax.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <vector>

#include "lq/errors.hpp"

namespace lq {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature* signature) : text_(text), signature_(signature) {}

  Sort sort_only() {
    Sort s = sort();
    expect_end();
    return s;
  }

  Term term_only() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view token) {
    skip_space();
    return text_.substr(pos_, token.size()) == token;
  }

  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool at_identifier_start() {
    skip_space();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    if (!at_identifier_start()) fail("expected identifier");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string identifier() {
    const std::size_t start = pos_;
    std::string name = word();
    if (signature_ && signature_->find(name)) {
      pos_ = start;
      fail("constant '" + name + "' cannot be used as a variable");
    }
    return name;
  }

  Sort sort() {
    Sort head = sort_atom();
    if (accept("->")) return Sort::arrow(head, sort());
    return head;
  }

  Sort sort_atom() {
    if (accept("(")) {
      Sort s = sort();
      expect(")");
      return s;
    }
    skip_space();
    const std::size_t start = pos_;
    if (at_identifier_start() && word() == "o") return Sort();
    pos_ = start;
    fail("expected sort");
  }

  bool at_atom_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '(' || c == '\\' || std::isalpha(static_cast<unsigned char>(c));
  }

  Term term() {
    const std::size_t start = pos_;
    std::optional<Term> acc;
    while (at_atom_start()) {
      const std::size_t atom_pos = pos_;
      Term next = atom();
      if (!acc) {
        acc = std::move(next);
        continue;
      }
      try {
        acc = Term::apply(std::move(*acc), std::move(next));
      } catch (const SortError& e) {
        throw SortError(std::string(e.what()) + " (argument at offset " + std::to_string(atom_pos) + ")");
      }
    }
    if (!acc) {
      pos_ = std::max(pos_, start);
      fail("expected term");
    }
    return std::move(*acc);
  }

  Term atom() {
    skip_space();
    if (accept("\\")) {
      std::string name = identifier();
      expect(":");
      Sort s = sort();
      expect(".");
      scope_.emplace_back(name, s);
      Term body = term();
      scope_.pop_back();
      return Term::lambda(std::move(name), std::move(s), std::move(body));
    }
    if (accept("(")) {
      // "(" ident ":" sort ")" annotates a variable occurrence.
      const std::size_t save = pos_;
      if (at_identifier_start()) {
        std::string name = word();
        if (accept(":") && !(signature_ && signature_->find(name))) {
          Sort s = sort();
          expect(")");
          return variable(name, &s, save);
        }
      }
      pos_ = save;
      Term t = term();
      expect(")");
      return t;
    }
    const std::size_t start = pos_;
    std::string name = word();
    if (signature_) {
      if (const ConstantDecl* c = signature_->find(name)) return Term::constant(c->name, c->sort);
    }
    return variable(name, nullptr, start);
  }

  Term variable(const std::string& name, const Sort* annotation, std::size_t at) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) {
        if (annotation && *annotation != it->second) {
          throw SortError("variable " + name + " annotated " + annotation->str() + " but bound at sort " +
                          it->second.str() + " (offset " + std::to_string(at) + ")");
        }
        return Term::variable(name, it->second);
      }
    }
    auto known = free_.find(name);
    if (known != free_.end()) {
      if (annotation && *annotation != known->second) {
        throw SortError("free variable " + name + " annotated " + annotation->str() + " but earlier " +
                        known->second.str() + " (offset " + std::to_string(at) + ")");
      }
      return Term::variable(name, known->second);
    }
    if (!annotation) {
      pos_ = at;
      fail("free variable '" + name + "' needs a sort annotation at first use");
    }
    free_.emplace(name, *annotation);
    return Term::variable(name, *annotation);
  }

  std::string_view text_;
  const Signature* signature_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, Sort>> scope_;
  std::map<std::string, Sort> free_;
};

std::string binder_sort(const Sort& s) { return s.is_base() ? "o" : "(" + s.str() + ")"; }

void print_rec(const Term& t, std::vector<std::string>& bound, std::set<std::string>& annotated,
               std::string& out) {
  switch (t.kind()) {
    case TermKind::constant:
      out += t.name();
      return;
    case TermKind::variable: {
      bool is_bound = false;
      for (const auto& b : bound) is_bound = is_bound || b == t.name();
      if (!is_bound && annotated.insert(t.name()).second) {
        out += "(" + t.name() + ":" + t.sort().str() + ")";
      } else {
        out += t.name();
      }
      return;
    }
    case TermKind::lambda:
      out += "\\" + t.name() + ":" + binder_sort(t.binder_sort()) + ". ";
      bound.push_back(t.name());
      print_rec(t.body(), bound, annotated, out);
      bound.pop_back();
      return;
    case TermKind::application: {
      const bool paren_fun = t.fun().is_lambda();
      if (paren_fun) out += "(";
      print_rec(t.fun(), bound, annotated, out);
      if (paren_fun) out += ")";
      out += " ";
      const bool paren_arg = t.arg().is_lambda() || t.arg().is_application();
      if (paren_arg) out += "(";
      print_rec(t.arg(), bound, annotated, out);
      if (paren_arg) out += ")";
      return;
    }
  }
}

}  // namespace

Sort parse_sort(std::string_view text) { return Parser(text, nullptr).sort_only(); }

Term parse_term(std::string_view text, const Signature& signature) {
  return Parser(text, &signature).term_only();
}

std::string print_term(const Term& t) {
  std::string out;
  std::vector<std::string> bound;
  std::set<std::string> annotated;
  print_rec(t, bound, annotated, out);
  return out;
}

}  // namespace lq
