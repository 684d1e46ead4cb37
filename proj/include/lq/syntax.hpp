#pragma once

#include <map>
#include <string>
#include <string_view>

#include "lq/signature.hpp"
#include "lq/sort.hpp"
#include "lq/term.hpp"

namespace lq {

// Surface syntax:
//
//   sort  ::= "o" | "(" sort ")" | sort "->" sort        (arrow is right-associative)
//   term  ::= atom+                                      (application is left-associative)
//   atom  ::= constant | ident | "(" term ")" | "(" ident ":" sort ")"
//           | "\" ident ":" sort "." term
//   ident ::= letter (letter | digit | "_")*, not a constant name
//
// "--" starts a line comment. A free variable must be annotated with its sort,
// "(x:o->o)", at its first occurrence; later occurrences may omit it.

/// Throws ParseError.
Sort parse_sort(std::string_view text);

/// Throws ParseError on malformed text and SortError on ill-sorted terms.
Term parse_term(std::string_view text, const Signature& signature = Signature::standard());

/// Inverse of parse_term up to alpha-equality. Free variables are annotated at
/// their first printed occurrence.
std::string print_term(const Term& t);

}  // namespace lq
