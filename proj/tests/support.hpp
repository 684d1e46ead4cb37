#pragma once

#include <string>

#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/term.hpp"
#include "lq/tree.hpp"

namespace lq::test {

inline const std::string kN = "(\\y:(o->o).\\x:o. y (y x))";

/// (\y. N (N (N y)) (a e)) a
inline std::string example_text() { return "(\\y:(o->o). " + kN + " (" + kN + " (" + kN + " y)) (a e)) a"; }

inline Term example_term() { return parse_term(example_text()); }

inline Tree normal_tree(const Term& t, Strategy s = Strategy::rmf) { return to_tree(normalize(t, s).normal_form); }

inline Tree normal_tree(const std::string& text) { return normal_tree(parse_term(text)); }

}  // namespace lq::test
