#include "lq/families.hpp"

#include <stdexcept>

#include "lq/det_typing.hpp"
#include "lq/nondet_typing.hpp"
#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"

namespace lq {

const char* mode_str(Mode m) { return m == Mode::det ? "det" : "nondet"; }

Mode parse_mode(const std::string& text) {
  if (text == "det") return Mode::det;
  if (text == "nondet") return Mode::nondet;
  throw std::invalid_argument("unknown mode '" + text + "' (expected det or nondet)");
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"example1", "spine", "balanced-b"};
  return names;
}

Term family_term(const std::string& name, unsigned j) {
  std::string text;
  if (name == "example1") {
    const std::string n = "(\\y:(o->o).\\x:o. y (y x))";
    std::string inner = "y";
    for (unsigned i = 0; i < j; ++i) inner = n + " (" + inner + ")";
    text = "(\\y:(o->o). (" + inner + ") (a e)) a";
  } else if (name == "spine") {
    text = "e";
    for (unsigned i = 0; i < j; ++i) text = "a (" + text + ")";
  } else if (name == "balanced-b") {
    std::string inner = "e";
    for (unsigned i = 0; i < j; ++i) inner = "f (" + inner + ")";
    text = "(\\f:(o->o). " + inner + ") (\\x:o. b (a x) (a x))";
  } else {
    throw std::invalid_argument("unknown family '" + name + "'");
  }
  return parse_term(text);
}

FamilyRun run_family(const std::string& name, unsigned max, Mode mode, const Caps& caps) {
  FamilyRun run{name, mode, {}};
  for (unsigned j = 1; j <= max; ++j) {
    const Term t = family_term(name, j);
    NormalizeOptions options;
    options.step_budget = caps.step_budget;
    const Tree tree = to_tree(normalize(t, Strategy::rmf, options).normal_form);
    FamilyRecord r;
    r.j = j;
    r.term = print_term(t);
    r.m = t.complexity();
    if (mode == Mode::det) {
      r.value = det_value_and_flag(t, caps).value;
      r.metric = count_a(tree);
    } else {
      const auto v = max_nd_value(t, r.m, caps);
      r.derivable = v.has_value();
      r.value = v.value_or(0);
      r.metric = max_branch_a(tree);
    }
    run.records.push_back(std::move(r));
  }
  return run;
}

namespace {

enum class Shape { increasing, constant, other };

template <class Get>
Shape shape_of(const std::vector<FamilyRecord>& records, Get get) {
  if (records.empty()) return Shape::constant;
  bool monotone = true;
  bool constant = true;
  for (std::size_t i = 1; i < records.size(); ++i) {
    monotone = monotone && get(records[i - 1]) <= get(records[i]);
    constant = constant && get(records[i - 1]) == get(records[i]);
  }
  if (constant) return Shape::constant;
  if (monotone && get(records.back()) > get(records.front())) return Shape::increasing;
  return Shape::other;
}

}  // namespace

std::string family_verdict(const FamilyRun& run) {
  for (const auto& r : run.records) {
    if (!r.derivable) return "MISMATCH";
  }
  const Shape values = shape_of(run.records, [](const FamilyRecord& r) { return r.value; });
  const Shape metrics = shape_of(run.records, [](const FamilyRecord& r) { return r.metric; });
  if (values == Shape::increasing && metrics == Shape::increasing) return "both increase";
  if (values == Shape::constant && metrics == Shape::constant) return "both bounded";
  return "MISMATCH";
}

}  // namespace lq
