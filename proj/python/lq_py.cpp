#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "lq/caps.hpp"
#include "lq/det_typing.hpp"
#include "lq/errors.hpp"
#include "lq/families.hpp"
#include "lq/nondet_typing.hpp"
#include "lq/reduction.hpp"
#include "lq/report.hpp"
#include "lq/selftest.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

lq::Strategy parse_strategy(const std::string& s) {
  if (s == "oi") return lq::Strategy::oi;
  if (s == "rmf") return lq::Strategy::rmf;
  throw std::invalid_argument("unknown strategy " + s + " (expected oi or rmf)");
}

lq::NDTypes::Weakening parse_weakening(const std::string& s) {
  if (s == "unproductive") return lq::NDTypes::Weakening::unproductive;
  if (s == "balanced") return lq::NDTypes::Weakening::balanced;
  throw std::invalid_argument("unknown weakening " + s + " (expected unproductive or balanced)");
}

lq::Caps caps_from(const std::string& overrides) { return lq::Caps::parse(overrides, lq::Caps::from_env()); }

}  // namespace

PYBIND11_MODULE(_lq, m) {
  m.doc() = "Quantitative intersection-type analyses for simply typed lambda-terms";

  py::register_exception<lq::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<lq::SortError>(m, "SortError", PyExc_ValueError);
  py::register_exception<lq::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<lq::CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<lq::UniquenessViolation>(m, "UniquenessViolation", PyExc_RuntimeError);

  m.def(
      "parse",
      [](const std::string& text) {
        const lq::Term t = lq::parse_term(text);
        return py::dict("term"_a = lq::print_term(t), "sort"_a = t.sort().str(), "complexity"_a = t.complexity(),
                        "homogeneous"_a = t.homogeneous(), "closed"_a = lq::is_closed(t));
      },
      "text"_a, "Parse a term; returns its printed form, sort, complexity, homogeneity and closedness.");

  m.def(
      "normalize",
      [](const std::string& text, const std::string& strategy, const std::string& caps) {
        lq::NormalizeOptions options;
        options.step_budget = caps_from(caps).step_budget;
        const auto n = lq::normalize(lq::parse_term(text), parse_strategy(strategy), options);
        return py::make_tuple(lq::print_term(n.normal_form), n.steps);
      },
      "text"_a, "strategy"_a = "rmf", "caps"_a = "", "Beta-normal form (as a term) and the number of steps.");

  m.def(
      "normal_tree",
      [](const std::string& text, const std::string& caps) {
        lq::NormalizeOptions options;
        options.step_budget = caps_from(caps).step_budget;
        return lq::serialize(lq::to_tree(lq::normalize(lq::parse_term(text), lq::Strategy::rmf, options).normal_form));
      },
      "text"_a, "caps"_a = "", "The normal form of a closed term of sort o as a tree, e.g. 'b(a(e),e)'.");

  m.def("count_a", [](const std::string& tree) { return lq::count_a(lq::parse_tree(tree)); }, "tree"_a);
  m.def("max_branch_a", [](const std::string& tree) { return lq::max_branch_a(lq::parse_tree(tree)); }, "tree"_a);
  m.def("embed_depth", [](const std::string& tree) { return lq::embed_depth(lq::parse_tree(tree)); }, "tree"_a);
  m.def("build_An", [](std::size_t n) { return lq::serialize(lq::build_An(n)); }, "n"_a);

  m.def(
      "det_value_and_flag",
      [](const std::string& text, const std::string& caps) {
        const auto fv = lq::det_value_and_flag(lq::parse_term(text), caps_from(caps));
        return py::make_tuple(lq::flag_str(fv.flag), fv.value);
      },
      "text"_a, "caps"_a = "", "Flag ('pr' or 'np') and value of the unique det derivation.");

  m.def(
      "max_nd_value",
      [](const std::string& text, int order, const std::string& weakening, const std::string& caps) {
        return lq::max_nd_value(lq::parse_term(text), order, caps_from(caps), parse_weakening(weakening));
      },
      "text"_a, "m"_a, "weakening"_a = "unproductive", "caps"_a = "",
      "Largest (m+1)-value over derivations of the root judgment, or None.");

  m.def(
      "analyze_json",
      [](const std::string& text, const std::string& mode, std::optional<int> order, bool derivation,
         const std::string& weakening, const std::string& caps) {
        lq::AnalyzeOptions options;
        options.m = order;
        options.derivation = derivation;
        options.weakening = parse_weakening(weakening);
        return lq::report_json(lq::analyze(text, lq::parse_mode(mode), options, caps_from(caps)), false).dump();
      },
      "text"_a, "mode"_a = "det", "m"_a = py::none(), "derivation"_a = false, "weakening"_a = "unproductive",
      "caps"_a = "");

  m.def(
      "family_json",
      [](const std::string& name, unsigned max, const std::string& mode, const std::string& caps) {
        return lq::family_json(lq::run_family(name, max, lq::parse_mode(mode), caps_from(caps))).dump();
      },
      "name"_a, "max"_a, "mode"_a = "det", "caps"_a = "");

  m.def(
      "selftest_json",
      [](std::uint64_t seed, std::size_t count, const std::string& caps) {
        lq::CorpusOptions options;
        options.seed = seed;
        options.count = count;
        lq::Caps c = caps_from(caps);
        py::gil_scoped_release release;
        return lq::selftest_json(lq::run_selftest(options, c)).dump();
      },
      "seed"_a = 1, "count"_a = 50, "caps"_a = "");
}
