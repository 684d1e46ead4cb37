#include "lq/report.hpp"

#include <chrono>

#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/tree.hpp"
#include "lq/tree_metrics.hpp"

namespace lq {

namespace {

Path extend(const Path& p, Selector s) {
  Path out = p;
  out.push_back(s);
  return out;
}

// Premise paths: lambda body, or function then one argument premise per element.
Path child_path(const Path& p, bool lambda, std::size_t i) {
  if (lambda) return extend(p, Selector::body);
  return extend(p, i == 0 ? Selector::fun : Selector::arg);
}

Json det_node(const DetTypes& types, const DetNode& n, const Path& path) {
  Json env = Json::array();
  for (const auto& b : n.env) {
    env.push_back({{"var", b.var}, {"flag", flag_str(b.flag)}, {"type", type_json(types, b.type)}});
  }
  Json children = Json::array();
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    children.push_back(det_node(types, n.children[i], child_path(path, n.rule == DetRule::lambda, i)));
  }
  return {{"rule", rule_str(n.rule)},
          {"judgment",
           {{"environment", env},
            {"path", path_str(path)},
            {"term", print_term(n.subject)},
            {"flag", flag_str(n.flag)},
            {"type", type_json(types, n.type)}}},
          {"value", n.value},
          {"children", children}};
}

Json nd_triple(const NDTypes& types, const NDTriple& t) {
  return {{"Z", t.zone}, {"F", t.productivity}, {"type", type_json(types, t.type)}};
}

Json nd_node(NDTypes& types, int m, const NDNode& n, const Path& path) {
  Json env = Json::array();
  for (const auto& b : n.env) {
    env.push_back({{"var", b.var}, {"Z", b.triple.zone}, {"F", b.triple.productivity},
                   {"type", type_json(types, b.triple.type)}});
  }
  Json balanced = Json::array();
  for (int k = 0; k <= m; ++k) balanced.push_back(!types.k_unbalanced(n.triple, k));
  Json children = Json::array();
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    children.push_back(nd_node(types, m, n.children[i], child_path(path, n.rule == NDRule::lambda, i)));
  }
  return {{"rule", rule_str(n.rule)},
          {"judgment",
           {{"environment", env},
            {"path", path_str(path)},
            {"term", print_term(n.subject)},
            {"m", m},
            {"Z", n.triple.zone},
            {"F", n.triple.productivity},
            {"type", type_json(types, n.triple.type)}}},
          {"kValues", n.kvalues},
          {"balancedFlags", balanced},
          {"value", n.kvalues.empty() ? 0 : n.kvalues.back()},
          {"children", children}};
}

}  // namespace

Json type_json(const DetTypes& types, TypeId t) {
  if (types.is_atom(t)) return "r";
  const auto& d = types[t];
  Json args = Json::array();
  for (const DetItem& item : d.args) args.push_back({{"flag", flag_str(item.flag)}, {"type", type_json(types, item.type)}});
  return {{"args", args}, {"result", type_json(types, d.result)}};
}

Json type_json(const NDTypes& types, TypeId t) {
  if (types.is_atom(t)) return "o";
  const auto& d = types[t];
  Json args = Json::array();
  for (const NDTriple& el : d.args) args.push_back(nd_triple(types, el));
  return {{"args", args}, {"result", type_json(types, d.result)}};
}

Json derivation_json(const DetDerivation& d) { return det_node(*d.types, d.root, {}); }

Json derivation_json(const NDDerivation& d) { return nd_node(*d.types, d.m, d.root, {}); }

bool AnalysisReport::upper_bound_holds() const {
  if (mode == Mode::det) return value <= count_a;
  return !max_value || *max_value <= max_branch_a;
}

bool AnalysisReport::lower_bound_holds() const {
  if (mode == Mode::det) return (value > 0) == (flag == Flag::pr);
  return max_branch_a == 0 || (max_value && *max_value >= 1);
}

AnalysisReport analyze(const std::string& text, Mode mode, const AnalyzeOptions& options, const Caps& caps) {
  const bool with_derivation = options.derivation;
  const auto start = std::chrono::steady_clock::now();
  const Term t = parse_term(text);
  AnalysisReport r;
  r.input = text;
  r.term = print_term(t);
  r.mode = mode;
  NormalizeOptions budget;
  budget.step_budget = caps.step_budget;
  const Tree tree = to_tree(normalize(t, Strategy::rmf, budget).normal_form);
  r.normal_form = serialize(tree);
  r.count_a = count_a(tree);
  r.max_branch_a = max_branch_a(tree);
  if (mode == Mode::det) {
    const FlagValue fv = det_value_and_flag(t, caps);
    r.flag = fv.flag;
    r.value = fv.value;
    r.derivations = 1;
    if (with_derivation) {
      const DetAnalysis a = derive_det(t, caps, true);
      for (const auto& root : a.roots) {
        if (!root.materialized.empty()) r.derivation = derivation_json(root.materialized.front());
      }
    }
  } else {
    r.m = options.m.value_or(t.complexity());
    r.weakening = options.weakening;
    Caps c = caps;
    if (with_derivation) c.max_materialize = 1;
    const NDAnalysis a = derive_nd(t, r.m, c, with_derivation, options.weakening);
    r.max_value = a.max_value;
    r.derivations = a.derivations;
    if (with_derivation && !a.materialized.empty()) r.derivation = derivation_json(a.materialized.front());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Json report_json(const AnalysisReport& r, bool timing) {
  Json out;
  out["input"] = r.input;
  out["term"] = r.term;
  out["mode"] = mode_str(r.mode);
  if (r.mode == Mode::det) {
    out["flag"] = flag_str(r.flag);
    out["value"] = r.value;
  } else {
    out["m"] = r.m;
    out["weakening"] = r.weakening == NDTypes::Weakening::balanced ? "balanced" : "unproductive";
    out["maxValue"] = r.max_value ? Json(*r.max_value) : Json(nullptr);
  }
  out["derivations"] = r.derivations;
  out["oracle"] = {{"normalForm", r.normal_form}, {"count_a", r.count_a}, {"max_branch_a", r.max_branch_a}};
  if (r.mode == Mode::det) {
    out["verdicts"] = {{"value <= count_a", r.upper_bound_holds()}, {"value > 0 iff pr", r.lower_bound_holds()}};
  } else {
    out["verdicts"] = {{"maxValue <= max_branch_a", r.upper_bound_holds()},
                       {"max_branch_a >= 1 implies maxValue >= 1", r.lower_bound_holds()}};
  }
  if (r.derivation) out["derivation"] = *r.derivation;
  if (timing) out["seconds"] = r.seconds;
  return out;
}

Json family_json(const FamilyRun& run) {
  Json records = Json::array();
  for (const auto& r : run.records) {
    Json rec{{"j", r.j}, {"term", r.term}};
    if (run.mode == Mode::nondet) rec["m"] = r.m;
    rec["value"] = r.derivable ? Json(r.value) : Json(nullptr);
    rec[run.mode == Mode::det ? "count_a" : "max_branch_a"] = r.metric;
    records.push_back(std::move(rec));
  }
  return {{"family", run.name}, {"mode", mode_str(run.mode)}, {"records", records}, {"verdict", family_verdict(run)}};
}

}  // namespace lq
