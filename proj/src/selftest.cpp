#include "lq/selftest.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "lq/det_typing.hpp"
#include "lq/errors.hpp"
#include "lq/nondet_typing.hpp"
#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"

namespace lq {

bool SelftestReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.violations == 0; });
}

const PropertyResult& SelftestReport::property(const std::string& name) const {
  for (const auto& p : properties) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no property named '" + name + "'");
}

namespace {

constexpr std::size_t kMaxExamples = 3;

enum class Outcome { skip, pass, fail };

class Suite {
 public:
  Suite() {
    for (const char* name :
         {prop::well_formed, prop::round_trip, prop::sort_preservation, prop::rmf_order, prop::rmf_argument_vars,
          prop::confluence, prop::det_unique, prop::det_coupling, prop::det_upper, prop::det_zero,
          prop::det_subject_reduction, prop::det_checker, prop::nd_upper, prop::nd_weak_lower, prop::nd_preservation,
          prop::nd_checker, prop::branch_le_count}) {
      index_.emplace(name, results_.size());
      results_.push_back({name, 0, 0, 0, {}});
    }
  }

  // Runs `check` for one term; "skip" means the property does not apply.
  void run(const char* name, const std::string& term, const std::function<Outcome()>& check) {
    PropertyResult& r = results_[index_.at(name)];
    Outcome o;
    try {
      o = check();
    } catch (const CapacityError&) {
      ++r.skipped;
      return;
    } catch (const UniquenessViolation&) {
      o = Outcome::fail;
    }
    if (o == Outcome::skip) return;
    ++r.checked;
    if (o == Outcome::fail) {
      ++r.violations;
      if (r.examples.size() < kMaxExamples) r.examples.push_back(term);
    }
  }

  std::vector<PropertyResult> results() && { return std::move(results_); }

 private:
  std::vector<PropertyResult> results_;
  std::map<std::string, std::size_t> index_;
};

Outcome verdict(bool ok) { return ok ? Outcome::pass : Outcome::fail; }

bool free_vars_below(const Term& t, int bound) {
  for (const auto& [name, sort] : free_vars(t)) {
    if (sort.order() > bound) return false;
  }
  return true;
}

}  // namespace

SelftestReport run_selftest(const CorpusOptions& corpus, const Caps& caps) {
  SelftestReport report;
  report.seed = corpus.seed;
  report.count = corpus.count;
  Suite suite;
  NormalizeOptions budget;
  budget.step_budget = caps.step_budget;

  for (const Term& t : generate_corpus(corpus)) {
    const std::string text = print_term(t);
    const int m = t.complexity();

    suite.run(prop::well_formed, text, [&] {
      return verdict(is_closed(t) && t.homogeneous() && t.sort().is_base() && t.size() <= corpus.max_size &&
                     m <= corpus.max_complexity);
    });
    suite.run(prop::round_trip, text, [&] { return verdict(alpha_equal(parse_term(text), t)); });

    // Walk the RMF reduction sequence once, checking the step-level properties.
    bool sorts_ok = true;
    bool orders_ok = true;
    bool vars_ok = true;
    {
      Term cur = t;
      int last = std::numeric_limits<int>::max();
      std::uint64_t steps = 0;
      while (auto p = rmf_redex(cur)) {
        if (++steps > budget.step_budget) throw CapacityError("step budget exhausted");
        const Term& redex = subterm_at(cur, *p);
        const int order = redex_order(redex);
        orders_ok = orders_ok && order <= last;
        last = order;
        if (order == cur.complexity()) vars_ok = vars_ok && free_vars_below(redex.arg(), order - 2);
        Term next = step(cur, *p);
        sorts_ok = sorts_ok && next.sort() == cur.sort();
        cur = std::move(next);
      }
    }
    suite.run(prop::sort_preservation, text, [&] { return verdict(sorts_ok); });
    suite.run(prop::rmf_order, text, [&] { return verdict(orders_ok); });
    suite.run(prop::rmf_argument_vars, text, [&] { return verdict(vars_ok); });

    const Term rmf_nf = normalize(t, Strategy::rmf, budget).normal_form;
    const Tree tree = to_tree(rmf_nf);
    const std::uint64_t total = count_a(tree);
    const std::uint64_t branch = max_branch_a(tree);
    suite.run(prop::confluence, text,
              [&] { return verdict(alpha_equal(normalize(t, Strategy::oi, budget).normal_form, rmf_nf)); });
    suite.run(prop::branch_le_count, text, [&] { return verdict(branch <= total); });

    // Deterministic system.
    suite.run(prop::det_unique, text, [&] {
      det_value_and_flag(t, caps);
      return Outcome::pass;
    });
    suite.run(prop::det_coupling, text, [&] {
      const FlagValue fv = det_value_and_flag(t, caps);
      return verdict((fv.value > 0) == (fv.flag == Flag::pr));
    });
    suite.run(prop::det_upper, text, [&] { return verdict(det_value_and_flag(t, caps).value <= total); });
    suite.run(prop::det_zero, text, [&] {
      if (total != 0) return Outcome::skip;
      const FlagValue fv = det_value_and_flag(t, caps);
      return verdict(fv.flag == Flag::np && fv.value == 0);
    });
    const std::optional<Path> first = rmf_redex(t);
    const bool top_step = first && redex_order(subterm_at(t, *first)) == m;
    suite.run(prop::det_subject_reduction, text, [&] {
      if (!top_step) return Outcome::skip;
      const std::uint64_t before = det_value_and_flag(t, caps).value;
      const std::uint64_t after = det_value_and_flag(step(t, *first), caps).value;
      const bool upper = before >= 63 || after <= (std::uint64_t{1} << before);
      return verdict(before <= after && upper);
    });
    suite.run(prop::det_checker, text, [&] {
      Caps c = caps;
      c.max_materialize = 2;
      const DetAnalysis a = derive_det(t, c, true);
      const FlagValue fv = det_value_and_flag(t, caps);
      for (const auto& root : a.roots) {
        for (const auto& d : root.materialized) {
          if (!check_det(d) || derivation_value(d.root) != fv.value || d.root.flag != fv.flag) return Outcome::fail;
        }
      }
      return Outcome::pass;
    });

    // Nondeterministic system at order m = complexity.
    suite.run(prop::nd_upper, text, [&] {
      const auto v = max_nd_value(t, m, caps);
      return verdict(!v || *v <= branch);
    });
    suite.run(prop::nd_weak_lower, text, [&] {
      if (branch == 0) return Outcome::skip;
      const auto v = max_nd_value(t, m, caps);
      return verdict(v && *v >= 1);
    });
    suite.run(prop::nd_checker, text, [&] {
      Caps c = caps;
      c.max_materialize = 1;
      const NDAnalysis a = derive_nd(t, m, c, true);
      if (!a.max_value) return verdict(a.materialized.empty());
      if (a.materialized.empty()) return Outcome::fail;
      const NDDerivation& d = a.materialized.front();
      return verdict(check_nd(d) && nd_value_vector(d)[static_cast<std::size_t>(m)] == *a.max_value);
    });
    suite.run(prop::nd_preservation, text, [&] {
      if (!top_step || m < 1) return Outcome::skip;
      return verdict(max_nd_value(t, m - 1, caps) == max_nd_value(step(t, *first), m - 1, caps));
    });
  }
  report.properties = std::move(suite).results();
  return report;
}

Json selftest_json(const SelftestReport& r) {
  Json props = Json::array();
  for (const auto& p : r.properties) {
    props.push_back({{"name", p.name},
                     {"checked", p.checked},
                     {"skipped", p.skipped},
                     {"violations", p.violations},
                     {"examples", p.examples}});
  }
  return {{"seed", r.seed}, {"count", r.count}, {"ok", r.ok()}, {"properties", props}};
}

}  // namespace lq
