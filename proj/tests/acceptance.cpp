// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lq/det_typing.hpp"
#include "lq/families.hpp"
#include "lq/nondet_typing.hpp"
#include "lq/reduction.hpp"
#include "lq/selftest.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"

namespace {

using Clock = std::chrono::steady_clock;

const std::string kN = "(\\y:(o->o).\\x:o. y (y x))";
const std::string kExample = "(\\y:(o->o). " + kN + " (" + kN + " (" + kN + " y)) (a e)) a";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

Outcome example_det() {
  const auto start = Clock::now();
  const lq::Term m = lq::parse_term(kExample);
  const auto fv = lq::det_value_and_flag(m);
  const std::size_t count = lq::count_a(lq::to_tree(lq::normalize(m, lq::Strategy::rmf).normal_form));
  const double s = seconds_since(start);
  const bool ok = fv.flag == lq::Flag::pr && fv.value == 5 && count == 9 && fv.value <= count && s < 5.0;
  return {ok, std::string("flag ") + lq::flag_str(fv.flag) + ", value " + std::to_string(fv.value) + ", count_a " +
                  std::to_string(count) + ", " + fmt(s)};
}

Outcome example_nondet() {
  const auto start = Clock::now();
  lq::Caps caps;
  caps.max_materialize = 100'000;
  const lq::NDAnalysis a = lq::derive_nd(lq::parse_term(kExample), 2, caps, true);
  std::uint64_t best = 0;
  std::size_t bad = 0;
  for (const auto& d : a.materialized) {
    if (!lq::check_nd(d).ok) ++bad;
    best = std::max(best, lq::nd_value_vector(d).back());
  }
  const double s = seconds_since(start);
  const bool complete = a.materialized.size() == a.derivations;
  const bool ok = a.max_value == std::optional<std::uint64_t>(5) && complete && bad == 0 && best == 5 && s < 60.0;
  return {ok, "max val^3 " + (a.max_value ? std::to_string(*a.max_value) : std::string("none")) + ", enumerated " +
                  std::to_string(a.materialized.size()) + "/" + std::to_string(a.derivations) +
                  " derivations (max " + std::to_string(best) + ", " + std::to_string(bad) + " rejected), " + fmt(s)};
}

Outcome family_growth(std::vector<std::string>& verdicts) {
  const lq::FamilyRun det = lq::run_family("example1", 6, lq::Mode::det);
  bool ok = det.records.size() == 6;
  std::string values;
  std::string counts;
  for (std::size_t i = 0; i < det.records.size(); ++i) {
    const auto& r = det.records[i];
    ok = ok && r.value == r.j + 2 && r.metric == (std::uint64_t{1} << r.j) + 1 && r.value <= r.metric;
    if (i > 0) ok = ok && r.value > det.records[i - 1].value && r.metric > det.records[i - 1].metric;
    values += (i ? "," : "") + std::to_string(r.value);
    counts += (i ? "," : "") + std::to_string(r.metric);
  }
  verdicts.push_back("example1/det: " + lq::family_verdict(det));
  verdicts.push_back("example1/nondet: " + lq::family_verdict(lq::run_family("example1", 4, lq::Mode::nondet)));
  verdicts.push_back("balanced-b/nondet: " + lq::family_verdict(lq::run_family("balanced-b", 4, lq::Mode::nondet)));
  return {ok, "values " + values + ", counts " + counts};
}

std::string counts(const lq::PropertyResult& p) {
  return std::to_string(p.checked) + " checked, " + std::to_string(p.skipped) + " skipped, " +
         std::to_string(p.violations) + " violations";
}

bool clean(const lq::PropertyResult& p, std::size_t minimum) { return p.violations == 0 && p.checked >= minimum; }

Outcome embedding() {
  const auto start = Clock::now();
  bool ok = true;
  for (std::size_t n = 0; n <= 8; ++n) ok = ok && lq::embed_depth(lq::build_An(n)) == n;
  lq::Tree spine{"e", {}};
  for (int i = 0; i < 20; ++i) spine = lq::Tree{"a", {spine, lq::Tree{"e", {}}}};
  const std::size_t spine_depth = lq::embed_depth(spine);
  const double s = seconds_since(start);
  ok = ok && spine_depth == 1 && s < 1.0;
  return {ok, "A_0..A_8 exact, 20-node left spine depth " + std::to_string(spine_depth) + ", " + fmt(s)};
}

}  // namespace

int main() {
  std::vector<std::pair<int, Outcome>> results;
  auto record = [&](int id, const std::function<Outcome()>& f) {
    try {
      results.emplace_back(id, f());
    } catch (const std::exception& e) {
      results.emplace_back(id, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  record(1, example_det);
  record(2, example_nondet);
  std::vector<std::string> verdicts;
  record(3, [&] { return family_growth(verdicts); });

  lq::CorpusOptions corpus;
  corpus.seed = 1;
  corpus.count = 300;
  const auto start = Clock::now();
  lq::SelftestReport report;
  try {
    report = lq::run_selftest(corpus);
  } catch (const std::exception& e) {
    std::printf("selftest aborted: %s\n", e.what());
  }
  const double corpus_seconds = seconds_since(start);
  auto prop = [&](const char* name) -> const lq::PropertyResult& { return report.property(name); };

  record(4, [&] {
    const auto& unique = prop(lq::prop::det_unique);
    const auto& upper = prop(lq::prop::det_upper);
    const bool ok = clean(unique, 200) && clean(upper, 200) && corpus_seconds < 600.0;
    return Outcome{ok, "corpus of " + std::to_string(report.count) + ": unique root " + counts(unique) +
                           "; value <= count_a " + counts(upper) + "; " + fmt(corpus_seconds)};
  });
  record(5, [&] {
    const auto& p = prop(lq::prop::det_subject_reduction);
    return Outcome{clean(p, 100), counts(p)};
  });
  record(6, [&] {
    const auto& upper = prop(lq::prop::nd_upper);
    const auto& lower = prop(lq::prop::nd_weak_lower);
    return Outcome{clean(upper, 200) && lower.violations == 0,
                   "upper bound " + counts(upper) + "; weak lower bound " + counts(lower)};
  });
  record(7, [&] {
    const auto& p = prop(lq::prop::nd_preservation);
    return Outcome{clean(p, 50), counts(p)};
  });
  record(8, [&] {
    const auto& p = prop(lq::prop::confluence);
    return Outcome{p.violations == 0 && p.skipped == 0 && p.checked == report.count && report.count > 0, counts(p)};
  });
  record(9, embedding);
  record(10, [&] {
    // No closed form for the asymptotic bounds is checked. What stands in for
    // them is the family verdicts and the weak lower bound above.
    bool ok = verdicts.size() == 3;
    std::string joined;
    for (const auto& v : verdicts) {
      ok = ok && v.find("both increase") != std::string::npos;
      joined += (joined.empty() ? "" : "; ") + v;
    }
    ok = ok && prop(lq::prop::nd_weak_lower).violations == 0;
    return Outcome{ok, "asymptotic bounds not checked in closed form; covered by family verdicts (" + joined +
                           ") and the weak lower bound"};
  });

  bool all = true;
  for (const auto& [id, o] : results) {
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
