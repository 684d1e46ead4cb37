// Command-line front end: parse, normalize, analyze, family, selftest.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "lq/caps.hpp"
#include "lq/errors.hpp"
#include "lq/families.hpp"
#include "lq/reduction.hpp"
#include "lq/report.hpp"
#include "lq/selftest.hpp"
#include "lq/syntax.hpp"
#include "lq/tree.hpp"

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kInputError = 2, kCapacity = 3 };

struct Input {
  std::string file;
  std::string expr;

  void attach(CLI::App* cmd) {
    cmd->add_option("file", file, "File holding the term, or - for stdin");
    cmd->add_option("-e,--expr", expr, "Term given on the command line");
  }

  std::string read() const {
    if (!expr.empty()) return expr;
    if (file.empty() || file == "-") {
      return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open " + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int print_json(const lq::Json& j, bool ok) {
  std::cout << j.dump(2) << '\n';
  return ok ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative intersection-type analyses for simply typed lambda-terms"};
  app.require_subcommand(1);

  Input input;

  auto* parse = app.add_subcommand("parse", "Parse a term and report its sort, complexity and homogeneity");
  input.attach(parse);

  std::string strategy = "rmf";
  bool trace = false;
  auto* normalize = app.add_subcommand("normalize", "Beta-normalize a closed term of sort o");
  input.attach(normalize);
  normalize->add_option("--strategy", strategy, "oi or rmf")->check(CLI::IsMember({"oi", "rmf"}));
  normalize->add_flag("--trace", trace, "Print one line per step: <step> <order> <path>");

  std::string mode = "det";
  std::optional<int> order;
  bool derivation = false;
  std::string weakening = "unproductive";
  auto* analyze = app.add_subcommand("analyze", "Run the det or nondet analysis and compare with the normal form");
  input.attach(analyze);
  analyze->add_option("--mode", mode, "det or nondet")->check(CLI::IsMember({"det", "nondet"}));
  analyze->add_option("--order", order, "Order bound m for nondet (default: complexity)");
  analyze->add_flag("--derivation", derivation, "Include a derivation tree");
  analyze->add_option("--weakening", weakening, "Triples a lambda may ignore: unproductive or balanced")
      ->check(CLI::IsMember({"unproductive", "balanced"}));

  std::string family_name;
  unsigned family_max = 6;
  std::string family_mode = "det";
  auto* family = app.add_subcommand("family", "Tabulate a parametric family and its boundedness verdict");
  family->add_option("--name", family_name, "example1, spine or balanced-b")->required();
  family->add_option("--max", family_max, "Largest parameter");
  family->add_option("--mode", family_mode, "det or nondet")->check(CLI::IsMember({"det", "nondet"}));

  lq::CorpusOptions corpus;
  auto* selftest = app.add_subcommand("selftest", "Generate a random corpus and check every property");
  selftest->add_option("--seed", corpus.seed, "Generator seed");
  selftest->add_option("--count", corpus.count, "Number of terms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const lq::Caps caps = lq::Caps::from_env();

    if (*parse) {
      const lq::Term t = lq::parse_term(input.read());
      lq::Json j{{"term", lq::print_term(t)},
                 {"sort", t.sort().str()},
                 {"complexity", t.complexity()},
                 {"homogeneous", t.homogeneous()},
                 {"closed", lq::is_closed(t)}};
      return print_json(j, true);
    }

    if (*normalize) {
      const lq::Term t = lq::parse_term(input.read());
      lq::NormalizeOptions options;
      options.step_budget = caps.step_budget;
      options.trace = trace;
      const lq::Normalized n =
          lq::normalize(t, strategy == "oi" ? lq::Strategy::oi : lq::Strategy::rmf, options);
      if (t.sort().is_base() && lq::is_closed(t)) {
        std::cout << lq::serialize(lq::to_tree(n.normal_form)) << '\n';
      } else {
        std::cout << lq::print_term(n.normal_form) << '\n';
      }
      std::cout << "steps: " << n.steps << '\n';
      if (trace) std::cout << lq::format_trace(n.trace);
      return kOk;
    }

    if (*analyze) {
      lq::AnalyzeOptions options;
      options.m = order;
      options.derivation = derivation;
      options.weakening =
          weakening == "balanced" ? lq::NDTypes::Weakening::balanced : lq::NDTypes::Weakening::unproductive;
      const lq::AnalysisReport r = lq::analyze(input.read(), lq::parse_mode(mode), options, caps);
      return print_json(lq::report_json(r), r.upper_bound_holds() && r.lower_bound_holds());
    }

    if (*family) {
      const lq::FamilyRun run = lq::run_family(family_name, family_max, lq::parse_mode(family_mode), caps);
      return print_json(lq::family_json(run), lq::family_verdict(run) != "MISMATCH");
    }

    if (*selftest) {
      const lq::SelftestReport r = lq::run_selftest(corpus, caps);
      return print_json(lq::selftest_json(r), r.ok());
    }
  } catch (const lq::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kCapacity;
  } catch (const lq::UniquenessViolation& e) {
    std::cerr << "property failure: " << e.what() << '\n';
    return kPropertyFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
