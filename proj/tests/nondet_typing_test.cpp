#include <gtest/gtest.h>

#include <algorithm>
#include <optional>

#include "lq/errors.hpp"
#include "lq/nondet_typing.hpp"
#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"
#include "support.hpp"

namespace lq {
namespace {

const Sort o;
const Sort oo = Sort::arrow(o, o);

NDTriple tri(int z, int f, TypeId t = kAtomType) {
  return NDTriple{static_cast<std::uint8_t>(z), static_cast<std::uint8_t>(f), t};
}

TEST(NDTypesTest, TripleSpaces) {
  NDTypes types;
  EXPECT_EQ(nd_triples_of(o, 0, types).size(), 1u);
  EXPECT_EQ(nd_triples_of(o, 2, types).size(), 8u);
  EXPECT_EQ(types.all_of(oo, 1 << 16).size(), 2u);
  EXPECT_EQ(nd_triples_of(oo, 1, types).size(), 8u);
}

TEST(NDTypesTest, KUnbalanced) {
  NDTypes types;
  EXPECT_TRUE(is_k_unbalanced(types, tri(0, 0), 0));
  EXPECT_FALSE(is_k_unbalanced(types, tri(0, 0), 1));
  const TypeId tau_y = types.arrow(oo, {tri(0, 0)}, kAtomType);
  const TypeId tau_n = types.arrow(parse_sort("(o->o)->o->o"), {tri(0, 1, tau_y), tri(1, 1, tau_y)}, tau_y);
  EXPECT_TRUE(is_k_unbalanced(types, tri(1, 1, tau_y), 1));
  EXPECT_FALSE(is_k_unbalanced(types, tri(1, 1, tau_n), 1));
  EXPECT_TRUE(types.balanced(tri(0, 1, tau_y)));
  EXPECT_FALSE(types.balanced(tri(0, 0)));
}

TEST(NDTypesTest, Rendering) {
  NDTypes types;
  const TypeId tau_y = types.arrow(oo, {tri(0, 0)}, kAtomType);
  EXPECT_EQ(types.str(kAtomType), "o");
  EXPECT_EQ(types.str(tri(1, 2, tau_y)), "(1,2,(0,0,o) -> o)");
  EXPECT_EQ(types.str(types.arrow(oo, {}, kAtomType)), "T -> o");
}

// ⊢₂ N : (1, 2, (0,1,τ) ∧ (1,1,τ) → τ) with τ = (0,0,o) → o: the derivation inside the 1-zone.
class ZoneDerivation : public ::testing::Test {
 protected:
  void SetUp() override {
    types_ = std::make_shared<NDTypes>();
    tau_ = types_->arrow(oo, {tri(0, 0)}, kAtomType);
    const TypeId n_type = types_->arrow(parse_sort("(o->o)->o->o"), {tri(0, 1, tau_), tri(1, 1, tau_)}, tau_);

    const Term n = parse_term(test::kN);
    const Term& inner_lambda = n.body();
    const Term& outer_app = inner_lambda.body();
    const Term& inner_app = outer_app.arg();

    const NDBinding y0{"y", oo, tri(0, 1, tau_)};
    const NDBinding y1{"y", oo, tri(1, 1, tau_)};
    const NDBinding x{"x", o, tri(0, 0)};
    auto leaf = [this](const Term& subject, const NDBinding& b) {
      return NDNode{NDRule::variable, subject, {b}, b.triple, zeros(), {}};
    };
    NDNode yx{NDRule::application, inner_app, {y1, x}, tri(1, 1), zeros(), {leaf(inner_app.fun(), y1), leaf(inner_app.arg(), x)}};
    NDNode yyx{NDRule::application, outer_app, {y0, y1, x}, tri(1, 2), {0, 1, 0}, {leaf(outer_app.fun(), y0), yx}};
    NDNode lx{NDRule::lambda, inner_lambda, {y0, y1}, tri(1, 2, tau_), zeros(), {yyx}};
    derivation_ = NDDerivation{types_, 2, NDNode{NDRule::lambda, n, {}, tri(1, 2, n_type), zeros(), {lx}}};
  }

  static std::vector<std::uint64_t> zeros() { return {0, 0, 0}; }
  NDNode& outer_application() { return derivation_->root.children[0].children[0]; }

  std::shared_ptr<NDTypes> types_;
  TypeId tau_ = 0;
  std::optional<NDDerivation> derivation_;
};

TEST_F(ZoneDerivation, Checks) {
  auto result = check_nd(*derivation_);
  EXPECT_TRUE(result.ok) << result.diagnostic;
  EXPECT_EQ(nd_value_vector(*derivation_), (std::vector<std::uint64_t>{0, 1, 0}));
}

TEST_F(ZoneDerivation, TwoUnbalancedPremisesFail) {
  // Put the function premise into the 1-zone as well: both premises of the
  // lower application become 1-unbalanced.
  NDNode& app = outer_application();
  const NDBinding y1{"y", oo, tri(1, 1, tau_)};
  app.children[0].env = {y1};
  app.children[0].triple = y1.triple;
  app.env = {y1, app.env.back()};
  app.kvalues = zeros();
  app.triple = tri(1, 1);
  auto result = check_nd(NDDerivation{types_, 2, app});
  EXPECT_FALSE(result.ok);
  EXPECT_NE(result.diagnostic.find("1-unbalanced"), std::string::npos) << result.diagnostic;
}

TEST_F(ZoneDerivation, WrongKValueFails) {
  outer_application().kvalues = zeros();
  EXPECT_FALSE(check_nd(*derivation_).ok);
}

TEST_F(ZoneDerivation, VariableCannotRaiseProductivity) {
  NDNode& app = outer_application();
  app.children[0].triple = tri(0, 0, tau_);
  EXPECT_FALSE(check_nd(*derivation_).ok);
}

TEST(CheckNDTest, ConstantIgnoringAnArgument) {
  // ⊢₂ b M e : (2,2,o), where b ignores its second argument.
  const Term bme = parse_term("b (" + test::example_text() + ") e");
  NDAnalysis inner = derive_nd(bme.fun().arg(), 2, Caps{}, true);
  ASSERT_FALSE(inner.materialized.empty());
  NDDerivation m = inner.materialized.front();
  ASSERT_EQ(m.root.triple, tri(2, 2));

  NDTypes& types = *m.types;
  const TypeId ignore = types.arrow(oo, {}, kAtomType);
  const TypeId b_type = types.arrow(parse_sort("o->o->o"), {tri(0, 0)}, ignore);
  const std::vector<std::uint64_t> zeros(3, 0);
  NDNode b{NDRule::constant, bme.fun().fun(), {}, tri(0, 0, b_type), zeros, {}};
  NDNode bm{NDRule::application, bme.fun(), {}, tri(2, 2, ignore), zeros, {b, m.root}};
  NDNode root{NDRule::application, bme, {}, tri(2, 2), zeros, {bm}};
  NDDerivation d{m.types, 2, root};
  auto result = check_nd(d);
  EXPECT_TRUE(result.ok) << result.diagnostic;
  EXPECT_EQ(nd_value_vector(d).back(), nd_value_vector(m).back());
}

TEST(MaxValueTest, SmallTerms) {
  EXPECT_EQ(max_nd_value(parse_term("e"), 0), std::optional<std::uint64_t>(0));
  EXPECT_EQ(max_nd_value(parse_term("a e"), 0), std::optional<std::uint64_t>(1));
  EXPECT_EQ(max_nd_value(parse_term("b (a e) (a (a e))"), 1), std::optional<std::uint64_t>(2));
}

TEST(MaxValueTest, AxiomDerivationVectors) {
  auto e = derive_nd(parse_term("e"), 0, Caps{}, true);
  ASSERT_EQ(e.materialized.size(), 1u);
  EXPECT_EQ(nd_value_vector(e.materialized[0]), (std::vector<std::uint64_t>{0}));
  auto ae = derive_nd(parse_term("a e"), 0, Caps{}, true);
  ASSERT_EQ(ae.materialized.size(), 1u);
  EXPECT_EQ(nd_value_vector(ae.materialized[0]), (std::vector<std::uint64_t>{1}));
  EXPECT_TRUE(check_nd(ae.materialized[0]).ok);
}

TEST(MaxValueTest, Example) {
  EXPECT_EQ(max_nd_value(test::example_term(), 2), std::optional<std::uint64_t>(5));
}

// The dynamic program against the maximum over every enumerated derivation.
TEST(MaxValueTest, AgreesWithEnumeration) {
  const std::vector<std::pair<std::string, int>> cases = {
      {test::example_text(), 2},
      {"(\\y:(o->o). " + test::kN + " (" + test::kN + " y) (a e)) a", 2},
      {"b (a e) (a (a e))", 1},
      {"(\\f:(o->o). f (f e)) (\\x:o. b (a x) (a x))", 1},
      {"(\\f:(o->o). f (f e)) (\\x:o. b (a x) (a x))", 2},
      {"(\\x:o. b x (a x)) (a e)", 1},
  };
  Caps caps;
  caps.max_materialize = 100'000;
  for (const auto& [text, m] : cases) {
    NDAnalysis a = derive_nd(parse_term(text), m, caps, true);
    ASSERT_EQ(a.materialized.size(), a.derivations) << text;
    std::uint64_t best = 0;
    for (const auto& d : a.materialized) {
      auto check = check_nd(d);
      ASSERT_TRUE(check.ok) << text << ": " << check.diagnostic;
      best = std::max(best, nd_value_vector(d).back());
    }
    ASSERT_TRUE(a.max_value.has_value()) << text;
    EXPECT_EQ(*a.max_value, best) << text;
    if (!a.materialized.empty()) EXPECT_EQ(nd_value_vector(a.materialized.front()).back(), best) << text;
  }
}

TEST(MaxValueTest, ExampleDerivationCount) {
  NDAnalysis a = derive_nd(test::example_term(), 2);
  EXPECT_EQ(a.derivations, 59u);
  EXPECT_EQ(a.max_value, std::optional<std::uint64_t>(5));
}

TEST(MaxValueTest, Preconditions) {
  EXPECT_THROW(max_nd_value(parse_term("\\x:o. x"), 1), PreconditionError);
  EXPECT_THROW(max_nd_value(parse_term("(x:o)"), 0), PreconditionError);
  EXPECT_THROW(max_nd_value(parse_term("(\\h:o->(o->o)->o. e) (\\x:o. \\f:o->o. f x)"), 2), PreconditionError);
  EXPECT_THROW(max_nd_value(test::example_term(), 0), PreconditionError);  // complexity 2 > m + 1
}

TEST(MaxValueTest, Caps) {
  Caps caps;
  caps.max_m = 1;
  EXPECT_THROW(max_nd_value(test::example_term(), 2, caps), CapacityError);
}

// Ignoring a productive argument would credit an a that vanishes from the normal form.
TEST(WeakeningTest, ProductiveArgumentsCannotBeIgnored) {
  const Term t = parse_term("(\\v1:o. (\\v2:(o->o->o). v1) (\\v3:o. a)) e");
  EXPECT_EQ(max_branch_a(test::normal_tree(t)), 0u);
  EXPECT_EQ(max_nd_value(t, 2), std::nullopt);
  EXPECT_EQ(max_nd_value(t, 2, Caps{}, NDTypes::Weakening::balanced), std::optional<std::uint64_t>(1));
}

TEST(WeakeningTest, PreservationUnderStep) {
  const Term t = parse_term("(\\v1:(o->o). e) a");
  const Term n = step(t, {});
  EXPECT_EQ(max_nd_value(t, 1), max_nd_value(n, 1));
  EXPECT_NE(max_nd_value(t, 1, Caps{}, NDTypes::Weakening::balanced),
            max_nd_value(n, 1, Caps{}, NDTypes::Weakening::balanced));
}

// A max-value derivation at order m survives one RMF(m+1) step with the same value.
TEST(PreservationTest, ExampleReducts) {
  Term t = test::example_term();
  auto before = max_nd_value(t, 1);
  ASSERT_TRUE(before.has_value());
  while (auto p = rmf_redex(t)) {
    if (redex_order(subterm_at(t, *p)) < 2) break;
    t = step(t, *p);
    EXPECT_EQ(max_nd_value(t, 1), before) << print_term(t);
  }
}

}  // namespace
}  // namespace lq
