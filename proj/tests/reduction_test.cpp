#include <gtest/gtest.h>

#include "lq/errors.hpp"
#include "lq/reduction.hpp"
#include "lq/syntax.hpp"
#include "lq/tree_metrics.hpp"
#include "support.hpp"

namespace lq {
namespace {

using S = Selector;

TEST(SubstituteTest, Variable) {
  Term x = parse_term("(x:o)");
  EXPECT_EQ(print_term(substitute(x, "x", parse_term("e"))), "e");
}

TEST(SubstituteTest, AvoidsCapture) {
  // (\y:o. x)[y/x] must not capture the free y.
  Term body = parse_term("\\y:o. (x:o)");
  Term value = parse_term("(y:o)");
  Term out = substitute(body, "x", value);
  ASSERT_TRUE(out.is_lambda());
  EXPECT_NE(out.name(), "y");
  EXPECT_TRUE(out.body().is_variable());
  EXPECT_EQ(out.body().name(), "y");
  EXPECT_TRUE(occurs_free(out, "y"));
}

TEST(SubstituteTest, ShadowedBinderUntouched) {
  Term body = parse_term("\\x:o. (x:o)");
  EXPECT_TRUE(alpha_equal(substitute(body, "x", parse_term("e")), body));
}

TEST(SubstituteTest, ExampleBody) {
  Term body = parse_term("(y:o->o) (y (x:o))");
  Term out = substitute(body, "y", parse_term("a"));
  EXPECT_EQ(print_term(out), "a (a (x:o))");
}

TEST(SubstituteTest, SortMismatch) {
  EXPECT_THROW(substitute(parse_term("(x:o)"), "x", parse_term("a")), SortError);
}

TEST(RedexTest, OutermostRedexes) {
  EXPECT_TRUE(outermost_redexes(parse_term("e")).empty());
  auto one = outermost_redexes(parse_term("(\\x:o. x) e"));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(one[0].empty());
  auto two = outermost_redexes(parse_term("b ((\\x:o. x) e) ((\\x:o. x) e)"));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(path_str(two[0]), "/f/a");
  EXPECT_EQ(path_str(two[1]), "/a");
}

TEST(RedexTest, OrderIsTheLambdaOrder) {
  EXPECT_EQ(redex_order(parse_term("(\\x:o. x) e")), 1);
  EXPECT_EQ(redex_order(test::example_term()), 2);
  EXPECT_EQ(redex_order(parse_term("(\\f:(o->o)->o. f a) (\\g:o->o. g e)")), 3);
}

TEST(RmfTest, NormalFormHasNone) { EXPECT_FALSE(rmf_redex(parse_term("b e (a e)")).has_value()); }

TEST(RmfTest, ArgumentMustBeFreeOfSameOrderRedexes) {
  auto p = rmf_redex(parse_term("(\\x:o. x) ((\\y:o. y) e)"));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(path_str(*p), "/a");
}

TEST(RmfTest, PrefersHigherOrder) {
  // The order-2 redex outranks the order-1 redex to its right.
  auto p = rmf_redex(parse_term("b ((\\f:o->o. f e) a) ((\\x:o. x) e)"));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(path_str(*p), "/f/a");
}

TEST(RmfTest, RightmostAmongEqualOrders) {
  auto p = rmf_redex(parse_term("b ((\\x:o. x) e) ((\\x:o. x) e)"));
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(path_str(*p), "/a");
}

TEST(RmfTest, NotInsideAnotherBodyOfSameOrder) {
  // The inner redex sits in the body of the outer order-1 redex.
  auto p = rmf_redex(parse_term("(\\x:o. (\\z:o. z) x) e"));
  ASSERT_TRUE(p.has_value());
  EXPECT_TRUE(p->empty());
}

TEST(RmfTest, ExampleFirstStep) {
  Term m = test::example_term();
  auto p = rmf_redex(m);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(path_str(*p), "/");
  Term next = step(m, *p);
  // y was replaced by a.
  EXPECT_EQ(count_constant(next, "a"), 2u);
  EXPECT_FALSE(occurs_free(next, "y"));
  EXPECT_EQ(next.sort(), Sort());
  EXPECT_TRUE(next.fun().is_application());
}

TEST(StepTest, Basics) {
  EXPECT_EQ(print_term(step(parse_term("(\\x:o. x) e"), {})), "e");
  EXPECT_EQ(print_term(step(parse_term("(\\x:o. b x x) (a e)"), {})), "b (a e) (a e)");
  EXPECT_THROW(step(parse_term("a e"), {}), std::invalid_argument);
  EXPECT_THROW(step(parse_term("a e"), {S::arg, S::arg}), std::out_of_range);
}

TEST(SubtermTest, Paths) {
  Term u = parse_term("b (a e) e");
  EXPECT_EQ(print_term(subterm_at(u, {S::fun, S::arg})), "a e");
  EXPECT_EQ(path_str({}), "/");
  EXPECT_EQ(path_str({S::fun, S::body, S::arg}), "/f/b/a");
}

TEST(NormalizeTest, Basics) {
  auto n0 = normalize(parse_term("e"), Strategy::rmf);
  EXPECT_EQ(print_term(n0.normal_form), "e");
  EXPECT_EQ(n0.steps, 0u);
  auto n1 = normalize(parse_term("(\\x:o. x) e"), Strategy::oi);
  EXPECT_EQ(print_term(n1.normal_form), "e");
  EXPECT_EQ(n1.steps, 1u);
}

TEST(NormalizeTest, ExampleHasNineA) {
  Term m = test::example_term();
  auto rmf = normalize(m, Strategy::rmf);
  auto oi = normalize(m, Strategy::oi);
  EXPECT_EQ(count_constant(rmf.normal_form, "a"), 9u);
  EXPECT_TRUE(alpha_equal(rmf.normal_form, oi.normal_form));
  EXPECT_EQ(serialize(to_tree(rmf.normal_form)), "a(a(a(a(a(a(a(a(a(e)))))))))");
}

TEST(NormalizeTest, RmfOrdersNonIncreasing) {
  NormalizeOptions options;
  options.trace = true;
  auto n = normalize(test::example_term(), Strategy::rmf, options);
  ASSERT_EQ(n.trace.size(), n.steps);
  for (std::size_t i = 1; i < n.trace.size(); ++i) EXPECT_LE(n.trace[i].order, n.trace[i - 1].order);
  EXPECT_EQ(n.trace.front().order, 2);
  EXPECT_EQ(n.trace.back().order, 1);
  EXPECT_NE(format_trace(n.trace).find("1 2 /"), std::string::npos);
}

TEST(NormalizeTest, StepBudget) {
  NormalizeOptions options;
  options.step_budget = 3;
  EXPECT_THROW(normalize(test::example_term(), Strategy::oi, options), CapacityError);
}

TEST(ToTreeTest, Shapes) {
  EXPECT_EQ(to_tree(parse_term("e")), (Tree{"e", {}}));
  EXPECT_EQ(to_tree(parse_term("a e")), (Tree{"a", {Tree{"e", {}}}}));
  EXPECT_EQ(serialize(to_tree(parse_term("b (a e) e"))), "b(a(e),e)");
  EXPECT_THROW(to_tree(parse_term("\\x:o. x")), PreconditionError);
  EXPECT_THROW(to_tree(parse_term("(\\x:o. x) e")), PreconditionError);
}

}  // namespace
}  // namespace lq
