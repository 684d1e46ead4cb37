#include <gtest/gtest.h>

#include "lq/errors.hpp"
#include "lq/signature.hpp"
#include "lq/sort.hpp"
#include "lq/syntax.hpp"
#include "lq/term.hpp"
#include "support.hpp"

namespace lq {
namespace {

const Sort o;
const Sort oo = Sort::arrow(o, o);

TEST(SortTest, Orders) {
  EXPECT_EQ(o.order(), 0);
  EXPECT_EQ(oo.order(), 1);
  EXPECT_EQ(parse_sort("(o->o)->o->o").order(), 2);
  EXPECT_EQ(parse_sort("((o->o)->o)->o").order(), 3);
  EXPECT_EQ(parse_sort("o->o->o").order(), 1);
}

TEST(SortTest, ArrowIsRightAssociative) {
  EXPECT_EQ(parse_sort("o->o->o"), Sort::arrow(o, oo));
  EXPECT_EQ(parse_sort("(o->o)->o"), Sort::arrow(oo, o));
  EXPECT_EQ(Sort::function({oo, o}), parse_sort("(o->o)->o->o"));
  EXPECT_EQ(parse_sort("(o->o)->o->o").arity(), 2);
}

TEST(SortTest, PrintRoundTrip) {
  for (const char* text : {"o", "o->o", "(o->o)->o", "(o->o)->o->o", "((o->o)->o)->o->o"}) {
    EXPECT_EQ(parse_sort(text).str(), text);
  }
}

// ord(α→β) always exceeds ord(α); it is ord(β) exactly when ord(β) > ord(α).
TEST(SortTest, ArrowOrderLaw) {
  const std::vector<Sort> sorts = {o, oo, parse_sort("o->o->o"), parse_sort("(o->o)->o"),
                                   parse_sort("((o->o)->o)->o")};
  for (const Sort& a : sorts) {
    for (const Sort& b : sorts) {
      const Sort ab = Sort::arrow(a, b);
      EXPECT_GE(ab.order(), 1);
      EXPECT_GT(ab.order(), a.order());
      EXPECT_EQ(ab.order() == b.order(), b.order() > a.order()) << ab.str();
    }
  }
}

TEST(SortTest, Homogeneity) {
  EXPECT_TRUE(parse_sort("(o->o)->o->o").is_homogeneous());
  EXPECT_FALSE(parse_sort("o->(o->o)->o").is_homogeneous());
  EXPECT_FALSE(parse_sort("(o->(o->o)->o)->o").is_homogeneous());
}

TEST(ParseTest, Constant) {
  Term e = parse_term("e");
  EXPECT_TRUE(e.is_constant());
  EXPECT_EQ(e.name(), "e");
  EXPECT_EQ(e.sort(), o);
}

TEST(ParseTest, LambdaAppliedToConstant) {
  Term t = parse_term("(\\y:(o->o). y e) a");
  ASSERT_TRUE(t.is_redex());
  EXPECT_EQ(t.sort(), o);
  EXPECT_EQ(t.arg().name(), "a");
  EXPECT_TRUE(is_closed(t));
}

TEST(ParseTest, ExampleTerm) {
  Term m = test::example_term();
  EXPECT_EQ(m.sort(), o);
  EXPECT_EQ(complexity(m), 2);
  EXPECT_TRUE(is_homogeneous(m));
  EXPECT_TRUE(free_vars(m).empty());
  EXPECT_EQ(count_constant(m, "a"), 2u);
}

TEST(ParseTest, Comments) {
  Term t = parse_term("-- leading\nb e -- trailing\n  (a e)");
  EXPECT_EQ(print_term(t), "b e (a e)");
}

TEST(ParseTest, SortErrors) {
  EXPECT_THROW(parse_term("a a"), SortError);
  EXPECT_THROW(parse_term("e e"), SortError);
  EXPECT_THROW(parse_term("(\\x:o. x) a"), SortError);
}

TEST(ParseTest, SyntaxErrors) {
  EXPECT_THROW(parse_term(""), ParseError);
  EXPECT_THROW(parse_term("(a e"), ParseError);
  EXPECT_THROW(parse_term("\\x o. x"), ParseError);
  EXPECT_THROW(parse_term("x"), ParseError);  // free variable without a sort
  EXPECT_THROW(parse_sort("o->"), ParseError);
  try {
    parse_term("a )");
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 2u);
  }
}

TEST(ParseTest, FreeVariableAnnotation) {
  Term t = parse_term("(y:o->o) ((y) (x:o))");
  auto fv = free_vars(t);
  ASSERT_EQ(fv.size(), 2u);
  EXPECT_EQ(fv.at("y"), oo);
  EXPECT_EQ(fv.at("x"), o);
  EXPECT_FALSE(is_closed(t));
  EXPECT_THROW(parse_term("(x:o) (x:o->o)"), SortError);
}

TEST(PrintTest, Basics) {
  EXPECT_EQ(print_term(parse_term("e")), "e");
  EXPECT_EQ(print_term(Term::lambda("x", o, Term::variable("x", o))), "\\x:o. x");
  EXPECT_EQ(print_term(parse_term("b (a e) ((\\x:o. x) e)")), "b (a e) ((\\x:o. x) e)");
}

TEST(PrintTest, RoundTrip) {
  for (const std::string& text :
       {test::example_text(), std::string("\\f:(o->o)->o. f (\\x:o. b x x)"), std::string("(y:o->o) (a (y e))"),
        std::string("(\\x:o. \\x:o. x) e")}) {
    Term t = parse_term(text);
    EXPECT_TRUE(alpha_equal(parse_term(print_term(t)), t)) << text;
  }
}

TEST(TermTest, SortOf) {
  EXPECT_EQ(sort_of(parse_term("a")), oo);
  EXPECT_EQ(sort_of(parse_term("\\x:o. x")), oo);
  EXPECT_EQ(sort_of(parse_term("b")), parse_sort("o->o->o"));
}

TEST(TermTest, Complexity) {
  EXPECT_EQ(complexity(parse_term("e")), 0);
  EXPECT_EQ(complexity(parse_term("a e")), 1);
  EXPECT_EQ(complexity(parse_term("(\\f:(o->o)->o. f a) (\\g:o->o. g e)")), 3);
}

TEST(TermTest, Homogeneity) {
  EXPECT_TRUE(is_homogeneous(parse_term("e")));
  Term bad = parse_term("\\x:o. \\f:o->o. f x");  // o→(o→o)→o
  EXPECT_FALSE(is_homogeneous(bad));
  EXPECT_FALSE(is_homogeneous(parse_term("(\\h:o->(o->o)->o. e) (\\x:o. \\f:o->o. f x)")));
}

TEST(TermTest, ApplySortChecks) {
  Term a = Term::constant("a", oo);
  Term e = Term::constant("e", o);
  EXPECT_EQ(Term::apply(a, e).sort(), o);
  EXPECT_THROW(Term::apply(a, a), SortError);
  EXPECT_THROW(Term::apply(e, e), SortError);
  Term b = Term::constant("b", parse_sort("o->o->o"));
  EXPECT_EQ(Term::apply(b, {e, Term::apply(a, e)}).size(), 7u);
}

TEST(TermTest, FreeVariables) {
  EXPECT_TRUE(free_vars(parse_term("\\x:o. x")).empty());
  auto fv = free_vars(parse_term("\\z:o. (y:o->o) (x:o)"));
  EXPECT_EQ(fv.size(), 2u);
  EXPECT_TRUE(occurs_free(parse_term("(y:o->o) e"), "y"));
  EXPECT_FALSE(occurs_free(parse_term("\\y:o->o. y e"), "y"));
}

TEST(TermTest, AlphaEquality) {
  EXPECT_TRUE(alpha_equal(parse_term("\\x:o. x"), parse_term("\\z:o. z")));
  EXPECT_FALSE(alpha_equal(parse_term("\\x:o. \\y:o. x"), parse_term("\\x:o. \\y:o. y")));
  EXPECT_FALSE(alpha_equal(parse_term("\\x:o. x"), parse_term("\\x:o. e")));
  EXPECT_FALSE(alpha_equal(parse_term("(x:o)"), parse_term("(y:o)")));
  EXPECT_EQ(nameless_key(parse_term("\\x:o. \\y:o. b x y")), nameless_key(parse_term("\\p:o. \\q:o. b p q")));
  EXPECT_NE(nameless_key(parse_term("\\x:o. \\y:o. b x y")), nameless_key(parse_term("\\p:o. \\q:o. b q p")));
}

TEST(SignatureTest, Standard) {
  const auto& sig = Signature::standard();
  ASSERT_NE(sig.find("a"), nullptr);
  EXPECT_EQ(sig.find("a")->sort, oo);
  EXPECT_EQ(sig.find("b")->sort, parse_sort("o->o->o"));
  EXPECT_EQ(sig.find("e")->sort, o);
  EXPECT_EQ(sig.find("c"), nullptr);
  EXPECT_EQ(Signature::binary_a().find("a")->sort, parse_sort("o->o->o"));
}

TEST(SignatureTest, RejectsHigherOrderConstants) {
  EXPECT_THROW(Signature({{"c", parse_sort("(o->o)->o")}}), std::invalid_argument);
  EXPECT_THROW(Signature({{"c", o}, {"c", oo}}), std::invalid_argument);
}

}  // namespace
}  // namespace lq
