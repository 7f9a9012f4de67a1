#include <atlapprox/formula.hpp>
#include <atlapprox/parser.hpp>

#include "support/corpus.hpp"

#include <gtest/gtest.h>

using namespace atlapprox;

TEST(Parser, Atom)
{
  const Formula g = parse("p");
  EXPECT_EQ(g->op, Op::atom);
  EXPECT_EQ(g->name, "p");
}

TEST(Parser, CoercionFormula)
{
  const Formula g = parse("<<c>> G ((finish1 & !pun1) -> vote1_1)");
  const Formula want = f::always(
    {"c"}, f::implies(f::and_(f::atom("finish1"), f::not_(f::atom("pun1"))), f::atom("vote1_1")));
  EXPECT_TRUE(equal(g, want)) << to_string(g);
}

TEST(Parser, FixpointWithSteadfast)
{
  const Formula g = parse("mu Z . (K 1 p | <1>* Z)");
  const Formula want =
    f::mu("Z", f::or_(f::know("1", f::atom("p")), f::steadfast({"1"}, f::var("Z"), Neighborhood::C)));
  EXPECT_TRUE(equal(g, want)) << to_string(g);
}

TEST(Parser, Precedence)
{
  // unary > & > | > ->, and -> is right associative
  EXPECT_TRUE(equal(parse("!p & q | r -> s -> t"),
                    f::implies(f::or_(f::and_(f::not_(f::atom("p")), f::atom("q")), f::atom("r")),
                               f::implies(f::atom("s"), f::atom("t")))));
  EXPECT_TRUE(equal(parse("K a p & q"), f::and_(f::know("a", f::atom("p")), f::atom("q"))));
  EXPECT_TRUE(equal(parse("<<a>> X p & q"),
                    f::and_(f::next({"a"}, f::atom("p")), f::atom("q"))));
}

TEST(Parser, StrategicForms)
{
  EXPECT_TRUE(equal(parse("<<a,b>>_IR F p"), f::eventually({"a", "b"}, f::atom("p"), Semantics::IR)));
  EXPECT_TRUE(equal(parse("<<a>> (p U q)"), f::until({"a"}, f::atom("p"), f::atom("q"))));
  EXPECT_TRUE(equal(parse("<<a>> p U q"), f::until({"a"}, f::atom("p"), f::atom("q"))));
  EXPECT_TRUE(equal(parse("<<a>> (p) U q"), f::until({"a"}, f::atom("p"), f::atom("q"))));
  EXPECT_TRUE(equal(parse("<<>> F p"), f::eventually({}, f::atom("p"))));
  EXPECT_TRUE(equal(parse("<<a>> F (p & q)"), f::eventually({"a"}, f::and_(f::atom("p"), f::atom("q")))));
  EXPECT_TRUE(equal(parse("E {a,b} p"), f::everybody({"a", "b"}, f::atom("p"))));
  EXPECT_TRUE(equal(parse("C a p"), f::common({"a"}, f::atom("p"))));
  EXPECT_TRUE(equal(parse("<a,b>~ p"), f::steadfast({"a", "b"}, f::atom("p"), Neighborhood::E)));
  EXPECT_TRUE(equal(parse("<> p"), f::diamond({}, f::atom("p"))));
}

TEST(Parser, CoalitionsAreSortedSets)
{
  EXPECT_TRUE(equal(parse("<<b,a,b>> X p"), parse("<<a,b>> X p")));
}

TEST(Parser, VariablesVersusAtoms)
{
  const Formula g = parse("mu Z . (Z | Y)");
  EXPECT_EQ(g->lhs->lhs->op, Op::var);
  EXPECT_EQ(g->lhs->rhs->op, Op::atom);
  const Formula h = parse("Z | Y", {"Y"});
  EXPECT_EQ(h->lhs->op, Op::atom);
  EXPECT_EQ(h->rhs->op, Op::var);
}

TEST(Parser, ErrorsCarryPosition)
{
  try
    {
      parse("p &\n  & q");
      FAIL() << "expected a parse error";
    }
  catch (const ParseError& e)
    {
      EXPECT_EQ(e.line(), 2u);
      EXPECT_EQ(e.column(), 3u);
    }
  EXPECT_THROW(parse("G p"), ParseError);
  EXPECT_THROW(parse("<<a>> p"), ParseError);
  EXPECT_THROW(parse("(p"), ParseError);
  EXPECT_THROW(parse("p q"), ParseError);
  EXPECT_THROW(parse("p $ q"), ParseError);
  EXPECT_THROW(parse("mu . p"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Printer, CanonicalText)
{
  EXPECT_EQ(to_string(parse("<<c>> G ((finish1 & !pun1) -> vote1_1)")),
            "<<c>> G ((finish1 & !pun1) -> vote1_1)");
  EXPECT_EQ(to_string(parse("mu Z . (K 1 p | <1>* Z)")), "mu Z . (K 1 p | <1>* Z)");
  EXPECT_EQ(to_string(parse("<<a,b>>_IR (p U q)")), "<<a,b>>_IR (p U q)");
}

// print then parse gives back the same tree, on random formulas
TEST(Printer, RoundTrip)
{
  Rng r(3);
  for (int i = 0; i < 500; ++i)
    {
      Formula g = corpus::formula(r, 2);
      if (i % 3 == 0)
        g = f::nu("Z", f::and_(f::common({"1"}, g), f::steadfast({"1", "2"}, f::var("Z"), i % 2 ? Neighborhood::C : Neighborhood::E)));
      if (i % 5 == 0)
        g = f::implies(f::know("2", g), f::diamond({}, f::top()));
      const std::string text = to_string(g);
      const Formula back = parse(text);
      EXPECT_TRUE(equal(g, back)) << text;
      EXPECT_EQ(to_string(back), text);
    }
}

TEST(Structure, FreeVariablesAndAtoms)
{
  const Formula g = parse("mu Z . (Z | <a> (Y & p))", {"Y"});
  EXPECT_EQ(free_variables(g), std::set<std::string>{"Y"});
  EXPECT_FALSE(is_closed(g));
  EXPECT_EQ(atoms(g), std::set<std::string>{"p"});
  EXPECT_TRUE(is_closed(parse("nu Y . mu Z . (Y & Z)")));
}

TEST(Structure, AlphaEquivalence)
{
  EXPECT_TRUE(alpha_equivalent(parse("mu Z . (p | <a> Z)"), parse("mu W . (p | <a> W)")));
  EXPECT_FALSE(equal(parse("mu Z . (p | <a> Z)"), parse("mu W . (p | <a> W)")));
  EXPECT_FALSE(alpha_equivalent(parse("mu Z . (p | <a> Z)"), parse("nu Z . (p | <a> Z)")));
  EXPECT_FALSE(alpha_equivalent(parse("mu Z . mu W . (Z | W)"), parse("mu Z . mu W . (W | W)")));
}

TEST(WellFormed, Positivity)
{
  EXPECT_TRUE(is_positive(parse("mu Z . (p | <a> Z)")));
  EXPECT_TRUE(is_positive(parse("mu Z . !!Z")));
  EXPECT_FALSE(is_positive(parse("mu Z . !Z")));
  EXPECT_FALSE(is_positive(parse("mu Z . (Z -> p)")));
  EXPECT_TRUE(is_positive(parse("mu Z . (!Z -> p)")));
  // inner rebinding shadows
  EXPECT_TRUE(is_positive(parse("mu Z . !(nu Z . Z)")));
}

TEST(WellFormed, AlternationFree)
{
  EXPECT_TRUE(check_alternation_free(parse("mu Z . (p | <A> Z)")));
  EXPECT_FALSE(check_alternation_free(parse("mu Z . nu Y . (Z & Y)")));
  // Y is bound by the outer nu and used inside the mu: alternation depth 2
  EXPECT_FALSE(check_alternation_free(parse("nu Y . mu Z . ((p & Y) | <A> Z)")));
  // nested fixpoints of one kind, or independent ones, are fine
  EXPECT_TRUE(check_alternation_free(parse("nu Y . (nu Z . (Y & Z) & mu W . (p | <A> W))")));
  // negation swaps the kind: !mu Z.!(...) is a greatest fixpoint
  EXPECT_TRUE(check_alternation_free(parse("nu Y . !(mu Z . !(Y & Z))")));
  EXPECT_FALSE(check_alternation_free(parse("nu Y . !(nu Z . !(Y & Z))")));
}

TEST(WellFormed, Fragments)
{
  EXPECT_TRUE(is_atl_ir(parse("<<a>> F p & !<<>> X K a q")));
  EXPECT_FALSE(is_atl_ir(parse("<<a>>_IR F p")));
  EXPECT_TRUE(is_atl(parse("<<a>>_IR F p")));
  EXPECT_FALSE(is_atl(parse("mu Z . (p | <a> Z)")));
  EXPECT_FALSE(is_atl(parse("<a>* p")));
}
