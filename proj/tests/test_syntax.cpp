#include <gtest/gtest.h>

#include "islkit/parser.hpp"
#include "islkit/syntax.hpp"

using namespace isl;

namespace {

Var x("x"), y("y"), z("z");

}  // namespace

TEST(Syntax, PureAtomsAreOrientationFree) {
  EXPECT_EQ(Atom::eq(x, y), Atom::eq(y, x));
  EXPECT_EQ(Atom::neq(Term::null(), x), Atom::neq(x, Term::null()));
  EXPECT_NE(Atom::eq(x, y), Atom::neq(x, y));
  EXPECT_EQ(Atom::eq(x, y).negated(), Atom::neq(x, y));
}

TEST(Syntax, HeapIsAMultiset) {
  SymbolicHeap a({Atom::points_to(x, y), Atom::eq(x, z)});
  SymbolicHeap b({Atom::eq(z, x), Atom::points_to(x, y)});
  EXPECT_EQ(a, b);
  SymbolicHeap twice({Atom::points_to(x, y), Atom::points_to(x, y)});
  EXPECT_EQ(twice.cell_count(), 2u);
  EXPECT_NE(twice, SymbolicHeap({Atom::points_to(x, y)}));
}

TEST(Syntax, NormalizedDropsEmpAndTautologies) {
  SymbolicHeap h({Atom::emp(), Atom::eq(x, x), Atom::neq(x, y), Atom::neq(y, x)});
  EXPECT_EQ(h.normalized(), SymbolicHeap({Atom::neq(x, y)}));
}

TEST(Syntax, FreeAndModifiedVariables) {
  auto c = parse_program("local z { z := [x] ; y := z }");
  EXPECT_EQ(fv(*c), (VarSet{x, y}));
  EXPECT_EQ(mod_of(*c), (VarSet{y}));
  auto q = parse_assertion("exists u. x -> u * u != y");
  EXPECT_EQ(fv(q), (VarSet{x, y}));
}

TEST(Syntax, SubstitutionIntoCellSourceWithNullThrows) {
  Atom a = Atom::points_to(x, y);
  EXPECT_THROW(subst(a, x, Term::null()), SubstitutionError);
  EXPECT_EQ(subst(a, y, Term::null()), Atom::points_to(x, Term::null()));
}

TEST(Syntax, SubstitutionAvoidsCapture) {
  QuantifiedHeap q = parse_assertion("exists u. x -> u").disjuncts[0];
  QuantifiedHeap r = subst(q, x, Term(Var("u")));
  ASSERT_EQ(r.binders.size(), 1u);
  EXPECT_NE(r.binders[0], Var("u"));
  EXPECT_EQ(fv(r), (VarSet{Var("u")}));
}

TEST(Syntax, AlphaEquivalenceOfQuantifiedHeaps) {
  auto a = parse_assertion("exists u. x -> u * u != null");
  auto b = parse_assertion("exists w. x -> w * null != w");
  auto c = parse_assertion("exists w. x -> w * x != null");
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(Syntax, FreshVarSkipsTakenNames) {
  Var f = fresh_var(x, VarSet{x, Var("x'")});
  EXPECT_NE(f, x);
  EXPECT_NE(f, Var("x'"));
}

TEST(Syntax, DesugarProducesCore) {
  auto c = parse_program("if (x == y) { free(x) } else { skip } ; while (x != null) { x := [x] } ; assert(x == null) ; y := malloc()");
  EXPECT_FALSE(is_core(*c));
  auto d = desugar(c);
  EXPECT_TRUE(is_core(*d));
  EXPECT_TRUE(has_star(*d));
  EXPECT_EQ(alloc_count(*d), 1);
  EXPECT_EQ(to_string(desugar(parse_program("while (x != null) { free(x) }"))),
            "star { assume(x != null) ; free(x) } ; assume(x == null)");
}

TEST(Syntax, AlphaEquivalentCommandsUpToLocalBinder) {
  auto a = parse_program("local z { z := x ; free(z) }");
  auto b = parse_program("local w { w := x ; free(w) }");
  auto c = parse_program("local w { w := x ; free(x) }");
  EXPECT_TRUE(alpha_equivalent(*a, *b));
  EXPECT_FALSE(alpha_equivalent(*a, *c));
}

TEST(Syntax, CommandDepth) {
  EXPECT_EQ(command_depth(*parse_program("skip")), 1);
  EXPECT_EQ(command_depth(*parse_program("skip ; skip")), 2);
  EXPECT_EQ(command_depth(*parse_program("star { skip ; free(x) }")), 3);
}
