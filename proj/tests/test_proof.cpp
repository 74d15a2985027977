#include <gtest/gtest.h>

#include "islkit/generator.hpp"
#include "islkit/parser.hpp"
#include "islkit/proof.hpp"

using namespace isl;

namespace {

CheckResult check(const char* text) { return check_derivation(parse_derivation(text)); }

}  // namespace

TEST(Proof, RuleNames) {
  for (int i = 0; i < kRuleCount; ++i) {
    auto r = static_cast<RuleName>(i);
    EXPECT_EQ(rule_from_string(to_string(r)), r);
  }
  EXPECT_EQ(primitive_rules().size(), static_cast<std::size_t>(kRuleCount - 1));
  EXPECT_FALSE(rule_from_string("Nope").has_value());
}

TEST(Proof, FreeAxiom) {
  EXPECT_TRUE(check("(Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ])").ok);
  EXPECT_TRUE(check("(FreeEr [ x == null ] free(x) [ er: x == null ])").ok);
  EXPECT_FALSE(check("(Free [ x != null * x -> null ] free(x) [ ok: x -> null ])").ok);
}

TEST(Proof, SkipHasNoErrorExit) {
  CheckResult r = check("(Skip [ x -> null ] skip [ er: x -> null ])");
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.rule, RuleName::Skip);
  EXPECT_TRUE(check("(Skip [ x -> null ] skip [ er: false ])").ok);
}

TEST(Proof, FrameOk) {
  EXPECT_TRUE(check(R"((FrameOk [ x -> null * x != null * y -> null ] free(x) [ ok: x -/> * x != null * y -> null ] @frame(y -> null)
    (Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ])))")
                  .ok);
  CheckResult er = check_step(parse_derivation(R"((FrameOk [ emp * x -> null ] free(x) [ er: emp * x -> null ] @frame(x -> null)
    (Cons [ emp ] free(x) [ er: emp ])))"));
  EXPECT_FALSE(er.ok);
  EXPECT_NE(er.message.find("ok only"), std::string::npos) << er.message;
}

TEST(Proof, FrameMustNotTouchModifiedVariables) {
  EXPECT_FALSE(check(R"((FrameOk [ x -> null * y == x ] x := null [ ok: x == null * y == x ] @frame(y == x)
    (Assign [ x -> null ] x := null [ ok: x == null ])))")
                   .ok);
}

TEST(Proof, ConsRequiresEntailments) {
  EXPECT_TRUE(check(R"((Cons [ x -> null ] free(x) [ ok: x -/> ]
    (Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ])))")
                  .ok);
  CheckResult r = check(R"((Cons [ x -> null ] free(x) [ ok: x -> null ]
    (Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ])))");
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.rule, RuleName::Cons);
}

TEST(Proof, ViolationPathPointsAtPremise) {
  CheckResult r = check(R"((Seq2 [ x != null * x -> null ] free(x) ; skip [ ok: x != null * x -/> ]
    (Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ])
    (Skip [ x != null * x -/> ] skip [ ok: x -/> ])))");
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.path, "1");
  EXPECT_EQ(r.rule, RuleName::Skip);
}

TEST(Proof, ParsePrintRoundTrip) {
  const char* text = R"((FrameOk [ x -> null * x != null * y -> null ] free(x) [ ok: x -/> * x != null * y -> null ] @frame(y -> null)
  (Free [ x != null * x -> null ] free(x) [ ok: x != null * x -/> ] @alias(x))))";
  DerivationNode d = parse_derivation(text);
  EXPECT_EQ(d.rule, RuleName::FrameOk);
  ASSERT_EQ(d.premises.size(), 1u);
  EXPECT_EQ(derivation_size(d), 2u);
  std::string printed = to_string(d);
  EXPECT_EQ(to_string(parse_derivation(printed)), printed);
  EXPECT_THROW(parse_derivation("(Frob [ emp ] skip [ ok: emp ])"), ParseError);
  EXPECT_ANY_THROW(parse_derivation("(Skip [ emp ] skip [ ok: emp ]"));
}

TEST(Proof, BackwardsVariantExpands) {
  DerivationNode bv = parse_derivation(R"((BackwardsVariant [ x -> null ] star { skip } [ ok: x -> null ] @bound(1)
    (Skip [ x -> null ] skip [ ok: x -> null ])))");
  EXPECT_TRUE(check_derivation(bv).ok);
  DerivationNode e = expand_backwards_variant(bv);
  EXPECT_FALSE(is_derived(e.rule));
  EXPECT_TRUE(check_derivation(e).ok);
}

TEST(Proof, SynthesizedDerivationsCheck) {
  GenConfig gc;
  gc.allow_star = false;
  for (int i = 0; i < 100; ++i) {
    Generator g(31 + static_cast<std::uint64_t>(i), gc);
    Assertion p = g.assertion();
    CommandPtr c = g.command();
    Exit e = g.exit();
    DerivationNode d = synthesize_derivation(p, c, e);
    EXPECT_TRUE(same_assertion(d.conclusion.post, wpo(p, c, e)));
    CheckResult r = check_derivation(d);
    ASSERT_TRUE(r.ok) << to_string(p) << " ; " << to_string(c) << " at " << r.path << ": " << r.message;
  }
}

TEST(Proof, SynthesizedLoopDerivation) {
  Assertion p = parse_assertion("x -> y * y -> null");
  CommandPtr c = parse_program("star { x := [x] }");
  for (Exit e : {Exit::Ok, Exit::Er}) {
    DerivationNode d = synthesize_derivation(p, c, e);
    CheckResult r = check_derivation(d);
    EXPECT_TRUE(r.ok) << r.path << ": " << r.message;
  }
}

TEST(Proof, SameAssertion) {
  EXPECT_TRUE(same_assertion(parse_assertion("exists u. x -> u * emp"), parse_assertion("exists w. x -> w")));
  EXPECT_FALSE(same_assertion(parse_assertion("x -> y \\/ x -> y"), parse_assertion("x -> y")));
  EXPECT_TRUE(same_disjunct_set(parse_assertion("x -> y \\/ x -> y"), parse_assertion("x -> y")));
}

TEST(Proof, RuleSuiteSmall) {
  SuiteOptions o;
  o.seed = 3;
  for (const RuleTally& t : run_rule_suite(o, 20)) {
    EXPECT_EQ(t.unsound, 0) << to_string(t.rule) << ": " << t.first_unsound;
    EXPECT_GT(t.accepted, 0) << to_string(t.rule);
  }
}
