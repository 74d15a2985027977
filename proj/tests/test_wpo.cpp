#include <gtest/gtest.h>

#include "islkit/difftest.hpp"
#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"
#include "islkit/wpo.hpp"

using namespace isl;

namespace {

bool equivalent(const Assertion& a, const Assertion& b) { return entails(a, b).holds() && entails(b, a).holds(); }

std::string w(const char* p, const char* c, Exit e, WpoConfig cfg = {}) {
  return to_string(wpo(parse_assertion(p), parse_program(c), e, cfg));
}

}  // namespace

TEST(Wpo, FreeRows) {
  EXPECT_EQ(w("x == y * x != null * y != null * y -> null", "free(x)", Exit::Ok),
            "x == y * x != null * y != null * y -/>");
  EXPECT_EQ(w("x != y * x != null * y != null * y -> null", "free(x)", Exit::Er),
            "x != y * x != null * y != null * y -> null");
  EXPECT_EQ(w("x != y * x != null * y != null * y -> null", "free(x)", Exit::Ok), "false");
}

TEST(Wpo, SkipAndError) {
  EXPECT_EQ(w("x -> y", "skip", Exit::Er), "false");
  EXPECT_EQ(w("x -> y", "error", Exit::Ok), "false");
  EXPECT_TRUE(equivalent(parse_assertion(w("x -> y", "error", Exit::Er)), parse_assertion("x -> y")));
}

TEST(Wpo, AssignIntroducesBinder) {
  Assertion r = wpo(parse_assertion("x -> y"), parse_program("x := null"), Exit::Ok);
  EXPECT_TRUE(entails(r, parse_assertion("exists u. u -> y * x == null")).holds());
  EXPECT_TRUE(entails(parse_assertion("exists u. u -> y * x == null"), r).holds());
}

TEST(Wpo, LocalHidesVariable) {
  Assertion r = wpo(parse_assertion("emp"), parse_program("local z { z := alloc() }"), Exit::Ok);
  EXPECT_TRUE(entails(r, parse_assertion("exists u v. u -> v")).holds());
  EXPECT_TRUE(entails(parse_assertion("exists u v. u -> v"), r).holds());
}

TEST(Wpo, RejectsNonCanonicalHeapForHeapCommands) {
  EXPECT_THROW(wpo_sh(parse_assertion("y -> null").disjuncts[0].body, parse_program("free(x)"), Exit::Ok),
               NotCanonical);
}

TEST(Wpo, StarFixpointDetected) {
  WpoStats st;
  Assertion r = wpo(parse_assertion("x -> null"), parse_program("star { skip }"), Exit::Ok, {}, &st);
  EXPECT_EQ(st.stars, 1);
  EXPECT_EQ(st.fixpoints, 1);
  EXPECT_TRUE(equivalent(r, parse_assertion("x -> null")));
}

TEST(Wpo, SimplifyIsExact) {
  Assertion p = parse_assertion("exists u. x == u * u -> y \\/ x -> y \\/ x -> y * x == null");
  EXPECT_EQ(simplify(p), parse_assertion("x -> y"));
}

TEST(Wpo, AlphaKeyIgnoresBinderNames) {
  auto a = parse_assertion("exists u w. x -> u * u -> w").disjuncts[0];
  auto b = parse_assertion("exists p q. x -> p * p -> q").disjuncts[0];
  auto c = parse_assertion("exists p q. x -> q * p -> q").disjuncts[0];
  EXPECT_EQ(alpha_key(a), alpha_key(b));
  EXPECT_NE(alpha_key(a), alpha_key(c));
}

TEST(Wpo, MatchesBruteForceOnSmallSuite) {
  SuiteOptions o;
  o.cases = 150;
  o.seed = 7;
  o.kind = SuiteOptions::Kind::Wpo;
  RunReport r = run_suite(o);
  EXPECT_EQ(r.failed, 0) << r.first_failure;
  EXPECT_EQ(r.run, 150);
}

TEST(Wpo, CompareReportsDifference) {
  WpoConfig cfg;
  WpoDiff d = compare_wpo(parse_assertion("x -> null"), parse_program("free(x)"), Exit::Ok, {2, 2}, cfg);
  EXPECT_TRUE(d.equal);
  EXPECT_GT(d.reachable, 0u);
}
