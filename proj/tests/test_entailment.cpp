#include <gtest/gtest.h>

#include "islkit/entailment.hpp"
#include "islkit/generator.hpp"
#include "islkit/parser.hpp"

using namespace isl;

namespace {

EntailVerdict ent(const char* p, const char* q) { return entails(parse_assertion(p), parse_assertion(q)); }

}  // namespace

TEST(Entailment, Basic) {
  EXPECT_TRUE(ent("x -> y", "x -> y").holds());
  EXPECT_TRUE(ent("x -> null", "exists v. x -> v").holds());
  EXPECT_TRUE(ent("false", "x -> y").holds());
  EXPECT_TRUE(ent("x == y * y -> null", "x -> null").holds());
  EXPECT_TRUE(ent("x -> y", "x -> y \\/ emp").holds());
  EXPECT_TRUE(ent("x -> y \\/ x -> null", "exists v. x -> v").holds());
  EXPECT_TRUE(ent("x -> y", "x != null * x -> y").holds());
  EXPECT_FALSE(ent("x -> y", "x -> null").holds());
  EXPECT_FALSE(ent("exists v. x -> v", "x -> null").holds());
  EXPECT_FALSE(ent("x -> y", "emp").holds());
  EXPECT_FALSE(ent("emp", "x != y").holds());
  EXPECT_FALSE(ent("x -/>", "exists v. x -> v").holds());
}

TEST(Entailment, CounterexampleSeparates) {
  Assertion p = parse_assertion("exists v. x -> v * y -> v");
  Assertion q = parse_assertion("x -> y \\/ y == x");
  EntailVerdict v = entails(p, q);
  ASSERT_EQ(v.kind, EntailVerdict::Kind::Fails);
  EXPECT_TRUE(satisfies(v.counterexample, p, v.domain));
  EXPECT_FALSE(satisfies(v.counterexample, q, v.domain));
}

TEST(Entailment, UnknownBeyondVarCap) {
  Assertion p = parse_assertion("a -> b * c -> d"), q = parse_assertion("e -> f \\/ g == h");
  EXPECT_EQ(entails(p, q).kind, EntailVerdict::Kind::Unknown);
  EXPECT_EQ(entails(p, q, 12).kind, EntailVerdict::Kind::Fails);
}

TEST(Entailment, GenericModelSatisfiesItsHeap) {
  SymbolicHeap h = parse_assertion("x == y * x != null * z == null * y -> z").disjuncts[0].body;
  auto [st, d] = generic_model(h, 1);
  EXPECT_TRUE(satisfies(st, Assertion(h), d));
  EXPECT_EQ(d.locations, 2);
}

TEST(Entailment, AgreesWithOracle) {
  GenConfig gc;
  gc.max_spatial = 2;
  for (int i = 0; i < 150; ++i) {
    Generator g(4200 + static_cast<std::uint64_t>(i), gc);
    Assertion p = g.assertion(), q = g.assertion();
    EntailVerdict v = entails(p, q);
    ASSERT_NE(v.kind, EntailVerdict::Kind::Unknown);
    EXPECT_EQ(v.holds(), entails_oracle(p, q, {4, 3})) << to_string(p) << "  |=  " << to_string(q);
  }
}
