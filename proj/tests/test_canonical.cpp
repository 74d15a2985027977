#include <gtest/gtest.h>

#include "islkit/canonical.hpp"
#include "islkit/generator.hpp"
#include "islkit/parser.hpp"
#include "islkit/semantics.hpp"

using namespace isl;

namespace {

SymbolicHeap sh(const char* s) { return parse_assertion(s).disjuncts.at(0).body; }

// Bell triangle.
long long bell(int n) {
  std::vector<long long> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<long long> next{row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    row = next;
  }
  return row.front();
}

}  // namespace

TEST(Canonical, Satisfiable) {
  EXPECT_TRUE(satisfiable(sh("x -> y * y -> x")));
  EXPECT_FALSE(satisfiable(sh("x -> y * x -> y")));
  EXPECT_FALSE(satisfiable(sh("x -> y * x -/>")));
  EXPECT_FALSE(satisfiable(sh("x == y * x -> null * y -> null")));
  EXPECT_FALSE(satisfiable(sh("x == null * x -> y")));
  EXPECT_FALSE(satisfiable(sh("x != x")));
  EXPECT_FALSE(satisfiable(sh("x == y * y == z * x != z")));
  EXPECT_TRUE(satisfiable(sh("x != y * y != z")));
}

TEST(Canonical, Aliases) {
  EXPECT_EQ(aliases(Var("x"), sh("x == y * z == x * x != w")), (VarSet{Var("y"), Var("z")}));
}

TEST(Canonical, PartitionCountIsBell) {
  std::vector<Var> pool{Var("a"), Var("b"), Var("c"), Var("d")};
  VarSet vs;
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(static_cast<long long>(pi(vs).size()), bell(n + 1)) << n;
    if (n < 4) vs.insert(pool[static_cast<std::size_t>(n)]);
  }
}

TEST(Canonical, PiElementsAreCanonicalAndDisjoint) {
  VarSet vs{Var("x"), Var("y"), Var("z")};
  auto ps = pi(vs);
  DomainSpec d{3, 0};
  for (const State& s : enum_states(vs, d)) {
    int hits = 0;
    for (const auto& p : ps) hits += satisfies(s, Assertion(p), d);
    EXPECT_EQ(hits, 1) << to_string(s);
  }
  for (const auto& p : ps) EXPECT_TRUE(is_canonical(p, vs)) << to_string(p);
}

TEST(Canonical, IsCanonical) {
  VarSet xy{Var("x"), Var("y")};
  EXPECT_TRUE(is_canonical(sh("x == y * x != null * y != null * y -> null"), xy));
  EXPECT_FALSE(is_canonical(sh("x == y * y -> null"), xy));
  EXPECT_TRUE(is_canonical(sh("x == y * x == null * y != null"), xy));  // total, though unsatisfiable
}

TEST(Canonical, CaOfFreeExample) {
  auto cs = ca(sh("y -> null"), *parse_program("free(x)"));
  std::vector<std::string> got;
  for (const auto& h : cs) got.push_back(to_string(h));
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"x != y * x != null * y != null * y -> null",
                                           "x == null * x != y * y != null * y -> null",
                                           "x == y * x != null * y != null * y -> null"}));
}

TEST(Canonical, VarCap) {
  VarSet many;
  for (const char* n : {"a", "b", "c", "d"}) many.insert(Var(n));
  EXPECT_THROW(ca(SymbolicHeap(), many, 3), VarCapExceeded);
}

TEST(Canonical, CanoIsEquivalent) {
  GenConfig gc;
  gc.allow_star = false;
  DomainSpec d{3, 2};
  for (int i = 0; i < 40; ++i) {
    Generator g(900 + static_cast<std::uint64_t>(i), gc);
    Assertion p = g.assertion();
    CommandPtr c = g.command(2);
    Assertion q = cano(p, *c);
    VarSet vs = fv(p) | fv(*c);
    for (const auto& dj : q.disjuncts) EXPECT_TRUE(is_canonical(dj.body, fv(dj.body) | fv(*c))) << to_string(dj);
    for (const State& s : enum_states(vs, d))
      ASSERT_EQ(satisfies(s, p, d), satisfies(s, q, d)) << to_string(p) << " / " << to_string(s);
  }
}
