#include <gtest/gtest.h>

#include "islkit/parser.hpp"
#include "islkit/semantics.hpp"

using namespace isl;

namespace {

std::vector<std::string> run(const char* prog, const char* state, Exit e, DomainSpec d = {2, 2}) {
  std::vector<std::string> out;
  for (const State& s : exec(parse_state(state), *desugar(parse_program(prog)), e, d))
    out.push_back(to_string(s));
  return out;
}

long long choose(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long state_count(int vars, int locs, int cells) {
  long long val = locs + 1, stores = 1, heaps = 0;
  for (int i = 0; i < vars; ++i) stores *= val;
  for (int k = 0; k <= std::min(cells, locs); ++k) {
    long long p = 1;
    for (int i = 0; i < k; ++i) p *= val + 1;
    heaps += choose(locs, k) * p;
  }
  return stores * heaps;
}

}  // namespace

TEST(Semantics, StatePrintParseRoundTrip) {
  for (const char* s : {"{} | {}", "{x=l1} | {l1=⊥}", "{x=l1, y=l2} | {l1=null, l2=l1}"}) {
    EXPECT_EQ(to_string(parse_state(s)), s);
  }
  EXPECT_EQ(parse_state("{x=null} | {}"), parse_state("{} | {}"));
}

TEST(Semantics, EnumStatesCount) {
  Var x("x"), y("y");
  EXPECT_EQ(enum_states({x}, {1, 1}).size(), 8u);
  EXPECT_EQ(enum_states({x, y}, {2, 0}).size(), 9u);
  for (int locs = 1; locs <= 3; ++locs)
    for (int cells = 0; cells <= locs; ++cells)
      EXPECT_EQ(static_cast<long long>(enum_states({x, y}, {locs, cells}).size()),
                state_count(2, locs, cells))
          << locs << " " << cells;
}

TEST(Semantics, Free) {
  EXPECT_EQ(run("free(x)", "{x=l1} | {l1=null}", Exit::Ok),
            std::vector<std::string>{"{x=l1} | {l1=⊥}"});
  EXPECT_TRUE(run("free(x)", "{x=l1} | {l1=null}", Exit::Er).empty());
  EXPECT_EQ(run("free(x)", "{x=l1} | {l1=⊥}", Exit::Er),
            std::vector<std::string>{"{x=l1} | {l1=⊥}"});
  EXPECT_EQ(run("free(x)", "{} | {}", Exit::Er), std::vector<std::string>{"{} | {}"});
}

TEST(Semantics, LoadStore) {
  EXPECT_EQ(run("x := [y]", "{y=l1} | {l1=l2}", Exit::Ok),
            std::vector<std::string>{"{x=l2, y=l1} | {l1=l2}"});
  EXPECT_EQ(run("x := [y]", "{y=l1} | {}", Exit::Er), std::vector<std::string>{"{y=l1} | {}"});
  EXPECT_EQ(run("[x] := y", "{x=l1, y=l2} | {l1=null}", Exit::Ok),
            std::vector<std::string>{"{x=l1, y=l2} | {l1=l2}"});
  EXPECT_TRUE(run("[x] := y", "{x=l1} | {l1=⊥}", Exit::Ok).empty());
}

TEST(Semantics, AllocReusesDeallocatedLocations) {
  auto out = run("x := alloc()", "{} | {l2=⊥}", Exit::Ok);
  EXPECT_EQ(out.size(), 6u);  // two locations times three contents
  EXPECT_TRUE(run("x := alloc()", "{} | {}", Exit::Er).empty());
}

TEST(Semantics, AllocExhaustion) {
  State full = parse_state("{} | {l1=null}");
  auto c = parse_program("x := alloc()");
  EXPECT_THROW(exec(full, *c, Exit::Ok, {1, 1}), DomainExhausted);
  ExecOptions partial;
  partial.strict_alloc = false;
  EXPECT_TRUE(exec(full, *c, Exit::Ok, {1, 1}, partial).empty());
}

TEST(Semantics, LocalRestoresOuterValue) {
  auto out = run("local z { z := x }", "{x=l1, z=l2} | {}", Exit::Ok);
  EXPECT_EQ(out, std::vector<std::string>{"{x=l1, z=l2} | {}"});
}

TEST(Semantics, AssumeAndError) {
  EXPECT_TRUE(run("assume(x == y)", "{x=l1} | {}", Exit::Ok).empty());
  EXPECT_EQ(run("assume(x != y)", "{x=l1} | {}", Exit::Ok).size(), 1u);
  EXPECT_EQ(run("error", "{} | {}", Exit::Er).size(), 1u);
  EXPECT_TRUE(run("error", "{} | {}", Exit::Ok).empty());
}

TEST(Semantics, ErrorStopsSequence) {
  EXPECT_EQ(run("free(x) ; x := null", "{x=l1} | {l1=⊥}", Exit::Er),
            std::vector<std::string>{"{x=l1} | {l1=⊥}"});
  EXPECT_EQ(run("free(x) ; free(x)", "{x=l1} | {l1=null}", Exit::Er),
            std::vector<std::string>{"{x=l1} | {l1=⊥}"});
}

TEST(Semantics, StarRespectsLoopBound) {
  auto c = parse_program("star { x := [x] }");
  State s = parse_state("{x=l1} | {l1=l2, l2=null}");
  ExecOptions o;
  o.loop_bound = 1;
  EXPECT_EQ(exec(s, *c, Exit::Ok, {2, 2}, o).size(), 2u);
  o.loop_bound = 2;
  EXPECT_EQ(exec(s, *c, Exit::Ok, {2, 2}, o).size(), 3u);
  o.loop_bound = 3;
  EXPECT_EQ(exec(s, *c, Exit::Er, {2, 2}, o).size(), 1u);
}

TEST(Semantics, Satisfaction) {
  DomainSpec d{2, 2};
  State s = parse_state("{x=l1, y=l2} | {l1=l2}");
  EXPECT_TRUE(satisfies(s, parse_assertion("x -> y"), d));
  EXPECT_TRUE(satisfies(s, parse_assertion("exists u. x -> u * u != null"), d));
  EXPECT_FALSE(satisfies(s, parse_assertion("x -> y * y -> null"), d));
  EXPECT_FALSE(satisfies(s, parse_assertion("emp"), d));
  EXPECT_TRUE(satisfies(parse_state("{x=l1} | {l1=⊥}"), parse_assertion("x -/>"), d));
  EXPECT_FALSE(satisfies(s, Assertion::falsum(), d));
  EXPECT_TRUE(satisfies(s, parse_assertion("emp \\/ x -> y"), d));
}

TEST(Semantics, BruteWpoAndValidity) {
  DomainSpec d{2, 2};
  Triple good = parse_triple("[exists v. x -> v] free(x) [ok: x -/>]");
  EXPECT_TRUE(brute_valid(good, d));
  Triple bad = parse_triple("[x -> null] free(x) [er: x -> null]");
  EXPECT_FALSE(brute_valid(bad, d));
  auto cex = brute_counterexamples(bad, d);
  ASSERT_EQ(cex.size(), 1u);
  EXPECT_TRUE(satisfies(cex[0], bad.post, d));
}
