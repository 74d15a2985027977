#include <gtest/gtest.h>

#include "islkit/parser.hpp"

using namespace isl;

TEST(Parser, AssertionRoundTrip) {
  for (const char* s : {"emp", "false", "x -> null", "x -/>", "x == y * y != null * y -> x",
                        "exists u . x -> u * u -/>", "x -> y \\/ exists u . u == x"}) {
    Assertion a = parse_assertion(s);
    EXPECT_EQ(parse_assertion(to_string(a)), a) << s;
  }
}

TEST(Parser, CommandRoundTrip) {
  for (const char* s : {"skip", "error", "x := y", "x := null", "x := *", "assume(x == y * y != null)",
                        "local z { z := alloc() ; [z] := x }", "choice { free(x) } or { x := [y] }",
                        "star { x := [x] }", "skip ; skip ; skip"}) {
    CommandPtr c = parse_program(s);
    EXPECT_TRUE(alpha_equivalent(*parse_program(to_string(c)), *c)) << s;
  }
}

TEST(Parser, TripleAndQuery) {
  Triple t = parse_triple("[ emp * x -> null ] free(x) [ er: emp * x -> null ]");
  EXPECT_EQ(t.exit, Exit::Er);
  EXPECT_EQ(t.pre, parse_assertion("x -> null"));
  WpoQuery q = parse_wpo_query("x -> null ; free(x) ; ok");
  EXPECT_EQ(q.exit, Exit::Ok);
  EXPECT_EQ(to_string(q.cmd), "free(x)");
}

TEST(Parser, SequenceIsRightNested) {
  CommandPtr c = parse_program("free(x) ; free(y) ; free(z)");
  auto s = c->as<node::Seq>();
  ASSERT_NE(s, nullptr);
  EXPECT_TRUE(s->first->is<node::Free>());
  EXPECT_TRUE(s->second->is<node::Seq>());
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_assertion("x -> ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 6);
  }
  try {
    parse_program("skip ;\n  free x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_TRUE(e.expected().count("(")) << e.what();
  }
}

TEST(Parser, RejectsNullCellSource) {
  EXPECT_THROW(parse_assertion("null -> x"), ParseError);
}

TEST(Parser, CommentsAndWhitespace) {
  Assertion a = parse_assertion("# precondition\n  x -> y  # trailing\n");
  EXPECT_EQ(a, parse_assertion("x -> y"));
}
