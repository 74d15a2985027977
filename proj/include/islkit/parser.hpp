#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "islkit/syntax.hpp"

namespace isl {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::set<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
  std::string found_;
};

struct Token {
  enum class Kind { Ident, Keyword, Symbol, Number, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view text);

// Recursive-descent parser over a token vector. Exposed so that other
// formats (derivations) can reuse the assertion/command sub-parsers.
class Parser {
 public:
  explicit Parser(std::string_view text);

  Term term();
  SymbolicHeap heap();       // atoms joined by '*'
  SymbolicHeap pure_heap();  // heap() that rejects spatial atoms
  QuantifiedHeap quantified();
  Assertion assertion();
  CommandPtr command();
  Triple triple();
  Exit exit_condition();

  const Token& peek(std::size_t ahead = 0) const;
  bool at(std::string_view text, std::size_t ahead = 0) const;
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept(std::string_view text);
  const Token& expect(std::string_view text);
  Var ident();
  int number();
  [[noreturn]] void fail(std::set<std::string> expected) const;
  void expect_end();

 private:
  CommandPtr primary();
  CommandPtr block();  // '{' C '}'
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Assertion parse_assertion(std::string_view text);
CommandPtr parse_program(std::string_view text);
Triple parse_triple(std::string_view text);

// `P ; C ; ok|er`
struct WpoQuery {
  Assertion pre;
  CommandPtr cmd;
  Exit exit;
};
WpoQuery parse_wpo_query(std::string_view text);

std::string to_string(Term t);
std::string to_string(const Atom& a);
std::string to_string(const SymbolicHeap& h);
std::string to_string(const QuantifiedHeap& q);
std::string to_string(const Assertion& p);
std::string to_string(const Command& c);
std::string to_string(const CommandPtr& c);
std::string to_string(const Triple& t);

}  // namespace isl
