#include "islkit/parser.hpp"

#include <cctype>
#include <sstream>

namespace isl {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "null",  "emp",    "exists", "false", "skip",  "assume", "local", "choice", "or", "star",
    "alloc", "malloc", "free",   "error", "if",    "else",   "while", "assert", "ok", "er"};

// Longest first.
const char* const kSymbols[] = {"-/>", "->", "==", "!=", ":=", "\\/", "*", ".", ";", "(", ")",
                                "{",   "}",  "[",  "]",  ":",  "!",   ",", "@"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string join_expected(const std::set<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ", ";
    out += "'" + x + "'";
  }
  return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::set<std::string> expected, std::string found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": expected " +
                         join_expected(expected) + ", found '" + found + "'"),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.text = std::string(text.substr(i, j - i));
      t.kind = kKeywords.count(t.text) ? Token::Kind::Keyword : Token::Kind::Ident;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.text = std::string(text.substr(i, j - i));
      t.kind = Token::Kind::Number;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::string_view s(sym);
      if (text.substr(i, s.size()) == s) {
        t.text = std::string(s);
        t.kind = Token::Kind::Symbol;
        advance(s.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(line, col, {"token"}, std::string(1, c));
  }
  Token end;
  end.line = line;
  end.column = col;
  end.text = "<end>";
  out.push_back(end);
  return out;
}

Parser::Parser(std::string_view text) : toks_(tokenize(text)) {}

const Token& Parser::peek(std::size_t ahead) const {
  std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[k];
}

bool Parser::at(std::string_view text, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind != Token::Kind::End && t.kind != Token::Kind::Ident && t.text == text;
}

bool Parser::accept(std::string_view text) {
  if (!at(text)) return false;
  ++pos_;
  return true;
}

const Token& Parser::expect(std::string_view text) {
  if (!at(text)) fail({std::string(text)});
  return toks_[pos_++];
}

void Parser::fail(std::set<std::string> expected) const {
  const Token& t = peek();
  throw ParseError(t.line, t.column, std::move(expected), t.text);
}

void Parser::expect_end() {
  if (!at_end()) fail({"<end>"});
}

Var Parser::ident() {
  if (peek().kind != Token::Kind::Ident) fail({"identifier"});
  return Var(toks_[pos_++].text);
}

int Parser::number() {
  if (peek().kind != Token::Kind::Number) fail({"number"});
  return std::stoi(toks_[pos_++].text);
}

Term Parser::term() {
  if (accept("null")) return Term::null();
  if (peek().kind != Token::Kind::Ident) fail({"identifier", "null"});
  return ident();
}

SymbolicHeap Parser::heap() {
  std::vector<Atom> atoms;
  do {
    if (accept("emp")) {
      atoms.push_back(Atom::emp());
      continue;
    }
    if (peek().kind != Token::Kind::Ident && !at("null")) fail({"emp", "identifier", "null"});
    bool lhs_is_var = peek().kind == Token::Kind::Ident;
    Term lhs = term();
    if (lhs_is_var && accept("->")) {
      atoms.push_back(Atom::points_to(lhs.var(), term()));
    } else if (lhs_is_var && accept("-/>")) {
      atoms.push_back(Atom::neg_points(lhs.var()));
    } else if (accept("==")) {
      atoms.push_back(Atom::eq(lhs, term()));
    } else if (accept("!=")) {
      atoms.push_back(Atom::neq(lhs, term()));
    } else if (lhs_is_var) {
      fail({"->", "-/>", "==", "!="});
    } else {
      fail({"==", "!="});
    }
  } while (accept("*"));
  return SymbolicHeap(std::move(atoms));
}

SymbolicHeap Parser::pure_heap() {
  const Token& start = peek();
  SymbolicHeap h = heap();
  if (!h.is_pure()) throw ParseError(start.line, start.column, {"pure atom"}, "spatial atom");
  return h;
}

QuantifiedHeap Parser::quantified() {
  std::vector<Var> binders;
  if (accept("exists")) {
    do binders.push_back(ident());
    while (peek().kind == Token::Kind::Ident);
    expect(".");
  }
  return QuantifiedHeap(std::move(binders), heap());
}

Assertion Parser::assertion() {
  if (accept("false")) {
    if (at("\\/")) fail({"]", ";", "<end>"});
    return Assertion::falsum();
  }
  Assertion out;
  do out.disjuncts.push_back(quantified());
  while (accept("\\/"));
  return out;
}

CommandPtr Parser::block() {
  expect("{");
  CommandPtr c = command();
  expect("}");
  return c;
}

CommandPtr Parser::command() {
  CommandPtr first = primary();
  // A ';' followed by an exit keyword ends the command (wpo query files).
  if (at(";") && !at("ok", 1) && !at("er", 1)) {
    ++pos_;
    return cmd::seq(first, command());
  }
  return first;
}

CommandPtr Parser::primary() {
  if (at("{")) return block();
  if (accept("skip")) return cmd::skip();
  if (accept("error")) return cmd::error();
  if (accept("assume")) {
    expect("(");
    if (accept(")")) return cmd::assume(SymbolicHeap());
    if (accept("!")) {
      expect("(");
      SymbolicHeap b = pure_heap();
      expect(")");
      expect(")");
      return cmd::assume_not(std::move(b));
    }
    SymbolicHeap b = pure_heap();
    expect(")");
    return cmd::assume(std::move(b));
  }
  if (accept("assert")) {
    expect("(");
    SymbolicHeap b = at(")") ? SymbolicHeap() : pure_heap();
    expect(")");
    return cmd::assert_that(std::move(b));
  }
  if (accept("local")) {
    Var x = ident();
    return cmd::local(x, block());
  }
  if (accept("choice")) {
    CommandPtr a = block();
    expect("or");
    return cmd::choice(a, block());
  }
  if (accept("star")) return cmd::star(block());
  if (accept("free")) {
    expect("(");
    Var x = ident();
    expect(")");
    return cmd::free(x);
  }
  if (accept("if")) {
    expect("(");
    SymbolicHeap b = at(")") ? SymbolicHeap() : pure_heap();
    expect(")");
    CommandPtr a = block();
    expect("else");
    return cmd::if_else(std::move(b), a, block());
  }
  if (accept("while")) {
    expect("(");
    SymbolicHeap b = at(")") ? SymbolicHeap() : pure_heap();
    expect(")");
    return cmd::while_loop(std::move(b), block());
  }
  if (accept("[")) {
    Var x = ident();
    expect("]");
    expect(":=");
    return cmd::store(x, term());
  }
  if (peek().kind == Token::Kind::Ident) {
    Var x = ident();
    expect(":=");
    if (accept("*")) return cmd::havoc(x);
    if (accept("alloc")) {
      expect("(");
      expect(")");
      return cmd::alloc(x);
    }
    if (accept("malloc")) {
      expect("(");
      expect(")");
      return cmd::malloc(x);
    }
    if (accept("[")) {
      Var y = ident();
      expect("]");
      return cmd::load(x, y);
    }
    if (at("null") || peek().kind == Token::Kind::Ident) return cmd::assign(x, term());
    fail({"*", "alloc", "malloc", "[", "identifier", "null"});
  }
  fail({"skip", "error", "assume", "assert", "local", "choice", "star", "free", "if", "while",
        "[", "{", "identifier"});
}

Exit Parser::exit_condition() {
  if (accept("ok")) return Exit::Ok;
  if (accept("er")) return Exit::Er;
  fail({"ok", "er"});
}

Triple Parser::triple() {
  expect("[");
  Assertion pre = assertion();
  expect("]");
  CommandPtr c = command();
  expect("[");
  Exit e = exit_condition();
  expect(":");
  Assertion post = assertion();
  expect("]");
  return {std::move(pre), std::move(c), e, std::move(post)};
}

Assertion parse_assertion(std::string_view text) {
  Parser p(text);
  Assertion a = p.assertion();
  p.expect_end();
  return a;
}

CommandPtr parse_program(std::string_view text) {
  Parser p(text);
  CommandPtr c = p.command();
  p.expect_end();
  return c;
}

Triple parse_triple(std::string_view text) {
  Parser p(text);
  Triple t = p.triple();
  p.expect_end();
  return t;
}

WpoQuery parse_wpo_query(std::string_view text) {
  Parser p(text);
  WpoQuery q;
  q.pre = p.assertion();
  p.expect(";");
  q.cmd = p.command();
  p.expect(";");
  q.exit = p.exit_condition();
  p.expect_end();
  return q;
}

// ---- printing --------------------------------------------------------------

std::string to_string(Term t) { return t.is_null() ? "null" : t.var().name(); }

std::string to_string(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Eq: return to_string(a.lhs) + " == " + to_string(a.rhs);
    case Atom::Kind::Neq: return to_string(a.lhs) + " != " + to_string(a.rhs);
    case Atom::Kind::PointsTo: return to_string(a.lhs) + " -> " + to_string(a.rhs);
    case Atom::Kind::NegPoints: return to_string(a.lhs) + " -/>";
    case Atom::Kind::Emp: return "emp";
  }
  return "?";
}

std::string to_string(const SymbolicHeap& h) {
  if (h.empty()) return "emp";
  std::string out;
  for (const Atom& a : h.atoms()) {
    if (!out.empty()) out += " * ";
    out += to_string(a);
  }
  return out;
}

std::string to_string(const QuantifiedHeap& q) {
  if (q.binders.empty()) return to_string(q.body);
  std::string out = "exists";
  for (Var b : q.binders) out += " " + b.name();
  return out + " . " + to_string(q.body);
}

std::string to_string(const Assertion& p) {
  if (p.is_false()) return "false";
  std::string out;
  for (const auto& q : p.disjuncts) {
    if (!out.empty()) out += " \\/ ";
    out += to_string(q);
  }
  return out;
}

namespace {

std::string cond(const SymbolicHeap& h) { return h.empty() ? "" : to_string(h); }

void print(const Command& c, std::ostream& os) {
  auto blk = [&](const CommandPtr& k) {
    os << "{ ";
    print(*k, os);
    os << " }";
  };
  if (auto* n = c.as<node::Skip>()) {
    (void)n;
    os << "skip";
  } else if (c.is<node::Error>()) {
    os << "error";
  } else if (auto* n = c.as<node::Assign>()) {
    os << n->x.name() << " := " << to_string(n->t);
  } else if (auto* n = c.as<node::Havoc>()) {
    os << n->x.name() << " := *";
  } else if (auto* n = c.as<node::Assume>()) {
    os << "assume(" << cond(n->cond) << ")";
  } else if (auto* n = c.as<node::AssumeNot>()) {
    os << "assume(!(" << cond(n->cond) << "))";
  } else if (auto* n = c.as<node::Assert>()) {
    os << "assert(" << cond(n->cond) << ")";
  } else if (auto* n = c.as<node::Local>()) {
    os << "local " << n->x.name() << " ";
    blk(n->body);
  } else if (auto* n = c.as<node::Seq>()) {
    if (n->first->is<node::Seq>()) {
      blk(n->first);
    } else {
      print(*n->first, os);
    }
    os << " ; ";
    print(*n->second, os);
  } else if (auto* n = c.as<node::Choice>()) {
    os << "choice ";
    blk(n->left);
    os << " or ";
    blk(n->right);
  } else if (auto* n = c.as<node::Star>()) {
    os << "star ";
    blk(n->body);
  } else if (auto* n = c.as<node::Alloc>()) {
    os << n->x.name() << " := alloc()";
  } else if (auto* n = c.as<node::Malloc>()) {
    os << n->x.name() << " := malloc()";
  } else if (auto* n = c.as<node::Free>()) {
    os << "free(" << n->x.name() << ")";
  } else if (auto* n = c.as<node::Load>()) {
    os << n->x.name() << " := [" << n->y.name() << "]";
  } else if (auto* n = c.as<node::Store>()) {
    os << "[" << n->x.name() << "] := " << to_string(n->t);
  } else if (auto* n = c.as<node::If>()) {
    os << "if (" << cond(n->cond) << ") ";
    blk(n->then_branch);
    os << " else ";
    blk(n->else_branch);
  } else if (auto* n = c.as<node::While>()) {
    os << "while (" << cond(n->cond) << ") ";
    blk(n->body);
  }
}

}  // namespace

std::string to_string(const Command& c) {
  std::ostringstream os;
  print(c, os);
  return os.str();
}

std::string to_string(const CommandPtr& c) { return to_string(*c); }

std::string to_string(const Triple& t) {
  return "[ " + to_string(t.pre) + " ] " + to_string(*t.cmd) + " [ " +
         std::string(to_string(t.exit)) + ": " + to_string(t.post) + " ]";
}

}  // namespace isl
