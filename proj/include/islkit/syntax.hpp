#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace isl {

// Interned program/logic variable. Copies are a single pointer; equality is
// identity of the interned name, ordering is lexicographic on the name.
class Var {
 public:
  explicit Var(std::string_view name);

  const std::string& name() const { return *name_; }

  friend bool operator==(Var a, Var b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Var a, Var b) {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    return *a.name_ <=> *b.name_;
  }

 private:
  friend class Term;
  explicit Var(const std::string* interned) : name_(interned) {}
  const std::string* name_;
};

using VarSet = std::set<Var>;

// A variable or the constant null. Variables order before null.
class Term {
 public:
  Term(Var v) : name_(v.name_) {}  // NOLINT: implicit by design of the grammar
  static Term null() { return Term(); }

  bool is_null() const { return name_ == nullptr; }
  bool is_var() const { return name_ != nullptr; }
  Var var() const;
  std::optional<Var> as_var() const {
    if (is_null()) return std::nullopt;
    return Var(name_);
  }

  friend bool operator==(Term a, Term b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Term a, Term b) {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    if (a.name_ == nullptr) return std::strong_ordering::greater;
    if (b.name_ == nullptr) return std::strong_ordering::less;
    return *a.name_ <=> *b.name_;
  }

 private:
  Term() = default;
  const std::string* name_ = nullptr;
};

// One atomic formula of a symbolic heap. Pure atoms are stored with
// lhs <= rhs so that `x == y` and `y == x` are the same atom.
struct Atom {
  enum class Kind : std::uint8_t { Eq, Neq, PointsTo, NegPoints, Emp };

  Kind kind;
  Term lhs;  // source variable for PointsTo / NegPoints
  Term rhs;  // destination for PointsTo; null otherwise

  static Atom eq(Term a, Term b);
  static Atom neq(Term a, Term b);
  static Atom points_to(Var src, Term dst) { return {Kind::PointsTo, src, dst}; }
  static Atom neg_points(Var src) { return {Kind::NegPoints, src, Term::null()}; }
  static Atom emp() { return {Kind::Emp, Term::null(), Term::null()}; }

  bool is_pure() const { return kind == Kind::Eq || kind == Kind::Neq; }
  bool is_cell() const { return kind == Kind::PointsTo || kind == Kind::NegPoints; }
  Var src() const { return lhs.var(); }

  Atom negated() const;  // only for pure atoms

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Separating conjunction of atoms, kept sorted so that equality is
// multiset equality.
class SymbolicHeap {
 public:
  SymbolicHeap() = default;
  explicit SymbolicHeap(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  bool is_pure() const;
  std::size_t cell_count() const;

  SymbolicHeap operator*(const SymbolicHeap& other) const;
  SymbolicHeap with(const Atom& a) const;
  SymbolicHeap without_index(std::size_t i) const;

  // Drops emp atoms, reflexive equalities and repeated pure atoms.
  SymbolicHeap normalized() const;

  friend bool operator==(const SymbolicHeap&, const SymbolicHeap&) = default;
  friend auto operator<=>(const SymbolicHeap&, const SymbolicHeap&) = default;

 private:
  std::vector<Atom> atoms_;
};

struct QuantifiedHeap {
  std::vector<Var> binders;
  SymbolicHeap body;

  QuantifiedHeap() = default;
  QuantifiedHeap(SymbolicHeap b) : body(std::move(b)) {}  // NOLINT
  QuantifiedHeap(std::vector<Var> xs, SymbolicHeap b);

  // Equality up to renaming of binders (vacuous binders ignored).
  friend bool operator==(const QuantifiedHeap& a, const QuantifiedHeap& b);
};

// Finite disjunction; no disjuncts means `false`.
struct Assertion {
  std::vector<QuantifiedHeap> disjuncts;

  Assertion() = default;
  Assertion(std::vector<QuantifiedHeap> ds) : disjuncts(std::move(ds)) {}  // NOLINT
  Assertion(QuantifiedHeap q) { disjuncts.push_back(std::move(q)); }      // NOLINT
  Assertion(SymbolicHeap h) { disjuncts.emplace_back(std::move(h)); }     // NOLINT

  static Assertion falsum() { return {}; }
  bool is_false() const { return disjuncts.empty(); }

  Assertion operator|(const Assertion& other) const;
  Assertion& operator|=(const Assertion& other);

  // Equality as a multiset of disjuncts, each up to alpha-renaming.
  friend bool operator==(const Assertion& a, const Assertion& b);
};

enum class Exit : std::uint8_t { Ok, Er };

std::string_view to_string(Exit e);

// ---- commands --------------------------------------------------------------

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

namespace node {
struct Skip {};
struct Assign { Var x; Term t; };
struct Havoc { Var x; };
struct Assume { SymbolicHeap cond; };
struct Local { Var x; CommandPtr body; };
struct Seq { CommandPtr first; CommandPtr second; };
struct Choice { CommandPtr left; CommandPtr right; };
struct Star { CommandPtr body; };
struct Alloc { Var x; };
struct Free { Var x; };
struct Load { Var x; Var y; };
struct Store { Var x; Term t; };
struct Error {};
// sugar, removed by desugar()
struct If { SymbolicHeap cond; CommandPtr then_branch; CommandPtr else_branch; };
struct While { SymbolicHeap cond; CommandPtr body; };
struct Assert { SymbolicHeap cond; };
struct Malloc { Var x; };
struct AssumeNot { SymbolicHeap cond; };
}  // namespace node

struct Command {
  using Node = std::variant<node::Skip, node::Assign, node::Havoc, node::Assume, node::Local,
                            node::Seq, node::Choice, node::Star, node::Alloc, node::Free,
                            node::Load, node::Store, node::Error, node::If, node::While,
                            node::Assert, node::Malloc, node::AssumeNot>;
  Node node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
};

namespace cmd {
CommandPtr skip();
CommandPtr assign(Var x, Term t);
CommandPtr havoc(Var x);
CommandPtr assume(SymbolicHeap cond);
CommandPtr local(Var x, CommandPtr body);
CommandPtr seq(CommandPtr a, CommandPtr b);
CommandPtr choice(CommandPtr a, CommandPtr b);
CommandPtr star(CommandPtr body);
CommandPtr alloc(Var x);
CommandPtr free(Var x);
CommandPtr load(Var x, Var y);
CommandPtr store(Var x, Term t);
CommandPtr error();
CommandPtr if_else(SymbolicHeap cond, CommandPtr a, CommandPtr b);
CommandPtr while_loop(SymbolicHeap cond, CommandPtr body);
CommandPtr assert_that(SymbolicHeap cond);
CommandPtr malloc(Var x);
CommandPtr assume_not(SymbolicHeap cond);
}  // namespace cmd

bool is_core(const Command& c);
bool has_star(const Command& c);
int alloc_count(const Command& c);
int command_depth(const Command& c);

// Structural equality; `local` binders compared up to renaming.
bool alpha_equivalent(const Command& a, const Command& b);

struct Triple {
  Assertion pre;
  CommandPtr cmd;
  Exit exit;
  Assertion post;
};

// ---- variables -------------------------------------------------------------

VarSet fv(Term t);
VarSet fv(const Atom& a);
VarSet fv(const SymbolicHeap& h);
VarSet fv(const QuantifiedHeap& q);
VarSet fv(const Assertion& p);
VarSet fv(const Command& c);
VarSet fv(const Triple& t);

VarSet mod_of(const Command& c);

// Returns hint', hint'', ... : the first candidate not in `avoid`.
Var fresh_var(Var hint, const VarSet& avoid);
Var fresh_var(std::string_view hint, const VarSet& avoid);

VarSet& operator|=(VarSet& a, const VarSet& b);
VarSet operator|(VarSet a, const VarSet& b);

// ---- substitution ----------------------------------------------------------

class SubstitutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Term subst(Term u, Var x, Term t);
// Throws SubstitutionError when x occurs as a cell source and t is null.
Atom subst(const Atom& a, Var x, Term t);
SymbolicHeap subst(const SymbolicHeap& h, Var x, Term t);
// Capture-avoiding: binders clashing with fv(t) are renamed first.
QuantifiedHeap subst(const QuantifiedHeap& q, Var x, Term t);
Assertion subst(const Assertion& p, Var x, Term t);

// Renames free occurrences of `from` to `to` in a command (`to` must be fresh).
CommandPtr rename_free(const CommandPtr& c, Var from, Var to);

// Renames binders of q so that none lies in `avoid`.
QuantifiedHeap rename_binders_away(const QuantifiedHeap& q, const VarSet& avoid);

// ∃x.P distributed over the disjuncts of P.
Assertion exists(Var x, const Assertion& p);
// P * h distributed over disjuncts; binders of P are renamed away from fv(h).
Assertion star(const Assertion& p, const SymbolicHeap& h);

// ---- sugar -----------------------------------------------------------------

CommandPtr desugar(const CommandPtr& c);

}  // namespace isl
