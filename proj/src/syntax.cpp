#include "islkit/syntax.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_set>

namespace isl {

namespace {

const std::string* intern(std::string_view name) {
  static std::mutex mu;
  static auto* table = new std::unordered_set<std::string>();
  std::lock_guard<std::mutex> lock(mu);
  return &*table->emplace(name).first;
}

// Names starting with '%' cannot be written in source text; used as
// scratch binders for alpha comparison.
Var scratch_var(std::size_t i) { return Var("%" + std::to_string(i)); }

}  // namespace

Var::Var(std::string_view name) : name_(nullptr) {
  if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
  name_ = intern(name);
}

Var Term::var() const {
  if (name_ == nullptr) throw std::logic_error("Term::var() on null");
  return Var(name_);
}

std::string_view to_string(Exit e) { return e == Exit::Ok ? "ok" : "er"; }

// ---- atoms -----------------------------------------------------------------

Atom Atom::eq(Term a, Term b) {
  if (b < a) std::swap(a, b);
  return {Kind::Eq, a, b};
}

Atom Atom::neq(Term a, Term b) {
  if (b < a) std::swap(a, b);
  return {Kind::Neq, a, b};
}

Atom Atom::negated() const {
  switch (kind) {
    case Kind::Eq: return neq(lhs, rhs);
    case Kind::Neq: return eq(lhs, rhs);
    default: throw std::logic_error("negation of a spatial atom");
  }
}

SymbolicHeap::SymbolicHeap(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
}

bool SymbolicHeap::is_pure() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.is_pure(); });
}

std::size_t SymbolicHeap::cell_count() const {
  return static_cast<std::size_t>(
      std::count_if(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.is_cell(); }));
}

SymbolicHeap SymbolicHeap::operator*(const SymbolicHeap& other) const {
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return SymbolicHeap(std::move(all));
}

SymbolicHeap SymbolicHeap::with(const Atom& a) const {
  std::vector<Atom> all = atoms_;
  all.push_back(a);
  return SymbolicHeap(std::move(all));
}

SymbolicHeap SymbolicHeap::without_index(std::size_t i) const {
  std::vector<Atom> all = atoms_;
  all.erase(all.begin() + static_cast<std::ptrdiff_t>(i));
  return SymbolicHeap(std::move(all));
}

SymbolicHeap SymbolicHeap::normalized() const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    if (a.kind == Atom::Kind::Emp) continue;
    if (a.kind == Atom::Kind::Eq && a.lhs == a.rhs) continue;
    if (a.is_pure() && !out.empty() && out.back() == a) continue;
    out.push_back(a);
  }
  SymbolicHeap h;
  h.atoms_ = std::move(out);  // already sorted
  return h;
}

// ---- quantified heaps and alpha-equivalence --------------------------------

QuantifiedHeap::QuantifiedHeap(std::vector<Var> xs, SymbolicHeap b) : body(std::move(b)) {
  for (Var x : xs) {
    if (std::find(binders.begin(), binders.end(), x) == binders.end()) binders.push_back(x);
  }
}

namespace {

std::vector<Var> live_binders(const QuantifiedHeap& q) {
  VarSet free = fv(q.body);
  std::vector<Var> out;
  for (Var b : q.binders)
    if (free.count(b)) out.push_back(b);
  return out;
}

// Occurrence profile of a variable: how often it appears in each
// (atom kind, position) slot. Binders can only be matched to binders with
// the same profile.
std::vector<int> profile(const SymbolicHeap& h, Var v) {
  std::vector<int> p(10, 0);
  for (const Atom& a : h.atoms()) {
    auto k = static_cast<int>(a.kind);
    if (a.lhs == Term(v)) p[2 * k] += 1;
    if (a.rhs == Term(v)) p[2 * k + 1] += 1;
  }
  return p;
}

bool match_binders(const SymbolicHeap& a_body, const SymbolicHeap& b_body,
                   const std::vector<Var>& bb, const std::vector<std::vector<int>>& a_prof,
                   const std::vector<std::vector<int>>& b_prof, std::vector<bool>& used,
                   std::vector<std::size_t>& perm) {
  std::size_t i = perm.size();
  if (i == a_prof.size()) {
    SymbolicHeap renamed = b_body;
    // b's binders -> scratch names according to the permutation
    for (std::size_t k = 0; k < perm.size(); ++k) renamed = subst(renamed, bb[perm[k]], scratch_var(k));
    return renamed.normalized() == a_body;
  }
  for (std::size_t j = 0; j < bb.size(); ++j) {
    if (used[j] || a_prof[i] != b_prof[j]) continue;
    used[j] = true;
    perm.push_back(j);
    if (match_binders(a_body, b_body, bb, a_prof, b_prof, used, perm)) return true;
    perm.pop_back();
    used[j] = false;
  }
  return false;
}

}  // namespace

bool operator==(const QuantifiedHeap& a, const QuantifiedHeap& b) {
  std::vector<Var> ab = live_binders(a);
  std::vector<Var> bb = live_binders(b);
  if (ab.size() != bb.size()) return false;
  SymbolicHeap an = a.body.normalized();
  SymbolicHeap bn = b.body.normalized();
  if (an.atoms().size() != bn.atoms().size()) return false;
  if (ab.empty()) return an == bn;
  // Move both sides onto scratch names; a's ordering is fixed, b's searched.
  // First push b's binders away from the scratch namespace (they never clash).
  SymbolicHeap a_scratch = an;
  for (std::size_t k = 0; k < ab.size(); ++k) a_scratch = subst(a_scratch, ab[k], scratch_var(k));
  a_scratch = a_scratch.normalized();
  std::vector<std::vector<int>> a_prof, b_prof;
  for (std::size_t k = 0; k < ab.size(); ++k) a_prof.push_back(profile(a_scratch, scratch_var(k)));
  for (Var v : bb) b_prof.push_back(profile(bn, v));
  std::vector<bool> used(bb.size(), false);
  std::vector<std::size_t> perm;
  return match_binders(a_scratch, bn, bb, a_prof, b_prof, used, perm);
}

Assertion Assertion::operator|(const Assertion& other) const {
  Assertion out = *this;
  out |= other;
  return out;
}

Assertion& Assertion::operator|=(const Assertion& other) {
  disjuncts.insert(disjuncts.end(), other.disjuncts.begin(), other.disjuncts.end());
  return *this;
}

bool operator==(const Assertion& a, const Assertion& b) {
  if (a.disjuncts.size() != b.disjuncts.size()) return false;
  std::vector<bool> used(b.disjuncts.size(), false);
  for (const QuantifiedHeap& q : a.disjuncts) {
    bool found = false;
    for (std::size_t j = 0; j < b.disjuncts.size() && !found; ++j) {
      if (!used[j] && q == b.disjuncts[j]) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

// ---- commands --------------------------------------------------------------

namespace cmd {
namespace {
CommandPtr make(Command::Node n) { return std::make_shared<const Command>(Command{std::move(n)}); }
void require_pure(const SymbolicHeap& h) {
  if (!h.is_pure()) throw std::invalid_argument("condition must be a pure formula");
}
}  // namespace

CommandPtr skip() { return make(node::Skip{}); }
CommandPtr assign(Var x, Term t) { return make(node::Assign{x, t}); }
CommandPtr havoc(Var x) { return make(node::Havoc{x}); }
CommandPtr assume(SymbolicHeap cond) {
  require_pure(cond);
  return make(node::Assume{std::move(cond)});
}
CommandPtr local(Var x, CommandPtr body) { return make(node::Local{x, std::move(body)}); }
CommandPtr seq(CommandPtr a, CommandPtr b) { return make(node::Seq{std::move(a), std::move(b)}); }
CommandPtr choice(CommandPtr a, CommandPtr b) {
  return make(node::Choice{std::move(a), std::move(b)});
}
CommandPtr star(CommandPtr body) { return make(node::Star{std::move(body)}); }
CommandPtr alloc(Var x) { return make(node::Alloc{x}); }
CommandPtr free(Var x) { return make(node::Free{x}); }
CommandPtr load(Var x, Var y) { return make(node::Load{x, y}); }
CommandPtr store(Var x, Term t) { return make(node::Store{x, t}); }
CommandPtr error() { return make(node::Error{}); }
CommandPtr if_else(SymbolicHeap cond, CommandPtr a, CommandPtr b) {
  require_pure(cond);
  return make(node::If{std::move(cond), std::move(a), std::move(b)});
}
CommandPtr while_loop(SymbolicHeap cond, CommandPtr body) {
  require_pure(cond);
  return make(node::While{std::move(cond), std::move(body)});
}
CommandPtr assert_that(SymbolicHeap cond) {
  require_pure(cond);
  return make(node::Assert{std::move(cond)});
}
CommandPtr malloc(Var x) { return make(node::Malloc{x}); }
CommandPtr assume_not(SymbolicHeap cond) {
  require_pure(cond);
  return make(node::AssumeNot{std::move(cond)});
}
}  // namespace cmd

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

template <class F>
void for_children(const Command& c, F&& f) {
  std::visit(overloaded{
                 [&](const node::Local& n) { f(*n.body); },
                 [&](const node::Seq& n) { f(*n.first); f(*n.second); },
                 [&](const node::Choice& n) { f(*n.left); f(*n.right); },
                 [&](const node::Star& n) { f(*n.body); },
                 [&](const node::If& n) { f(*n.then_branch); f(*n.else_branch); },
                 [&](const node::While& n) { f(*n.body); },
                 [](const auto&) {},
             },
             c.node);
}

}  // namespace

bool is_core(const Command& c) {
  if (c.is<node::If>() || c.is<node::While>() || c.is<node::Assert>() || c.is<node::Malloc>() ||
      c.is<node::AssumeNot>())
    return false;
  bool ok = true;
  for_children(c, [&](const Command& k) { ok = ok && is_core(k); });
  return ok;
}

bool has_star(const Command& c) {
  if (c.is<node::Star>() || c.is<node::While>()) return true;
  bool any = false;
  for_children(c, [&](const Command& k) { any = any || has_star(k); });
  return any;
}

int alloc_count(const Command& c) {
  int n = (c.is<node::Alloc>() || c.is<node::Malloc>()) ? 1 : 0;
  for_children(c, [&](const Command& k) { n += alloc_count(k); });
  return n;
}

int command_depth(const Command& c) {
  int d = 0;
  for_children(c, [&](const Command& k) { d = std::max(d, command_depth(k)); });
  return d + 1;
}

namespace {

bool alpha_eq(const Command& a, const Command& b, std::size_t& next_scratch) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const node::Skip&) { return true; },
          [&](const node::Error&) { return true; },
          [&](const node::Assign& n) {
            const auto& m = *b.as<node::Assign>();
            return n.x == m.x && n.t == m.t;
          },
          [&](const node::Havoc& n) { return n.x == b.as<node::Havoc>()->x; },
          [&](const node::Assume& n) { return n.cond == b.as<node::Assume>()->cond; },
          [&](const node::AssumeNot& n) { return n.cond == b.as<node::AssumeNot>()->cond; },
          [&](const node::Assert& n) { return n.cond == b.as<node::Assert>()->cond; },
          [&](const node::Alloc& n) { return n.x == b.as<node::Alloc>()->x; },
          [&](const node::Malloc& n) { return n.x == b.as<node::Malloc>()->x; },
          [&](const node::Free& n) { return n.x == b.as<node::Free>()->x; },
          [&](const node::Load& n) {
            const auto& m = *b.as<node::Load>();
            return n.x == m.x && n.y == m.y;
          },
          [&](const node::Store& n) {
            const auto& m = *b.as<node::Store>();
            return n.x == m.x && n.t == m.t;
          },
          [&](const node::Seq& n) {
            const auto& m = *b.as<node::Seq>();
            return alpha_eq(*n.first, *m.first, next_scratch) &&
                   alpha_eq(*n.second, *m.second, next_scratch);
          },
          [&](const node::Choice& n) {
            const auto& m = *b.as<node::Choice>();
            return alpha_eq(*n.left, *m.left, next_scratch) &&
                   alpha_eq(*n.right, *m.right, next_scratch);
          },
          [&](const node::Star& n) {
            return alpha_eq(*n.body, *b.as<node::Star>()->body, next_scratch);
          },
          [&](const node::While& n) {
            const auto& m = *b.as<node::While>();
            return n.cond == m.cond && alpha_eq(*n.body, *m.body, next_scratch);
          },
          [&](const node::If& n) {
            const auto& m = *b.as<node::If>();
            return n.cond == m.cond && alpha_eq(*n.then_branch, *m.then_branch, next_scratch) &&
                   alpha_eq(*n.else_branch, *m.else_branch, next_scratch);
          },
          [&](const node::Local& n) {
            const auto& m = *b.as<node::Local>();
            if (n.x == m.x) return alpha_eq(*n.body, *m.body, next_scratch);
            Var z = scratch_var(1000000 + next_scratch++);
            return alpha_eq(*rename_free(n.body, n.x, z), *rename_free(m.body, m.x, z),
                            next_scratch);
          },
      },
      a.node);
}

}  // namespace

bool alpha_equivalent(const Command& a, const Command& b) {
  std::size_t scratch = 0;
  return alpha_eq(a, b, scratch);
}

// ---- free / modified variables ---------------------------------------------

VarSet& operator|=(VarSet& a, const VarSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

VarSet operator|(VarSet a, const VarSet& b) {
  a |= b;
  return a;
}

VarSet fv(Term t) {
  if (t.is_null()) return {};
  return {t.var()};
}

VarSet fv(const Atom& a) {
  VarSet out;
  if (a.lhs.is_var()) out.insert(a.lhs.var());
  if (a.rhs.is_var()) out.insert(a.rhs.var());
  return out;
}

VarSet fv(const SymbolicHeap& h) {
  VarSet out;
  for (const Atom& a : h.atoms()) {
    if (a.lhs.is_var()) out.insert(a.lhs.var());
    if (a.rhs.is_var()) out.insert(a.rhs.var());
  }
  return out;
}

VarSet fv(const QuantifiedHeap& q) {
  VarSet out = fv(q.body);
  for (Var b : q.binders) out.erase(b);
  return out;
}

VarSet fv(const Assertion& p) {
  VarSet out;
  for (const auto& q : p.disjuncts) out |= fv(q);
  return out;
}

VarSet fv(const Command& c) {
  return std::visit(overloaded{
                        [](const node::Skip&) { return VarSet{}; },
                        [](const node::Error&) { return VarSet{}; },
                        [](const node::Assign& n) { return VarSet{n.x} | fv(n.t); },
                        [](const node::Havoc& n) { return VarSet{n.x}; },
                        [](const node::Assume& n) { return fv(n.cond); },
                        [](const node::AssumeNot& n) { return fv(n.cond); },
                        [](const node::Assert& n) { return fv(n.cond); },
                        [](const node::Local& n) {
                          VarSet s = fv(*n.body);
                          s.erase(n.x);
                          return s;
                        },
                        [](const node::Seq& n) { return fv(*n.first) | fv(*n.second); },
                        [](const node::Choice& n) { return fv(*n.left) | fv(*n.right); },
                        [](const node::Star& n) { return fv(*n.body); },
                        [](const node::While& n) { return fv(n.cond) | fv(*n.body); },
                        [](const node::If& n) {
                          return fv(n.cond) | fv(*n.then_branch) | fv(*n.else_branch);
                        },
                        [](const node::Alloc& n) { return VarSet{n.x}; },
                        [](const node::Malloc& n) { return VarSet{n.x}; },
                        [](const node::Free& n) { return VarSet{n.x}; },
                        [](const node::Load& n) { return VarSet{n.x, n.y}; },
                        [](const node::Store& n) { return VarSet{n.x} | fv(n.t); },
                    },
                    c.node);
}

VarSet fv(const Triple& t) { return fv(t.pre) | fv(*t.cmd) | fv(t.post); }

VarSet mod_of(const Command& c) {
  return std::visit(overloaded{
                        [](const node::Assign& n) { return VarSet{n.x}; },
                        [](const node::Havoc& n) { return VarSet{n.x}; },
                        [](const node::Alloc& n) { return VarSet{n.x}; },
                        [](const node::Malloc& n) { return VarSet{n.x}; },
                        [](const node::Load& n) { return VarSet{n.x}; },
                        [](const node::Local& n) {
                          VarSet s = mod_of(*n.body);
                          s.erase(n.x);
                          return s;
                        },
                        [](const node::Seq& n) { return mod_of(*n.first) | mod_of(*n.second); },
                        [](const node::Choice& n) { return mod_of(*n.left) | mod_of(*n.right); },
                        [](const node::Star& n) { return mod_of(*n.body); },
                        [](const node::While& n) { return mod_of(*n.body); },
                        [](const node::If& n) {
                          return mod_of(*n.then_branch) | mod_of(*n.else_branch);
                        },
                        [](const auto&) { return VarSet{}; },
                    },
                    c.node);
}

Var fresh_var(Var hint, const VarSet& avoid) {
  std::string name = hint.name();
  for (;;) {
    name += '\'';
    Var candidate(name);
    if (!avoid.count(candidate)) return candidate;
  }
}

Var fresh_var(std::string_view hint, const VarSet& avoid) { return fresh_var(Var(hint), avoid); }

// ---- substitution ----------------------------------------------------------

Term subst(Term u, Var x, Term t) { return u == Term(x) ? t : u; }

Atom subst(const Atom& a, Var x, Term t) {
  switch (a.kind) {
    case Atom::Kind::Eq: return Atom::eq(subst(a.lhs, x, t), subst(a.rhs, x, t));
    case Atom::Kind::Neq: return Atom::neq(subst(a.lhs, x, t), subst(a.rhs, x, t));
    case Atom::Kind::Emp: return a;
    case Atom::Kind::PointsTo:
    case Atom::Kind::NegPoints: {
      Term src = subst(a.lhs, x, t);
      if (src.is_null())
        throw SubstitutionError("substituting null for " + x.name() +
                                " in a cell source position; case-split first");
      return {a.kind, src, subst(a.rhs, x, t)};
    }
  }
  return a;
}

SymbolicHeap subst(const SymbolicHeap& h, Var x, Term t) {
  std::vector<Atom> out;
  out.reserve(h.atoms().size());
  for (const Atom& a : h.atoms()) out.push_back(subst(a, x, t));
  return SymbolicHeap(std::move(out));
}

QuantifiedHeap rename_binders_away(const QuantifiedHeap& q, const VarSet& avoid) {
  bool clash = false;
  for (Var b : q.binders) clash = clash || avoid.count(b) > 0;
  if (!clash) return q;
  VarSet taken = avoid | fv(q.body);
  for (Var b : q.binders) taken.insert(b);
  QuantifiedHeap out;
  out.body = q.body;
  for (Var b : q.binders) {
    if (avoid.count(b)) {
      Var nb = fresh_var(b, taken);
      taken.insert(nb);
      out.body = subst(out.body, b, nb);
      out.binders.push_back(nb);
    } else {
      out.binders.push_back(b);
    }
  }
  return out;
}

QuantifiedHeap subst(const QuantifiedHeap& q, Var x, Term t) {
  if (std::find(q.binders.begin(), q.binders.end(), x) != q.binders.end()) return q;
  VarSet danger = fv(t);
  danger.insert(x);
  QuantifiedHeap safe = rename_binders_away(q, danger);
  safe.body = subst(safe.body, x, t);
  return safe;
}

Assertion subst(const Assertion& p, Var x, Term t) {
  Assertion out;
  for (const auto& q : p.disjuncts) out.disjuncts.push_back(subst(q, x, t));
  return out;
}

CommandPtr rename_free(const CommandPtr& c, Var from, Var to) {
  auto r = [&](const CommandPtr& k) { return rename_free(k, from, to); };
  auto v = [&](Var y) { return y == from ? to : y; };
  auto t = [&](Term u) { return subst(u, from, Term(to)); };
  auto h = [&](const SymbolicHeap& s) { return subst(s, from, Term(to)); };
  return std::visit(overloaded{
                        [&](const node::Skip&) { return c; },
                        [&](const node::Error&) { return c; },
                        [&](const node::Assign& n) { return cmd::assign(v(n.x), t(n.t)); },
                        [&](const node::Havoc& n) { return cmd::havoc(v(n.x)); },
                        [&](const node::Assume& n) { return cmd::assume(h(n.cond)); },
                        [&](const node::AssumeNot& n) { return cmd::assume_not(h(n.cond)); },
                        [&](const node::Assert& n) { return cmd::assert_that(h(n.cond)); },
                        [&](const node::Local& n) {
                          if (n.x == from) return c;
                          return cmd::local(n.x, r(n.body));
                        },
                        [&](const node::Seq& n) { return cmd::seq(r(n.first), r(n.second)); },
                        [&](const node::Choice& n) { return cmd::choice(r(n.left), r(n.right)); },
                        [&](const node::Star& n) { return cmd::star(r(n.body)); },
                        [&](const node::While& n) { return cmd::while_loop(h(n.cond), r(n.body)); },
                        [&](const node::If& n) {
                          return cmd::if_else(h(n.cond), r(n.then_branch), r(n.else_branch));
                        },
                        [&](const node::Alloc& n) { return cmd::alloc(v(n.x)); },
                        [&](const node::Malloc& n) { return cmd::malloc(v(n.x)); },
                        [&](const node::Free& n) { return cmd::free(v(n.x)); },
                        [&](const node::Load& n) { return cmd::load(v(n.x), v(n.y)); },
                        [&](const node::Store& n) { return cmd::store(v(n.x), t(n.t)); },
                    },
                    c->node);
}

Assertion exists(Var x, const Assertion& p) {
  Assertion out;
  for (const auto& q : p.disjuncts) {
    bool bound = std::find(q.binders.begin(), q.binders.end(), x) != q.binders.end();
    if (bound || !fv(q.body).count(x)) {
      out.disjuncts.push_back(q);
      continue;
    }
    std::vector<Var> bs{x};
    bs.insert(bs.end(), q.binders.begin(), q.binders.end());
    out.disjuncts.emplace_back(std::move(bs), q.body);
  }
  return out;
}

Assertion star(const Assertion& p, const SymbolicHeap& h) {
  Assertion out;
  VarSet avoid = fv(h);
  for (const auto& q : p.disjuncts) {
    QuantifiedHeap r = rename_binders_away(q, avoid);
    r.body = r.body * h;
    out.disjuncts.push_back(std::move(r));
  }
  return out;
}

// ---- sugar -----------------------------------------------------------------

namespace {

CommandPtr expand_assume_not(const SymbolicHeap& cond) {
  const auto& atoms = cond.atoms();
  if (atoms.empty()) return cmd::assume(SymbolicHeap({Atom::neq(Term::null(), Term::null())}));
  CommandPtr out = cmd::assume(SymbolicHeap({atoms.back().negated()}));
  for (std::size_t i = atoms.size() - 1; i-- > 0;)
    out = cmd::choice(cmd::assume(SymbolicHeap({atoms[i].negated()})), out);
  return out;
}

}  // namespace

CommandPtr desugar(const CommandPtr& c) {
  if (is_core(*c)) return c;
  auto d = [](const CommandPtr& k) { return desugar(k); };
  return std::visit(
      overloaded{
          [&](const node::Local& n) { return cmd::local(n.x, d(n.body)); },
          [&](const node::Seq& n) { return cmd::seq(d(n.first), d(n.second)); },
          [&](const node::Choice& n) { return cmd::choice(d(n.left), d(n.right)); },
          [&](const node::Star& n) { return cmd::star(d(n.body)); },
          [&](const node::If& n) {
            return cmd::choice(cmd::seq(cmd::assume(n.cond), d(n.then_branch)),
                               cmd::seq(expand_assume_not(n.cond), d(n.else_branch)));
          },
          [&](const node::While& n) {
            return cmd::seq(cmd::star(cmd::seq(cmd::assume(n.cond), d(n.body))),
                            expand_assume_not(n.cond));
          },
          [&](const node::Assert& n) {
            return cmd::choice(cmd::seq(expand_assume_not(n.cond), cmd::error()),
                               cmd::assume(n.cond));
          },
          [&](const node::Malloc& n) {
            return cmd::choice(cmd::alloc(n.x), cmd::assign(n.x, Term::null()));
          },
          [&](const node::AssumeNot& n) { return expand_assume_not(n.cond); },
          [&](const auto&) { return c; },
      },
      c->node);
}

}  // namespace isl
