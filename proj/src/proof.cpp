#include "islkit/proof.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "islkit/canonical.hpp"
#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"

namespace isl {

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleNames = {
    "Skip",  "Error", "Seq1",    "Seq2",   "LoopZero", "LoopNonZero", "Cons", "Disj",
    "Choice", "Exist", "Assign", "Havoc",  "Assume",   "Local",       "FrameOk", "Alloc1",
    "Alloc2", "Free",  "FreeEr", "Load",   "LoadEr",   "Store",       "StoreEr",
    "BackwardsVariant"};

}  // namespace

std::string_view to_string(RuleName r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<RuleName> rule_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == s) return static_cast<RuleName>(i);
  if (s == "BV") return RuleName::BackwardsVariant;
  return std::nullopt;
}

bool is_derived(RuleName r) { return r == RuleName::BackwardsVariant; }

std::vector<RuleName> primitive_rules() {
  std::vector<RuleName> out;
  for (int i = 0; i < kRuleCount; ++i)
    if (!is_derived(static_cast<RuleName>(i))) out.push_back(static_cast<RuleName>(i));
  return out;
}

// ---- equality of assertions -------------------------------------------------

namespace {

QuantifiedHeap tidy(const QuantifiedHeap& q) {
  SymbolicHeap body = q.body.normalized();
  VarSet free = fv(body);
  std::vector<Var> bs;
  for (Var b : q.binders)
    if (free.count(b) && std::find(bs.begin(), bs.end(), b) == bs.end()) bs.push_back(b);
  return QuantifiedHeap(std::move(bs), std::move(body));
}

Assertion tidy(const Assertion& p) {
  Assertion out;
  for (const auto& q : p.disjuncts) out.disjuncts.push_back(tidy(q));
  return out;
}

std::vector<std::string> sorted_keys(const Assertion& p) {
  std::vector<std::string> ks;
  for (const auto& q : p.disjuncts) ks.push_back(alpha_key(q));
  std::sort(ks.begin(), ks.end());
  return ks;
}

bool has_equal(const QuantifiedHeap& q, const Assertion& p) {
  return std::any_of(p.disjuncts.begin(), p.disjuncts.end(),
                     [&](const QuantifiedHeap& r) { return r == q; });
}

}  // namespace

bool same_assertion(const Assertion& a, const Assertion& b) {
  if (a.disjuncts.size() != b.disjuncts.size()) return false;
  Assertion ta = tidy(a), tb = tidy(b);
  if (sorted_keys(ta) == sorted_keys(tb)) return true;
  return ta == tb;
}

bool same_disjunct_set(const Assertion& a, const Assertion& b) {
  Assertion ta = tidy(a), tb = tidy(b);
  auto ka = sorted_keys(ta), kb = sorted_keys(tb);
  ka.erase(std::unique(ka.begin(), ka.end()), ka.end());
  kb.erase(std::unique(kb.begin(), kb.end()), kb.end());
  if (ka == kb) return true;
  for (const auto& q : ta.disjuncts)
    if (!has_equal(q, tb)) return false;
  for (const auto& q : tb.disjuncts)
    if (!has_equal(q, ta)) return false;
  return true;
}

// ---- axioms -----------------------------------------------------------------

namespace {

struct Expected {
  std::optional<Assertion> post;
  std::string why;  // when post is empty
};

Expected reject(std::string why) { return {std::nullopt, std::move(why)}; }

VarSet alias_set(Var x, const SymbolicHeap& h) {
  VarSet as = aliases(x, h);
  as.insert(x);
  return as;
}

// Index of the cell selected by `alias` (or the first one) among atoms of
// `kind` whose source aliases x.
std::optional<std::size_t> pick_cell(const SymbolicHeap& h, Var x, Atom::Kind kind,
                                     std::optional<Var> alias) {
  VarSet as = alias_set(x, h);
  const auto& atoms = h.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].kind != kind || !as.count(atoms[i].src())) continue;
    if (alias && atoms[i].src() != *alias) continue;
    return i;
  }
  return std::nullopt;
}

bool has_any_cell(const SymbolicHeap& h, Var x) {
  return pick_cell(h, x, Atom::Kind::PointsTo, std::nullopt).has_value();
}

Assertion exists_fresh(const SymbolicHeap& h, Var x, const VarSet& extra,
                       const std::function<SymbolicHeap(Var)>& body) {
  VarSet taken = fv(h) | extra;
  taken.insert(x);
  Var x1 = fresh_var(x, taken);
  return Assertion(QuantifiedHeap({x1}, body(x1)));
}

Expected heap_axiom(RuleName r, const SymbolicHeap& psi, const Command& c, Exit e,
                    std::optional<Var> alias) {
  bool ok = e == Exit::Ok;
  auto canonical_over = [&](const VarSet& extra) { return is_canonical(psi, fv(psi) | extra); };
  switch (r) {
    case RuleName::Assign: {
      auto* n = c.as<node::Assign>();
      if (!n) return reject("Assign: command is not an assignment");
      if (!ok) return {Assertion::falsum(), {}};
      return {exists_fresh(psi, n->x, fv(n->t),
                           [&](Var x1) {
                             return subst(psi, n->x, Term(x1))
                                 .with(Atom::eq(n->x, subst(n->t, n->x, Term(x1))));
                           }),
              {}};
    }
    case RuleName::Havoc: {
      auto* n = c.as<node::Havoc>();
      if (!n) return reject("Havoc: command is not x := *");
      if (!ok) return {Assertion::falsum(), {}};
      return {exists_fresh(psi, n->x, {}, [&](Var x1) { return subst(psi, n->x, Term(x1)); }),
              {}};
    }
    case RuleName::Assume: {
      auto* n = c.as<node::Assume>();
      if (!n) return reject("Assume: command is not assume");
      if (!n->cond.is_pure()) return reject("Assume: condition is not pure");
      if (!ok) return {Assertion::falsum(), {}};
      return {Assertion(psi * n->cond), {}};
    }
    case RuleName::Alloc1: {
      auto* n = c.as<node::Alloc>();
      if (!n) return reject("Alloc1: command is not alloc");
      if (!ok) return {Assertion::falsum(), {}};
      VarSet taken = fv(psi);
      taken.insert(n->x);
      Var x1 = fresh_var(n->x, taken);
      taken.insert(x1);
      Var v = fresh_var("v", taken);
      return {Assertion(QuantifiedHeap(
                  {x1, v}, subst(psi, n->x, Term(x1)).with(Atom::points_to(n->x, Term(v))))),
              {}};
    }
    case RuleName::Alloc2: {
      auto* n = c.as<node::Alloc>();
      if (!n) return reject("Alloc2: command is not alloc");
      const auto& atoms = psi.atoms();
      std::optional<std::size_t> j;
      for (std::size_t i = 0; i < atoms.size() && !j; ++i)
        if (atoms[i].kind == Atom::Kind::NegPoints && (!alias || atoms[i].src() == *alias)) j = i;
      if (!j) return reject("Alloc2: precondition has no matching y -/>");
      if (!ok) return {Assertion::falsum(), {}};
      Var y = atoms[*j].src();
      VarSet taken = fv(psi);
      taken.insert(n->x);
      Var x1 = fresh_var(n->x, taken);
      taken.insert(x1);
      Var v = fresh_var("v", taken);
      SymbolicHeap body = subst(psi.without_index(*j), n->x, Term(x1))
                              .with(Atom::points_to(n->x, Term(v)))
                              .with(Atom::eq(n->x, subst(Term(y), n->x, Term(x1))));
      return {Assertion(QuantifiedHeap({x1, v}, body)), {}};
    }
    case RuleName::Free:
    case RuleName::FreeEr: {
      auto* n = c.as<node::Free>();
      if (!n) return reject(std::string(to_string(r)) + ": command is not free");
      if (!canonical_over({n->x}))
        return reject(std::string(to_string(r)) + ": precondition not in CF_sh(fv(psi) + {x})");
      if (r == RuleName::FreeEr) {
        if (has_any_cell(psi, n->x)) return reject("FreeEr: an alias of x points to a value");
        return {ok ? Assertion::falsum() : Assertion(psi), {}};
      }
      auto i = pick_cell(psi, n->x, Atom::Kind::PointsTo, alias);
      if (!i) return reject("Free: no cell y -> t with y in Aliases(x)");
      if (!ok) return {Assertion::falsum(), {}};
      Var y = psi.atoms()[*i].src();
      return {Assertion(psi.without_index(*i).with(Atom::neg_points(y))), {}};
    }
    case RuleName::Load:
    case RuleName::LoadEr: {
      auto* n = c.as<node::Load>();
      if (!n) return reject(std::string(to_string(r)) + ": command is not x := [y]");
      if (!canonical_over({n->x, n->y}))
        return reject(std::string(to_string(r)) +
                      ": precondition not in CF_sh(fv(psi) + {x, y})");
      if (r == RuleName::LoadEr) {
        if (has_any_cell(psi, n->y)) return reject("LoadEr: an alias of y points to a value");
        return {ok ? Assertion::falsum() : Assertion(psi), {}};
      }
      auto i = pick_cell(psi, n->y, Atom::Kind::PointsTo, alias);
      if (!i) return reject("Load: no cell z -> t with z in Aliases(y)");
      if (!ok) return {Assertion::falsum(), {}};
      Term t = psi.atoms()[*i].rhs;
      return {exists_fresh(psi, n->x, {n->y},
                           [&](Var x1) {
                             return subst(psi, n->x, Term(x1))
                                 .with(Atom::eq(n->x, subst(t, n->x, Term(x1))));
                           }),
              {}};
    }
    case RuleName::Store:
    case RuleName::StoreEr: {
      auto* n = c.as<node::Store>();
      if (!n) return reject(std::string(to_string(r)) + ": command is not [x] := t");
      if (!canonical_over(VarSet{n->x} | fv(n->t)))
        return reject(std::string(to_string(r)) +
                      ": precondition not in CF_sh(fv(psi) + {x} + fv(t))");
      if (r == RuleName::StoreEr) {
        if (has_any_cell(psi, n->x)) return reject("StoreEr: an alias of x points to a value");
        return {ok ? Assertion::falsum() : Assertion(psi), {}};
      }
      auto i = pick_cell(psi, n->x, Atom::Kind::PointsTo, alias);
      if (!i) return reject("Store: no cell z -> t' with z in Aliases(x)");
      if (!ok) return {Assertion::falsum(), {}};
      Var z = psi.atoms()[*i].src();
      return {Assertion(psi.without_index(*i).with(Atom::points_to(z, n->t))), {}};
    }
    default:
      return reject(std::string(to_string(r)) + ": not a heap axiom");
  }
}

std::optional<SymbolicHeap> as_heap(const Assertion& p) {
  if (p.disjuncts.size() != 1) return std::nullopt;
  QuantifiedHeap q = tidy(p.disjuncts[0]);
  if (!q.binders.empty()) return std::nullopt;
  return q.body;
}

bool is_heap_axiom(RuleName r) {
  switch (r) {
    case RuleName::Assign:
    case RuleName::Havoc:
    case RuleName::Assume:
    case RuleName::Alloc1:
    case RuleName::Alloc2:
    case RuleName::Free:
    case RuleName::FreeEr:
    case RuleName::Load:
    case RuleName::LoadEr:
    case RuleName::Store:
    case RuleName::StoreEr:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<Assertion> axiom_post(RuleName r, const SymbolicHeap& psi, const Command& c, Exit e,
                                    std::optional<Var> alias) {
  return heap_axiom(r, psi, c, e, alias).post;
}

// ---- checking ---------------------------------------------------------------

namespace {

bool same_command(const CommandPtr& a, const CommandPtr& b) {
  return alpha_equivalent(*desugar(a), *desugar(b));
}

Assertion disjoin(const std::vector<const Triple*>& ps, bool pre) {
  Assertion out;
  for (const Triple* t : ps) out |= pre ? t->pre : t->post;
  return out;
}

std::string show(const Assertion& p) {
  std::string s = to_string(p);
  return s.size() > 160 ? s.substr(0, 157) + "..." : s;
}

std::string check_entails(const Assertion& a, const Assertion& b, const char* what,
                          const CheckOptions& opt) {
  if (same_disjunct_set(a, b)) return {};
  EntailVerdict v = entails(a, b, opt.var_cap);
  if (v.holds()) return {};
  if (v.kind == EntailVerdict::Kind::Unknown)
    return std::string("Cons: ") + what + " undecided: " + v.reason;
  return std::string("Cons: ") + what + " fails, counterexample " + to_string(v.counterexample);
}

// Empty string when the step is an instance of the rule.
std::string step(RuleName r, const Triple& t, const SideData& side,
                 const std::vector<const Triple*>& ps, const CheckOptions& opt) {
  std::string name(to_string(r));
  CommandPtr c = desugar(t.cmd);
  const Command& cm = *c;
  bool ok = t.exit == Exit::Ok;
  auto arity = [&](std::size_t n) -> std::string {
    if (ps.size() == n) return {};
    return name + ": expected " + std::to_string(n) + " premises, got " +
           std::to_string(ps.size());
  };
  auto post_is = [&](const Assertion& want) -> std::string {
    if (same_assertion(t.post, want)) return {};
    return name + ": postcondition should be " + show(want) + ", got " + show(t.post);
  };

  if (is_heap_axiom(r)) {
    if (auto a = arity(0); !a.empty()) return a;
    auto psi = as_heap(t.pre);
    if (!psi) return name + ": precondition must be a single quantifier-free symbolic heap";
    Expected want = heap_axiom(r, *psi, cm, t.exit, side.alias);
    if (!want.post) return want.why;
    if (r == RuleName::Alloc2 || r == RuleName::Free || r == RuleName::Load ||
        r == RuleName::Store) {
      // any admissible choice of cell is fine unless one was named
      if (!side.alias && ok) {
        const auto& atoms = psi->atoms();
        for (const Atom& a : atoms) {
          if (!a.is_cell()) continue;
          auto alt = heap_axiom(r, *psi, cm, t.exit, a.src()).post;
          if (alt && same_assertion(t.post, *alt)) return {};
        }
      }
    }
    return post_is(*want.post);
  }

  switch (r) {
    case RuleName::Skip:
      if (auto a = arity(0); !a.empty()) return a;
      if (!cm.is<node::Skip>()) return "Skip: command is not skip";
      return post_is(ok ? t.pre : Assertion::falsum());
    case RuleName::Error:
      if (auto a = arity(0); !a.empty()) return a;
      if (!cm.is<node::Error>()) return "Error: command is not error()";
      return post_is(ok ? Assertion::falsum() : t.pre);
    case RuleName::LoopZero:
      if (auto a = arity(0); !a.empty()) return a;
      if (!cm.is<node::Star>()) return "LoopZero: command is not a star";
      return post_is(ok ? t.pre : Assertion::falsum());
    case RuleName::LoopNonZero: {
      if (auto a = arity(1); !a.empty()) return a;
      auto* n = cm.as<node::Star>();
      if (!n) return "LoopNonZero: command is not a star";
      const Triple& p = *ps[0];
      if (!same_command(p.cmd, cmd::seq(c, n->body)))
        return "LoopNonZero: premise command must be C* ; C";
      if (p.exit != t.exit) return "LoopNonZero: exit condition differs from premise";
      if (!same_assertion(p.pre, t.pre)) return "LoopNonZero: precondition differs from premise";
      return post_is(p.post);
    }
    case RuleName::Seq1: {
      if (auto a = arity(1); !a.empty()) return a;
      auto* n = cm.as<node::Seq>();
      if (!n) return "Seq1: command is not a sequence";
      if (ok) return "Seq1: conclusion exit must be er";
      const Triple& p = *ps[0];
      if (p.exit != Exit::Er) return "Seq1: premise exit must be er";
      if (!same_command(p.cmd, n->first)) return "Seq1: premise command must be C1";
      if (!same_assertion(p.pre, t.pre)) return "Seq1: precondition differs from premise";
      return post_is(p.post);
    }
    case RuleName::Seq2: {
      if (auto a = arity(2); !a.empty()) return a;
      auto* n = cm.as<node::Seq>();
      if (!n) return "Seq2: command is not a sequence";
      const Triple& p1 = *ps[0];
      const Triple& p2 = *ps[1];
      if (p1.exit != Exit::Ok) return "Seq2: first premise exit must be ok";
      if (p2.exit != t.exit) return "Seq2: second premise exit differs from conclusion";
      if (!same_command(p1.cmd, n->first)) return "Seq2: first premise command must be C1";
      if (!same_command(p2.cmd, n->second)) return "Seq2: second premise command must be C2";
      if (!same_assertion(p1.pre, t.pre)) return "Seq2: precondition differs from first premise";
      if (!same_assertion(p1.post, p2.pre))
        return "Seq2: midcondition differs between premises";
      return post_is(p2.post);
    }
    case RuleName::Cons: {
      if (auto a = arity(1); !a.empty()) return a;
      const Triple& p = *ps[0];
      if (!same_command(p.cmd, c)) return "Cons: premise command differs";
      if (p.exit != t.exit) return "Cons: premise exit differs";
      if (auto s = check_entails(p.pre, t.pre, "P' |= P", opt); !s.empty()) return s;
      return check_entails(t.post, p.post, "Q |= Q'", opt);
    }
    case RuleName::Disj: {
      for (const Triple* p : ps) {
        if (!same_command(p->cmd, c)) return "Disj: premise command differs";
        if (p->exit != t.exit) return "Disj: premise exit differs";
      }
      if (!same_disjunct_set(t.pre, disjoin(ps, true)))
        return "Disj: precondition is not the disjunction of the premise preconditions";
      if (!same_disjunct_set(t.post, disjoin(ps, false)))
        return "Disj: postcondition is not the disjunction of the premise postconditions";
      return {};
    }
    case RuleName::Choice: {
      auto* n = cm.as<node::Choice>();
      if (!n) return "Choice: command is not a choice";
      if (ps.empty() || ps.size() > 2) return "Choice: expected 1 or 2 premises";
      for (const Triple* p : ps) {
        if (p->exit != t.exit) return "Choice: premise exit differs";
        if (!same_assertion(p->pre, t.pre)) return "Choice: precondition differs from premise";
        if (!same_assertion(p->post, t.post)) return "Choice: postcondition differs from premise";
      }
      if (ps.size() == 2) {
        if (!same_command(ps[0]->cmd, n->left) || !same_command(ps[1]->cmd, n->right))
          return "Choice: premise commands must be C1 and C2";
        return {};
      }
      bool left = same_command(ps[0]->cmd, n->left);
      bool right = same_command(ps[0]->cmd, n->right);
      if (side.branch == 1 && !left) return "Choice: premise command must be C1";
      if (side.branch == 2 && !right) return "Choice: premise command must be C2";
      if (!left && !right) return "Choice: premise command is neither branch";
      return {};
    }
    case RuleName::Exist: {
      if (auto a = arity(1); !a.empty()) return a;
      if (side.vars.size() != 1) return "Exist: @vars must name exactly one variable";
      Var x = side.vars[0];
      const Triple& p = *ps[0];
      if (fv(cm).count(x)) return "Exist: x occurs in fv(C)";
      if (!same_command(p.cmd, c)) return "Exist: premise command differs";
      if (p.exit != t.exit) return "Exist: premise exit differs";
      if (!same_assertion(t.pre, exists(x, p.pre)))
        return "Exist: precondition should be exists " + x.name() + " over the premise's";
      return post_is(exists(x, p.post));
    }
    case RuleName::Local: {
      if (auto a = arity(1); !a.empty()) return a;
      auto* n = cm.as<node::Local>();
      if (!n) return "Local: command is not local";
      Var z = side.vars.empty() ? n->x : side.vars[0];
      const Triple& p = *ps[0];
      if (fv(p.pre).count(z)) return "Local: x occurs in fv(psi)";
      if (!alpha_equivalent(*cmd::local(z, desugar(p.cmd)), cm))
        return "Local: premise command is not the body";
      if (p.exit != t.exit) return "Local: premise exit differs";
      if (!same_assertion(p.pre, t.pre)) return "Local: precondition differs from premise";
      return post_is(exists(z, p.post));
    }
    case RuleName::FrameOk: {
      if (auto a = arity(1); !a.empty()) return a;
      if (!side.frame) return "FrameOk: missing @frame";
      if (!ok) return "FrameOk: frame is sound for exit ok only";
      const SymbolicHeap& phi = *side.frame;
      const Triple& p = *ps[0];
      if (p.exit != Exit::Ok) return "FrameOk: premise exit must be ok";
      if (!same_command(p.cmd, c)) return "FrameOk: premise command differs";
      VarSet m = mod_of(cm);
      for (Var v : fv(phi))
        if (m.count(v)) return "FrameOk: mod(C) meets fv(frame) at " + v.name();
      if (!same_assertion(t.pre, star(p.pre, phi)))
        return "FrameOk: precondition should be the premise's * frame";
      return post_is(star(p.post, phi));
    }
    default:
      return name + ": unsupported rule";
  }
}

struct Skeleton {
  RuleName rule;
  Triple conclusion;
  std::vector<const Triple*> premises;
};

// Checks the primitive steps that the bounded Backwards Variant stands for.
std::string check_bv(const Triple& t, const SideData& side, const std::vector<const Triple*>& ps,
                     const CheckOptions& opt) {
  CommandPtr c = desugar(t.cmd);
  auto* n = c->as<node::Star>();
  if (!n) return "BackwardsVariant: command is not a star";
  if (t.exit != Exit::Ok) return "BackwardsVariant: conclusion exit must be ok";
  int bound = side.bound.value_or(static_cast<int>(ps.size()));
  if (bound < 0 || static_cast<std::size_t>(bound) != ps.size())
    return "BackwardsVariant: @bound must equal the number of premises";
  for (const Triple* p : ps) {
    if (p->exit != Exit::Ok) return "BackwardsVariant: premise exit must be ok";
    if (!same_command(p->cmd, n->body)) return "BackwardsVariant: premise command must be C";
  }
  const Assertion& p0 = ps.empty() ? t.pre : ps[0]->pre;
  std::vector<Assertion> family{p0};
  for (const Triple* p : ps) family.push_back(p->post);

  CommandPtr seq = cmd::seq(c, n->body);
  std::vector<Triple> runs;  // [P(0)] C* [ok: P(k)]
  runs.reserve(family.size());
  std::vector<Triple> seqs;
  seqs.reserve(family.size());
  auto check = [&](RuleName r, const Triple& tr, std::vector<const Triple*> prem) {
    std::string s = step(r, tr, {}, prem, opt);
    return s.empty() ? s : "BackwardsVariant expansion: " + s;
  };
  runs.push_back({p0, c, Exit::Ok, p0});
  if (auto s = check(RuleName::LoopZero, runs.back(), {}); !s.empty()) return s;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    seqs.push_back({p0, seq, Exit::Ok, family[k + 1]});
    if (auto s = check(RuleName::Seq2, seqs.back(), {&runs[k], ps[k]}); !s.empty()) return s;
    runs.push_back({p0, c, Exit::Ok, family[k + 1]});
    if (auto s = check(RuleName::LoopNonZero, runs.back(), {&seqs.back()}); !s.empty()) return s;
  }
  std::vector<const Triple*> all;
  Assertion pres, posts;
  for (const Triple& r : runs) {
    all.push_back(&r);
    pres |= r.pre;
    posts |= r.post;
  }
  Triple disj{pres, c, Exit::Ok, posts};
  if (auto s = check(RuleName::Disj, disj, all); !s.empty()) return s;
  if (!same_assertion(t.pre, p0)) return "BackwardsVariant: precondition must be P(0)";
  return check(RuleName::Cons, t, {&disj});
}

CheckResult result(RuleName r, std::string path, std::string msg) {
  CheckResult out;
  out.ok = msg.empty();
  out.rule = r;
  out.path = std::move(path);
  out.message = std::move(msg);
  return out;
}

CheckResult check_tree(const DerivationNode& d, const std::string& path, const CheckOptions& opt) {
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    CheckResult r = check_tree(d.premises[i], path.empty() ? std::to_string(i)
                                                           : path + "." + std::to_string(i),
                               opt);
    if (!r.ok) return r;
  }
  CheckResult r = check_step(d, opt);
  r.path = path;
  return r;
}

}  // namespace

CheckResult check_step(const DerivationNode& node, const CheckOptions& opt) {
  std::vector<const Triple*> ps;
  for (const auto& p : node.premises) ps.push_back(&p.conclusion);
  try {
    if (node.rule == RuleName::BackwardsVariant)
      return result(node.rule, {}, check_bv(node.conclusion, node.side, ps, opt));
    return result(node.rule, {}, step(node.rule, node.conclusion, node.side, ps, opt));
  } catch (const SubstitutionError& e) {
    return result(node.rule, {}, std::string(to_string(node.rule)) + ": " + e.what());
  }
}

CheckResult check_derivation(const DerivationNode& tree, const CheckOptions& opt) {
  return check_tree(tree, "", opt);
}

DerivationNode expand_backwards_variant(const DerivationNode& bv) {
  if (bv.rule != RuleName::BackwardsVariant) return bv;
  CommandPtr c = desugar(bv.conclusion.cmd);
  auto* n = c->as<node::Star>();
  if (!n) return bv;
  const Assertion& p0 = bv.premises.empty() ? bv.conclusion.pre : bv.premises[0].conclusion.pre;
  CommandPtr seq = cmd::seq(c, n->body);
  std::vector<DerivationNode> runs;
  DerivationNode run{RuleName::LoopZero, {p0, c, Exit::Ok, p0}, {}, {}};
  runs.push_back(run);
  for (const auto& prem : bv.premises) {
    const Assertion& next = prem.conclusion.post;
    DerivationNode s{RuleName::Seq2, {p0, seq, Exit::Ok, next}, {}, {run, prem}};
    run = DerivationNode{RuleName::LoopNonZero, {p0, c, Exit::Ok, next}, {}, {std::move(s)}};
    runs.push_back(run);
  }
  Assertion pres, posts;
  for (const auto& r : runs) {
    pres |= r.conclusion.pre;
    posts |= r.conclusion.post;
  }
  DerivationNode disj{RuleName::Disj, {pres, c, Exit::Ok, posts}, {}, std::move(runs)};
  return DerivationNode{RuleName::Cons, bv.conclusion, {}, {std::move(disj)}};
}

// ---- text format ------------------------------------------------------------

namespace {

DerivationNode parse_node(Parser& p) {
  p.expect("(");
  const Token& tok = p.peek();
  std::string name = tok.text;
  auto rule = rule_from_string(name);
  if (tok.kind != Token::Kind::Ident || !rule) p.fail({"rule name"});
  p.ident();
  DerivationNode d;
  d.rule = *rule;
  d.conclusion = p.triple();
  while (p.accept("@")) {
    const Token& key = p.peek();
    std::string k = key.text;
    if (key.kind != Token::Kind::Ident) p.fail({"frame", "vars", "alias", "bound", "branch"});
    p.ident();
    p.expect("(");
    if (k == "frame") {
      d.side.frame = p.heap();
    } else if (k == "vars") {
      while (!p.at(")")) {
        d.side.vars.push_back(p.ident());
        p.accept(",");
      }
    } else if (k == "alias") {
      d.side.alias = p.ident();
    } else if (k == "bound") {
      d.side.bound = p.number();
    } else if (k == "branch") {
      d.side.branch = p.number();
    } else {
      p.fail({"frame", "vars", "alias", "bound", "branch"});
    }
    p.expect(")");
  }
  while (p.at("(")) d.premises.push_back(parse_node(p));
  p.expect(")");
  return d;
}

void print_node(const DerivationNode& d, int indent, std::string& out) {
  out += std::string(static_cast<std::size_t>(indent), ' ');
  out += "(";
  out += to_string(d.rule);
  out += " ";
  out += to_string(d.conclusion);
  if (d.side.frame) out += " @frame(" + to_string(*d.side.frame) + ")";
  if (!d.side.vars.empty()) {
    out += " @vars(";
    for (std::size_t i = 0; i < d.side.vars.size(); ++i)
      out += (i ? " " : "") + d.side.vars[i].name();
    out += ")";
  }
  if (d.side.alias) out += " @alias(" + d.side.alias->name() + ")";
  if (d.side.bound) out += " @bound(" + std::to_string(*d.side.bound) + ")";
  if (d.side.branch) out += " @branch(" + std::to_string(*d.side.branch) + ")";
  for (const auto& p : d.premises) {
    out += "\n";
    print_node(p, indent + 2, out);
  }
  out += ")";
}

}  // namespace

DerivationNode parse_derivation(std::string_view text) {
  Parser p(text);
  DerivationNode d = parse_node(p);
  p.expect_end();
  return d;
}

std::string to_string(const DerivationNode& d) {
  std::string out;
  print_node(d, 0, out);
  return out;
}

std::size_t derivation_size(const DerivationNode& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(p);
  return n;
}

// ---- synthesis --------------------------------------------------------------

namespace {

void collect_locals(const Command& c, VarSet& out) {
  if (auto* n = c.as<node::Local>()) {
    out.insert(n->x);
    collect_locals(*n->body, out);
  } else if (auto* s = c.as<node::Seq>()) {
    collect_locals(*s->first, out);
    collect_locals(*s->second, out);
  } else if (auto* ch = c.as<node::Choice>()) {
    collect_locals(*ch->left, out);
    collect_locals(*ch->right, out);
  } else if (auto* st = c.as<node::Star>()) {
    collect_locals(*st->body, out);
  }
}

DerivationNode axiom(RuleName r, const SymbolicHeap& h, const CommandPtr& c, Exit e,
                     std::optional<Var> alias = std::nullopt) {
  DerivationNode d;
  d.rule = r;
  d.side.alias = alias;
  d.conclusion = {Assertion(h), c, e, *axiom_post(r, h, *c, e, alias)};
  return d;
}

DerivationNode disj(const CommandPtr& c, Exit e, std::vector<DerivationNode> kids,
                    std::optional<Assertion> pre = std::nullopt) {
  if (kids.size() == 1 && !pre) return std::move(kids[0]);
  Assertion pres, posts;
  for (const auto& k : kids) {
    pres |= k.conclusion.pre;
    posts |= k.conclusion.post;
  }
  DerivationNode d;
  d.rule = RuleName::Disj;
  d.conclusion = {pre ? *pre : pres, c, e, posts};
  d.premises = std::move(kids);
  return d;
}

class Synth {
 public:
  explicit Synth(const WpoConfig& cfg) : cfg_(cfg) {}

  // [P] c [e: wpo(P, c, e)] via Exist, Disj and Cons over the canonical cases.
  DerivationNode derive(const Assertion& p, const CommandPtr& c, Exit e) {
    Assertion cp = cano(p, *c, cfg_.var_cap, fv(p) | fv(*c));
    std::vector<DerivationNode> kids;
    for (const auto& q : cp.disjuncts) {
      DerivationNode d = heap(q.body, c, e);
      for (auto it = q.binders.rbegin(); it != q.binders.rend(); ++it) {
        DerivationNode ex;
        ex.rule = RuleName::Exist;
        ex.side.vars = {*it};
        ex.conclusion = {exists(*it, d.conclusion.pre), c, e, exists(*it, d.conclusion.post)};
        ex.premises.push_back(std::move(d));
        d = std::move(ex);
      }
      kids.push_back(std::move(d));
    }
    DerivationNode body = kids.empty()       ? disj(c, e, {}, Assertion::falsum())
                          : kids.size() == 1 ? std::move(kids[0])
                                             : disj(c, e, std::move(kids));
    Assertion target = wpo(p, c, e, cfg_);
    if (same_assertion(body.conclusion.pre, p) && same_assertion(body.conclusion.post, target))
      return body;
    DerivationNode cons;
    cons.rule = RuleName::Cons;
    cons.conclusion = {p, c, e, target};
    cons.premises.push_back(std::move(body));
    return cons;
  }

  // [h] c [e: ...] for h canonical over fv(h) + fv(c).
  DerivationNode heap(const SymbolicHeap& h, const CommandPtr& c, Exit e) {
    const Command& cm = *c;
    bool ok = e == Exit::Ok;
    Assertion pre(h);
    if (cm.is<node::Skip>())
      return leaf(RuleName::Skip, {pre, c, e, ok ? pre : Assertion::falsum()});
    if (cm.is<node::Error>())
      return leaf(RuleName::Error, {pre, c, e, ok ? Assertion::falsum() : pre});
    if (cm.is<node::Assign>()) return axiom(RuleName::Assign, h, c, e);
    if (cm.is<node::Havoc>()) return axiom(RuleName::Havoc, h, c, e);
    if (cm.is<node::Assume>()) return axiom(RuleName::Assume, h, c, e);
    if (cm.is<node::Alloc>()) {
      if (!ok) return axiom(RuleName::Alloc1, h, c, e);
      std::vector<DerivationNode> kids{axiom(RuleName::Alloc1, h, c, e)};
      for (const Atom& a : h.atoms())
        if (a.kind == Atom::Kind::NegPoints) kids.push_back(axiom(RuleName::Alloc2, h, c, e, a.src()));
      return disj(c, e, std::move(kids), pre);
    }
    if (auto* n = cm.as<node::Free>()) {
      if (auto i = pick_cell(h, n->x, Atom::Kind::PointsTo, std::nullopt))
        return axiom(RuleName::Free, h, c, e, h.atoms()[*i].src());
      return axiom(RuleName::FreeEr, h, c, e);
    }
    if (auto* n = cm.as<node::Load>()) {
      if (auto i = pick_cell(h, n->y, Atom::Kind::PointsTo, std::nullopt))
        return axiom(RuleName::Load, h, c, e, h.atoms()[*i].src());
      return axiom(RuleName::LoadEr, h, c, e);
    }
    if (auto* n = cm.as<node::Store>()) {
      if (auto i = pick_cell(h, n->x, Atom::Kind::PointsTo, std::nullopt))
        return axiom(RuleName::Store, h, c, e, h.atoms()[*i].src());
      return axiom(RuleName::StoreEr, h, c, e);
    }
    if (auto* n = cm.as<node::Local>()) return local(h, c, n->x, n->body, e);
    if (auto* n = cm.as<node::Seq>()) {
      DerivationNode first = heap(h, n->first, Exit::Ok);
      DerivationNode second = derive(first.conclusion.post, n->second, e);
      DerivationNode s2;
      s2.rule = RuleName::Seq2;
      s2.conclusion = {pre, c, e, second.conclusion.post};
      s2.premises.push_back(std::move(first));
      s2.premises.push_back(std::move(second));
      if (ok) return s2;
      DerivationNode early = heap(h, n->first, Exit::Er);
      DerivationNode s1;
      s1.rule = RuleName::Seq1;
      s1.conclusion = {pre, c, e, early.conclusion.post};
      s1.premises.push_back(std::move(early));
      std::vector<DerivationNode> kids;
      kids.push_back(std::move(s1));
      kids.push_back(std::move(s2));
      return disj(c, e, std::move(kids), pre);
    }
    if (auto* n = cm.as<node::Choice>()) {
      std::vector<DerivationNode> kids;
      int branch = 1;
      for (const CommandPtr& side : {n->left, n->right}) {
        DerivationNode sub = heap(h, side, e);
        DerivationNode ch;
        ch.rule = RuleName::Choice;
        ch.side.branch = branch++;
        ch.conclusion = {pre, c, e, sub.conclusion.post};
        ch.premises.push_back(std::move(sub));
        kids.push_back(std::move(ch));
      }
      return disj(c, e, std::move(kids), pre);
    }
    if (auto* n = cm.as<node::Star>()) return loop(h, c, n->body, e);
    return heap(h, desugar(c), e);
  }

 private:
  static DerivationNode leaf(RuleName r, Triple t) {
    DerivationNode d;
    d.rule = r;
    d.conclusion = std::move(t);
    return d;
  }

  DerivationNode local(const SymbolicHeap& h, const CommandPtr& c, Var x, const CommandPtr& body,
                       Exit e) {
    Var z = x;
    CommandPtr renamed = body;
    if (fv(h).count(x)) {
      VarSet taken = fv(h) | fv(*body);
      collect_locals(*body, taken);
      taken.insert(x);
      z = fresh_var(x, taken);
      renamed = rename_free(body, x, z);
    }
    DerivationNode sub = derive(Assertion(h), renamed, e);
    DerivationNode d;
    d.rule = RuleName::Local;
    if (z != x) d.side.vars = {z};
    d.conclusion = {Assertion(h), c, e, exists(z, sub.conclusion.post)};
    d.premises.push_back(std::move(sub));
    return d;
  }

  DerivationNode bv(const Assertion& p0, const CommandPtr& c, std::vector<DerivationNode> steps) {
    DerivationNode d;
    d.rule = RuleName::BackwardsVariant;
    d.side.bound = static_cast<int>(steps.size());
    Assertion post = p0;
    for (const auto& s : steps) post |= s.conclusion.post;
    d.conclusion = {p0, c, Exit::Ok, post};
    d.premises = std::move(steps);
    return d;
  }

  DerivationNode loop(const SymbolicHeap& h, const CommandPtr& c, const CommandPtr& body, Exit e) {
    Assertion pre(h);
    std::vector<Assertion> ups{pre};
    std::vector<DerivationNode> steps;
    Assertion acc = pre;
    bool fixpoint = false;
    for (int n = 0; n < cfg_.loop_bound; ++n) {
      DerivationNode s = derive(ups.back(), body, Exit::Ok);
      const Assertion& next = s.conclusion.post;
      if (cfg_.detect_fixpoint &&
          (next.is_false() || entails(next, acc, cfg_.var_cap).holds())) {
        fixpoint = true;
        break;
      }
      acc |= next;
      ups.push_back(next);
      steps.push_back(std::move(s));
    }
    if (e == Exit::Ok) return bv(pre, c, std::move(steps));
    std::size_t count = fixpoint ? ups.size() : ups.size() - 1;
    if (count == 0) return leaf(RuleName::LoopZero, {pre, c, e, Assertion::falsum()});
    steps.resize(count - 1);
    DerivationNode run = bv(pre, c, std::move(steps));
    std::vector<DerivationNode> errs;
    for (std::size_t i = 0; i < count; ++i) errs.push_back(derive(ups[i], body, Exit::Er));
    DerivationNode last = disj(body, e, std::move(errs), run.conclusion.post);
    Assertion q = last.conclusion.post;
    DerivationNode s2;
    s2.rule = RuleName::Seq2;
    s2.conclusion = {pre, cmd::seq(c, body), e, q};
    s2.premises.push_back(std::move(run));
    s2.premises.push_back(std::move(last));
    DerivationNode d;
    d.rule = RuleName::LoopNonZero;
    d.conclusion = {pre, c, e, q};
    d.premises.push_back(std::move(s2));
    return d;
  }

  const WpoConfig& cfg_;
};

}  // namespace

DerivationNode synthesize_derivation(const Assertion& p, const CommandPtr& c, Exit e,
                                     const WpoConfig& cfg) {
  Synth s(cfg);
  CommandPtr core = desugar(c);
  DerivationNode d = s.derive(p, core, e);
  if (core != c) d.conclusion.cmd = c;
  return d;
}

}  // namespace isl
