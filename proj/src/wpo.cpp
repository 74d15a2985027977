#include "islkit/wpo.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"

namespace isl {

namespace {

std::optional<std::size_t> find_cell(const SymbolicHeap& h, Var x, Atom::Kind kind) {
  VarSet as = aliases(x, h);
  as.insert(x);
  const auto& atoms = h.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].kind == kind && as.count(atoms[i].src())) return i;
  return std::nullopt;
}

void require_canonical(const SymbolicHeap& h, const VarSet& extra, const char* what) {
  if (!is_canonical(h, fv(h) | extra))
    throw NotCanonical(std::string(what) + ": precondition not canonical: " + to_string(h));
}

}  // namespace

// ---- heap clauses ----------------------------------------------------------

Assertion alloc_ok(const SymbolicHeap& h, Var x, const VarSet& avoid) {
  VarSet taken = fv(h) | avoid;
  taken.insert(x);
  Var x1 = fresh_var(x, taken);
  taken.insert(x1);
  Var v = fresh_var("v", taken);
  Assertion out;
  out.disjuncts.emplace_back(std::vector<Var>{x1, v},
                             subst(h, x, Term(x1)).with(Atom::points_to(x, Term(v))));
  const auto& atoms = h.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].kind != Atom::Kind::NegPoints) continue;
    Var y = atoms[j].src();
    SymbolicHeap body = subst(h.without_index(j), x, Term(x1))
                            .with(Atom::points_to(x, Term(v)))
                            .with(Atom::eq(x, subst(Term(y), x, Term(x1))));
    out.disjuncts.emplace_back(std::vector<Var>{x1, v}, body);
  }
  return out;
}

Assertion free_post(const SymbolicHeap& h, Var x, Exit e) {
  require_canonical(h, {x}, "free");
  auto i = find_cell(h, x, Atom::Kind::PointsTo);
  if (e == Exit::Er) return i ? Assertion::falsum() : Assertion(h);
  if (!i) return Assertion::falsum();
  Var y = h.atoms()[*i].src();
  return Assertion(h.without_index(*i).with(Atom::neg_points(y)));
}

Assertion load_post(const SymbolicHeap& h, Var x, Var y, Exit e, const VarSet& avoid) {
  require_canonical(h, {x, y}, "load");
  auto i = find_cell(h, y, Atom::Kind::PointsTo);
  if (e == Exit::Er) return i ? Assertion::falsum() : Assertion(h);
  if (!i) return Assertion::falsum();
  Term t = h.atoms()[*i].rhs;
  VarSet taken = fv(h) | avoid;
  taken.insert(x);
  taken.insert(y);
  Var x1 = fresh_var(x, taken);
  SymbolicHeap body = subst(h, x, Term(x1)).with(Atom::eq(x, subst(t, x, Term(x1))));
  return Assertion(QuantifiedHeap({x1}, body));
}

Assertion store_post(const SymbolicHeap& h, Var x, Term t, Exit e) {
  require_canonical(h, VarSet{x} | fv(t), "store");
  auto i = find_cell(h, x, Atom::Kind::PointsTo);
  if (e == Exit::Er) return i ? Assertion::falsum() : Assertion(h);
  if (!i) return Assertion::falsum();
  Var z = h.atoms()[*i].src();
  return Assertion(h.without_index(*i).with(Atom::points_to(z, t)));
}

Assertion wrap_exists(const std::vector<Var>& binders, const Assertion& p) {
  if (binders.empty()) return p;
  VarSet outer(binders.begin(), binders.end());
  Assertion out;
  for (const auto& q : p.disjuncts) {
    VarSet free = fv(q);
    QuantifiedHeap inner = rename_binders_away(q, outer);
    std::vector<Var> bs;
    for (Var b : binders)
      if (free.count(b)) bs.push_back(b);
    bs.insert(bs.end(), inner.binders.begin(), inner.binders.end());
    out.disjuncts.emplace_back(std::move(bs), inner.body);
  }
  return out;
}

// ---- simplification --------------------------------------------------------

std::optional<QuantifiedHeap> simplify_opt(const QuantifiedHeap& q) {
  SymbolicHeap body = q.body.normalized();
  if (!satisfiable(body)) return std::nullopt;
  std::vector<Var> binders = q.binders;
  auto is_binder = [&](Term t) {
    return t.is_var() && std::find(binders.begin(), binders.end(), t.var()) != binders.end();
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < binders.size() && !changed; ++k) {
      Term b(binders[k]);
      std::optional<Term> best;
      int best_rank = 3;
      for (const Atom& a : body.atoms()) {
        if (a.kind != Atom::Kind::Eq) continue;
        Term other = a.lhs == b ? a.rhs : a.rhs == b ? a.lhs : b;
        if (other == b) continue;
        int rank = other.is_null() ? 1 : is_binder(other) ? 2 : 0;
        if (rank < best_rank) {
          best_rank = rank;
          best = other;
        }
      }
      if (!best) continue;
      body = subst(body, binders[k], *best).normalized();
      binders.erase(binders.begin() + static_cast<std::ptrdiff_t>(k));
      changed = true;
    }
  }
  VarSet free = fv(body);
  std::vector<Var> live;
  for (Var b : binders)
    if (free.count(b)) live.push_back(b);
  return QuantifiedHeap(std::move(live), std::move(body));
}

QuantifiedHeap simplify(const QuantifiedHeap& q) {
  auto r = simplify_opt(q);
  if (!r) return QuantifiedHeap({}, SymbolicHeap({Atom::neq(Term::null(), Term::null())}));
  return *r;
}

std::string alpha_key(const QuantifiedHeap& q) {
  std::vector<std::pair<std::string, Var>> sig;
  for (Var b : q.binders) {
    std::vector<std::string> parts;
    for (const Atom& a : q.body.atoms()) {
      if (a.lhs != Term(b) && a.rhs != Term(b)) continue;
      Atom masked = subst(a, b, Term(Var("#")));
      for (Var o : q.binders)
        if (o != b) masked = subst(masked, o, Term(Var("?")));
      parts.push_back(to_string(masked));
    }
    std::sort(parts.begin(), parts.end());
    std::string joined;
    for (auto& x : parts) joined += x + ";";
    sig.emplace_back(joined, b);
  }
  std::stable_sort(sig.begin(), sig.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SymbolicHeap body = q.body;
  // two passes keep the renaming capture free
  for (std::size_t i = 0; i < sig.size(); ++i)
    body = subst(body, sig[i].second, Term(Var("%t" + std::to_string(i))));
  for (std::size_t i = 0; i < sig.size(); ++i)
    body = subst(body, Var("%t" + std::to_string(i)), Term(Var("%b" + std::to_string(i))));
  return std::to_string(sig.size()) + ":" + to_string(body);
}

namespace {

// Removing binders that occur in no spatial atom, together with every atom
// mentioning them, weakens a disjunct in every domain.
std::vector<QuantifiedHeap> weakenings(const QuantifiedHeap& q) {
  std::vector<Var> pure_only;
  for (Var b : q.binders) {
    bool spatial = false;
    for (const Atom& a : q.body.atoms())
      if (a.is_cell() && (a.lhs == Term(b) || a.rhs == Term(b))) spatial = true;
    if (!spatial) pure_only.push_back(b);
  }
  auto drop = [&](const std::vector<Var>& gone) {
    std::vector<Atom> atoms;
    for (const Atom& a : q.body.atoms()) {
      bool hit = false;
      for (Var g : gone) hit = hit || a.lhs == Term(g) || a.rhs == Term(g);
      if (!hit) atoms.push_back(a);
    }
    std::vector<Var> bs;
    for (Var b : q.binders)
      if (std::find(gone.begin(), gone.end(), b) == gone.end()) bs.push_back(b);
    return QuantifiedHeap(std::move(bs), SymbolicHeap(std::move(atoms)));
  };
  std::vector<QuantifiedHeap> out;
  if (pure_only.empty()) return out;
  out.push_back(drop(pure_only));
  if (pure_only.size() > 1)
    for (Var b : pure_only) out.push_back(drop({b}));
  return out;
}

}  // namespace

Assertion simplify(const Assertion& p) {
  std::vector<QuantifiedHeap> kept;
  std::vector<std::string> keys;
  std::set<std::string> seen;
  for (const auto& q : p.disjuncts) {
    auto r = simplify_opt(q);
    if (!r) continue;
    std::string k = alpha_key(*r);
    if (!seen.insert(k).second) continue;
    kept.push_back(std::move(*r));
    keys.push_back(std::move(k));
  }
  Assertion out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool subsumed = false;
    for (const QuantifiedHeap& w : weakenings(kept[i])) {
      std::string k = alpha_key(w);
      if (k != keys[i] && seen.count(k)) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) out.disjuncts.push_back(std::move(kept[i]));
  }
  return out;
}

// ---- engine ----------------------------------------------------------------

namespace {

class Engine {
 public:
  Engine(const WpoConfig& cfg, WpoStats* stats, VarSet avoid)
      : cfg_(cfg), stats_(stats), avoid_(std::move(avoid)) {}

  Assertion wpo(const Assertion& p, const CommandPtr& c, Exit e) {
    Assertion cp = cano(p, *c, cfg_.var_cap, avoid_);
    Assertion out;
    for (const auto& q : cp.disjuncts) {
      out |= wrap_exists(q.binders, wpo_sh(q.body, c, e));
      check_cap(out);
    }
    return cfg_.prune ? simplify(out) : out;
  }

  StarIterates iterates(const SymbolicHeap& h, const CommandPtr& body) {
    StarIterates it;
    it.upsilon.emplace_back(h);
    Assertion acc(h);
    for (int n = 0; n < cfg_.loop_bound; ++n) {
      Assertion next = wpo(it.upsilon.back(), body, Exit::Ok);
      if (cfg_.detect_fixpoint &&
          (next.is_false() || entails(next, acc, cfg_.var_cap).holds())) {
        it.fixpoint = true;
        break;
      }
      acc |= next;
      check_cap(acc);
      it.upsilon.push_back(std::move(next));
    }
    return it;
  }

  Assertion wpo_sh(const SymbolicHeap& h, const CommandPtr& c, Exit e) {
    const Command& cm = *c;
    bool ok = e == Exit::Ok;
    if (cm.is<node::Skip>()) return ok ? Assertion(h) : Assertion::falsum();
    if (cm.is<node::Error>()) return ok ? Assertion::falsum() : Assertion(h);
    if (auto* n = cm.as<node::Assume>()) return ok ? Assertion(h * n->cond) : Assertion::falsum();
    if (auto* n = cm.as<node::Assign>()) {
      if (!ok) return Assertion::falsum();
      VarSet taken = fv(h) | fv(n->t) | avoid_;
      taken.insert(n->x);
      Var x1 = fresh_var(n->x, taken);
      SymbolicHeap body =
          subst(h, n->x, Term(x1)).with(Atom::eq(n->x, subst(n->t, n->x, Term(x1))));
      return Assertion(QuantifiedHeap({x1}, body));
    }
    if (auto* n = cm.as<node::Havoc>()) {
      if (!ok) return Assertion::falsum();
      VarSet taken = fv(h) | avoid_;
      taken.insert(n->x);
      Var x1 = fresh_var(n->x, taken);
      return Assertion(QuantifiedHeap({x1}, subst(h, n->x, Term(x1))));
    }
    if (auto* n = cm.as<node::Local>()) return local(h, n->x, n->body, e);
    if (auto* n = cm.as<node::Seq>()) {
      Assertion mid = wpo_sh(h, n->first, Exit::Ok);
      if (cfg_.prune) mid = simplify(mid);
      if (ok) return wpo(mid, n->second, Exit::Ok);
      Assertion out = wpo_sh(h, n->first, Exit::Er) | wpo(mid, n->second, Exit::Er);
      check_cap(out);
      return out;
    }
    if (auto* n = cm.as<node::Choice>()) return wpo_sh(h, n->left, e) | wpo_sh(h, n->right, e);
    if (auto* n = cm.as<node::Star>()) {
      if (stats_) stats_->stars++;
      StarIterates it = iterates(h, n->body);
      if (stats_ && it.fixpoint) stats_->fixpoints++;
      Assertion out;
      if (ok) {
        for (const auto& u : it.upsilon) out |= u;
        check_cap(out);
        return out;
      }
      std::size_t count = it.fixpoint ? it.upsilon.size() : it.upsilon.size() - 1;
      for (std::size_t i = 0; i < count; ++i) {
        out |= wpo(it.upsilon[i], n->body, Exit::Er);
        check_cap(out);
      }
      return out;
    }
    if (auto* n = cm.as<node::Alloc>()) return ok ? alloc_ok(h, n->x, avoid_) : Assertion::falsum();
    if (auto* n = cm.as<node::Free>()) return free_post(h, n->x, e);
    if (auto* n = cm.as<node::Load>()) return load_post(h, n->x, n->y, e, avoid_);
    if (auto* n = cm.as<node::Store>()) return store_post(h, n->x, n->t, e);
    return wpo_sh(h, desugar(c), e);
  }

 private:
  void check_cap(const Assertion& a) const {
    if (cfg_.disjunct_cap > 0 && a.disjuncts.size() > static_cast<std::size_t>(cfg_.disjunct_cap))
      throw DisjunctCapExceeded(a.disjuncts.size(), cfg_.disjunct_cap);
  }

  Assertion local(const SymbolicHeap& h, Var x, const CommandPtr& body, Exit e) {
    VarSet taken = fv(h) | fv(*body) | avoid_;
    taken.insert(x);
    Var x1 = fresh_var(x, taken);
    taken.insert(x1);
    Var x2 = fresh_var(x, taken);
    VarSet saved = avoid_;
    avoid_.insert(x1);
    avoid_.insert(x2);
    Assertion r = wpo(Assertion(subst(h, x, Term(x1))), body, e);
    avoid_ = std::move(saved);
    VarSet clash{x, x1, x2};
    Assertion out;
    for (const auto& q : r.disjuncts) {
      QuantifiedHeap s = rename_binders_away(q, clash);
      SymbolicHeap b = subst(subst(s.body, x, Term(x2)), x1, Term(x));
      std::vector<Var> bs{x2};
      bs.insert(bs.end(), s.binders.begin(), s.binders.end());
      out.disjuncts.emplace_back(std::move(bs), std::move(b));
    }
    return out;
  }

  const WpoConfig& cfg_;
  WpoStats* stats_;
  VarSet avoid_;
};

}  // namespace

Assertion wpo(const Assertion& p, const CommandPtr& c, Exit e, const WpoConfig& cfg,
              WpoStats* stats) {
  CommandPtr core = desugar(c);
  Engine eng(cfg, stats, fv(p) | fv(*core));
  return eng.wpo(p, core, e);
}

Assertion wpo_sh(const SymbolicHeap& h, const CommandPtr& c, Exit e, const WpoConfig& cfg,
                 WpoStats* stats) {
  CommandPtr core = desugar(c);
  Engine eng(cfg, stats, fv(h) | fv(*core));
  Assertion r = eng.wpo_sh(h, core, e);
  return cfg.prune ? simplify(r) : r;
}

StarIterates star_iterates(const SymbolicHeap& h, const CommandPtr& body, const WpoConfig& cfg,
                           const VarSet& avoid) {
  CommandPtr core = desugar(body);
  Engine eng(cfg, nullptr, fv(h) | fv(*core) | avoid);
  return eng.iterates(h, core);
}

}  // namespace isl
