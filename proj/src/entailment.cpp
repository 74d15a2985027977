#include "islkit/entailment.hpp"

#include <algorithm>
#include <map>

namespace isl {

std::string to_string(EntailVerdict::Kind k) {
  switch (k) {
    case EntailVerdict::Kind::Holds: return "holds";
    case EntailVerdict::Kind::Fails: return "fails";
    case EntailVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::pair<State, DomainSpec> generic_model(const SymbolicHeap& h, int spare) {
  // Classes from the equalities of h; terms not mentioned are their own class.
  std::vector<Term> terms{Term::null()};
  for (Var v : fv(h)) terms.emplace_back(v);
  std::vector<int> cls(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) cls[i] = static_cast<int>(i);
  auto idx = [&](Term t) {
    return static_cast<int>(std::find(terms.begin(), terms.end(), t) - terms.begin());
  };
  auto root = [&](int i) {
    while (cls[i] != i) i = cls[i];
    return i;
  };
  for (const Atom& a : h.atoms())
    if (a.kind == Atom::Kind::Eq) {
      int x = root(idx(a.lhs)), y = root(idx(a.rhs));
      if (x != y) cls[std::max(x, y)] = std::min(x, y);
    }
  std::map<int, Value> value_of;
  value_of[root(0)] = kNull;
  Value next = 1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    int r = root(static_cast<int>(i));
    if (!value_of.count(r)) value_of[r] = next++;
  }
  auto val = [&](Term t) { return value_of[root(idx(t))]; };
  State st;
  for (std::size_t i = 1; i < terms.size(); ++i)
    st.store = st.store.set(terms[i].var(), val(terms[i]));
  for (const Atom& a : h.atoms()) {
    if (a.kind == Atom::Kind::PointsTo) st.heap = st.heap.set(val(a.lhs), val(a.rhs));
    if (a.kind == Atom::Kind::NegPoints) st.heap = st.heap.set(val(a.lhs), kBottom);
  }
  DomainSpec d;
  d.locations = (next - 1) + spare;
  d.max_heap_cells = static_cast<int>(st.heap.size());
  return {st, d};
}

bool entails_sh(const SymbolicHeap& h, const QuantifiedHeap& q) {
  auto [st, d] = generic_model(h, static_cast<int>(q.binders.size()));
  return satisfies(st, q, d);
}

EntailVerdict entails(const Assertion& p, const Assertion& q, int cap) {
  EntailVerdict out;
  VarSet qfv = fv(q);
  try {
    for (const auto& pd : p.disjuncts) {
      // Skolemize P's binders; rename Q's binders away from everything free.
      QuantifiedHeap sk = rename_binders_away(pd, qfv);
      VarSet vars = fv(sk.body) | qfv;
      std::vector<QuantifiedHeap> qs;
      for (const auto& d : q.disjuncts) qs.push_back(rename_binders_away(d, vars));
      for (const SymbolicHeap& h : ca(sk.body, qfv, cap)) {
        bool ok = std::any_of(qs.begin(), qs.end(),
                              [&](const QuantifiedHeap& d) { return entails_sh(h, d); });
        if (ok) continue;
        auto [st, dom] = generic_model(h, 0);
        // Only the free variables of P and Q belong in the reported state.
        Store s;
        for (Var v : fv(pd) | qfv) s = s.set(v, st.store(v));
        out.kind = EntailVerdict::Kind::Fails;
        out.counterexample = {s, st.heap};
        out.domain = dom;
        out.domain.locations = std::max(dom.locations, 1);
        return out;
      }
    }
  } catch (const VarCapExceeded& e) {
    out.kind = EntailVerdict::Kind::Unknown;
    out.reason = e.what();
  }
  return out;
}

bool entails_oracle(const Assertion& p, const Assertion& q, const DomainSpec& d) {
  for (const State& st : enum_states(fv(p) | fv(q), d))
    if (satisfies(st, p, d) && !satisfies(st, q, d)) return false;
  return true;
}

}  // namespace isl
