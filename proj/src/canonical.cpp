#include "islkit/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace isl {

VarCapExceeded::VarCapExceeded(std::size_t n, int c)
    : CapExceeded("case analysis over " + std::to_string(n) +
                         " variables exceeds the cap of " + std::to_string(c)),
      vars(n),
      cap(c) {}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Terms of h indexed densely; null is index 0.
struct TermIndex {
  std::vector<Term> terms{Term::null()};
  int of(Term t) {
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (terms[i] == t) return static_cast<int>(i);
    terms.push_back(t);
    return static_cast<int>(terms.size() - 1);
  }
};

}  // namespace

bool satisfiable(const SymbolicHeap& h) {
  TermIndex idx;
  for (const Atom& a : h.atoms()) {
    if (a.kind == Atom::Kind::Emp) continue;
    idx.of(a.lhs);
    idx.of(a.rhs);
  }
  UnionFind uf(idx.terms.size());
  for (const Atom& a : h.atoms())
    if (a.kind == Atom::Kind::Eq) uf.unite(idx.of(a.lhs), idx.of(a.rhs));
  std::vector<int> sources;
  for (const Atom& a : h.atoms()) {
    if (a.kind == Atom::Kind::Neq && uf.find(idx.of(a.lhs)) == uf.find(idx.of(a.rhs)))
      return false;
    if (a.is_cell()) {
      int r = uf.find(idx.of(a.lhs));
      if (r == uf.find(0)) return false;
      if (std::find(sources.begin(), sources.end(), r) != sources.end()) return false;
      sources.push_back(r);
    }
  }
  return true;
}

VarSet aliases(Var x, const SymbolicHeap& h) {
  VarSet out;
  Term tx(x);
  for (const Atom& a : h.atoms()) {
    if (a.kind != Atom::Kind::Eq) continue;
    if (a.lhs == tx && a.rhs.is_var() && a.rhs != tx) out.insert(a.rhs.var());
    if (a.rhs == tx && a.lhs.is_var() && a.lhs != tx) out.insert(a.lhs.var());
  }
  return out;
}

bool is_canonical(const SymbolicHeap& h, const VarSet& vars) {
  std::vector<Term> ts(vars.begin(), vars.end());
  ts.push_back(Term::null());
  const auto& atoms = h.atoms();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      Atom e = Atom::eq(ts[i], ts[j]);
      Atom n = Atom::neq(ts[i], ts[j]);
      if (!std::binary_search(atoms.begin(), atoms.end(), e) &&
          !std::binary_search(atoms.begin(), atoms.end(), n))
        return false;
    }
  }
  return true;
}

namespace {

// Partition enumeration with pruning. Element 0 is null.
class Partitioner {
 public:
  Partitioner(std::vector<Term> terms, const SymbolicHeap& h) : terms_(std::move(terms)) {
    std::size_t n = terms_.size();
    same_.assign(n, {});
    diff_.assign(n, {});
    block_.assign(n, -1);
    auto index = [&](Term t) {
      for (std::size_t i = 0; i < n; ++i)
        if (terms_[i] == t) return static_cast<int>(i);
      return -1;
    };
    // Constraints are attached to the later of their two elements.
    auto add = [&](std::vector<std::vector<int>>& table, int a, int b) {
      if (a == b) {
        if (&table == &diff_) dead_ = true;
        return;
      }
      if (a < b) std::swap(a, b);
      table[a].push_back(b);
    };
    std::vector<int> sources;
    for (const Atom& a : h.atoms()) {
      if (a.kind == Atom::Kind::Eq) add(same_, index(a.lhs), index(a.rhs));
      if (a.kind == Atom::Kind::Neq) add(diff_, index(a.lhs), index(a.rhs));
      if (a.is_cell()) {
        int s = index(a.lhs);
        add(diff_, s, 0);
        for (int o : sources) add(diff_, s, o);
        sources.push_back(s);
      }
    }
  }

  std::vector<SymbolicHeap> run() {
    out_.clear();
    if (dead_) return out_;
    block_[0] = 0;
    extend(1, 1);
    return out_;
  }

 private:
  bool consistent(std::size_t i) const {
    for (int j : same_[i])
      if (block_[j] != block_[i]) return false;
    for (int j : diff_[i])
      if (block_[j] == block_[i]) return false;
    return true;
  }

  void extend(std::size_t i, int blocks) {
    if (i == terms_.size()) {
      std::vector<Atom> atoms;
      for (std::size_t a = 0; a < terms_.size(); ++a)
        for (std::size_t b = a + 1; b < terms_.size(); ++b)
          atoms.push_back(block_[a] == block_[b] ? Atom::eq(terms_[a], terms_[b])
                                                 : Atom::neq(terms_[a], terms_[b]));
      out_.emplace_back(std::move(atoms));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block_[i] = b;
      if (consistent(i)) extend(i + 1, b == blocks ? blocks + 1 : blocks);
    }
    block_[i] = -1;
  }

  std::vector<Term> terms_;
  std::vector<std::vector<int>> same_, diff_;
  std::vector<int> block_;
  bool dead_ = false;
  std::vector<SymbolicHeap> out_;
};

std::vector<Term> term_list(const VarSet& vars) {
  std::vector<Term> ts{Term::null()};
  for (Var v : vars) ts.push_back(v);
  return ts;
}

}  // namespace

std::vector<SymbolicHeap> pi(const VarSet& vars) {
  return Partitioner(term_list(vars), SymbolicHeap()).run();
}

std::vector<SymbolicHeap> ca(const SymbolicHeap& h, const VarSet& vars, int cap) {
  VarSet all = vars | fv(h);
  if (static_cast<int>(all.size()) > cap) throw VarCapExceeded(all.size(), cap);
  std::vector<SymbolicHeap> out;
  for (const SymbolicHeap& p : Partitioner(term_list(all), h).run())
    out.push_back((p * h).normalized());
  return out;
}

std::vector<SymbolicHeap> ca(const SymbolicHeap& h, const Command& c, int cap) {
  return ca(h, fv(c), cap);
}

Assertion cano(const Assertion& p, const Command& c, int cap, const VarSet& avoid) {
  VarSet away = fv(c) | avoid;
  Assertion out;
  for (const auto& q : p.disjuncts) {
    QuantifiedHeap r = rename_binders_away(q, away);
    for (SymbolicHeap& h : ca(r.body, fv(c), cap)) out.disjuncts.emplace_back(r.binders, std::move(h));
  }
  return out;
}

Assertion cano_vars(const Assertion& p, const VarSet& vars, int cap) {
  Assertion out;
  for (const auto& q : p.disjuncts) {
    QuantifiedHeap r = rename_binders_away(q, vars);
    for (SymbolicHeap& h : ca(r.body, vars, cap)) out.disjuncts.emplace_back(r.binders, std::move(h));
  }
  return out;
}

}  // namespace isl
