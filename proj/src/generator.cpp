#include "islkit/generator.hpp"

#include <algorithm>

namespace isl {

Generator::Generator(std::uint64_t seed, GenConfig cfg) : rng_(seed), cfg_(cfg) {
  const char* names[] = {"x", "y", "z", "a", "b", "c"};
  for (int i = 0; i < std::clamp(cfg_.vars, 1, 6); ++i) pool_.emplace_back(names[i]);
  binder_pool_ = {Var("u"), Var("w")};
}

int Generator::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

Var Generator::var() { return pool_[uniform(0, static_cast<int>(pool_.size()) - 1)]; }

Term Generator::term() { return chance(0.2) ? Term::null() : Term(var()); }

Atom Generator::pure_atom() {
  Term a = term(), b = term();
  return chance(0.5) ? Atom::eq(a, b) : Atom::neq(a, b);
}

Atom Generator::atom() {
  if (chance(0.5)) return pure_atom();
  return chance(0.75) ? Atom::points_to(var(), term()) : Atom::neg_points(var());
}

SymbolicHeap Generator::heap() {
  int n = uniform(0, cfg_.max_atoms);
  int spatial = 0;
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) {
    Atom a = atom();
    if (a.is_cell() && ++spatial > cfg_.max_spatial) a = pure_atom();
    atoms.push_back(a);
  }
  return SymbolicHeap(std::move(atoms));
}

SymbolicHeap Generator::pure_heap(int max_atoms) {
  int n = uniform(1, std::max(1, max_atoms));
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back(pure_atom());
  return SymbolicHeap(std::move(atoms));
}

QuantifiedHeap Generator::quantified() {
  SymbolicHeap h = heap();
  if (!cfg_.allow_binders || !chance(0.25)) return h;
  // Turn one variable into a binder by renaming it to a binder name.
  VarSet free = fv(h);
  if (free.empty()) return h;
  std::vector<Var> vs(free.begin(), free.end());
  Var victim = vs[uniform(0, static_cast<int>(vs.size()) - 1)];
  Var b = binder_pool_[uniform(0, 1)];
  return QuantifiedHeap({b}, subst(h, victim, Term(b)));
}

Assertion Generator::assertion() {
  Assertion out;
  int n = uniform(1, cfg_.max_disjuncts);
  for (int i = 0; i < n; ++i) out.disjuncts.push_back(quantified());
  return out;
}

CommandPtr Generator::atomic_command() {
  switch (uniform(0, 9)) {
    case 0: return cmd::skip();
    case 1: return cmd::assign(var(), term());
    case 2: return cmd::havoc(var());
    case 3: return cmd::assume(SymbolicHeap({pure_atom()}));
    case 4: return cmd::alloc(var());
    case 5: return cmd::free(var());
    case 6: return cmd::load(var(), var());
    case 7: return cmd::store(var(), term());
    case 8: return cmd::error();
    default: return cmd::free(var());
  }
}

CommandPtr Generator::command(int depth) {
  if (depth <= 1 || !chance(cfg_.inner_node_p)) return atomic_command();
  int kinds = 2 + (cfg_.allow_star ? 1 : 0) + (cfg_.allow_local ? 1 : 0);
  int k = uniform(0, kinds - 1);
  if (k == 0) return cmd::seq(command(depth - 1), command(depth - 1));
  if (k == 1) return cmd::choice(command(depth - 1), command(depth - 1));
  if (k == 2 && cfg_.allow_star) return cmd::star(command(depth - 1));
  return cmd::local(var(), command(depth - 1));
}

Exit Generator::exit() { return chance(0.5) ? Exit::Ok : Exit::Er; }

}  // namespace isl
