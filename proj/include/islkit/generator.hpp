#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "islkit/syntax.hpp"

namespace isl {

// Default distribution of the random corpus:
//   variables      x, y, z (first `vars` of them); binders u, w
//   terms          null with probability 1/5, otherwise a uniform variable
//   heap atoms     0..max_atoms, each pure (==, != equally) with p = 1/2,
//                  otherwise -> or -/> (3:1), at most max_spatial spatial atoms
//   assertions     1..max_disjuncts disjuncts, each with a binder with p = 1/4
//   commands       depth <= max_depth; leaves uniform over the atomic commands,
//                  inner nodes over ; + star local (star only if allow_star)
struct GenConfig {
  int vars = 3;
  int max_depth = 4;
  int max_atoms = 3;
  int max_spatial = 2;
  int max_disjuncts = 2;
  bool allow_star = true;
  bool allow_local = true;
  bool allow_binders = true;
  double inner_node_p = 0.45;
};

class Generator {
 public:
  Generator(std::uint64_t seed, GenConfig cfg = {});

  Var var();
  Term term();
  Atom pure_atom();
  Atom atom();
  SymbolicHeap heap();
  SymbolicHeap pure_heap(int max_atoms);
  QuantifiedHeap quantified();
  Assertion assertion();
  CommandPtr atomic_command();
  CommandPtr command(int depth);
  CommandPtr command() { return command(cfg_.max_depth); }
  Exit exit();

  int uniform(int lo, int hi);  // inclusive
  bool chance(double p);
  std::mt19937_64& rng() { return rng_; }
  const GenConfig& config() const { return cfg_; }

 private:
  std::mt19937_64 rng_;
  GenConfig cfg_;
  std::vector<Var> pool_;
  std::vector<Var> binder_pool_;
};

}  // namespace isl
