#pragma once

#include <stdexcept>

#include "islkit/canonical.hpp"

namespace isl {

struct WpoConfig {
  int loop_bound = 3;  // Upsilon(0..loop_bound) for ok, wpo(Upsilon(n), C, er) for n < loop_bound
  int var_cap = kDefaultVarCap;
  bool prune = true;
  bool detect_fixpoint = true;
  int disjunct_cap = 0;  // 0: unlimited
};

class DisjunctCapExceeded : public CapExceeded {
 public:
  explicit DisjunctCapExceeded(std::size_t n, int cap)
      : CapExceeded("wpo reached " + std::to_string(n) + " disjuncts, over the cap of " +
                    std::to_string(cap)) {}
};

struct WpoStats {
  int stars = 0;       // star clauses evaluated
  int fixpoints = 0;   // of which stopped early on an entailed iterate
  bool all_fixpoints() const { return fixpoints == stars; }
};

class NotCanonical : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Assertion wpo(const Assertion& p, const CommandPtr& c, Exit e, const WpoConfig& cfg = {},
              WpoStats* stats = nullptr);

// h must be canonical for heap-accessing commands.
Assertion wpo_sh(const SymbolicHeap& h, const CommandPtr& c, Exit e, const WpoConfig& cfg = {},
                 WpoStats* stats = nullptr);

// The Upsilon family of a star body: Upsilon(0) = h, Upsilon(n+1) = wpo(Upsilon(n), body, ok).
// Stops early (and reports it) once an iterate is entailed by the earlier ones.
struct StarIterates {
  std::vector<Assertion> upsilon;
  bool fixpoint = false;
};
StarIterates star_iterates(const SymbolicHeap& h, const CommandPtr& body, const WpoConfig& cfg,
                           const VarSet& avoid = {});

// Drops unsatisfiable disjuncts, eliminates binders equal to another term,
// removes vacuous binders and duplicate disjuncts.
Assertion simplify(const Assertion& p);
QuantifiedHeap simplify(const QuantifiedHeap& q);

// Binders renamed by a name-independent signature. Equal keys imply
// alpha-equivalence; alpha-equivalent heaps usually get equal keys.
std::string alpha_key(const QuantifiedHeap& q);

// Heap-command clauses, exposed for the proof checker.
Assertion alloc_ok(const SymbolicHeap& h, Var x, const VarSet& avoid);
Assertion free_post(const SymbolicHeap& h, Var x, Exit e);
Assertion load_post(const SymbolicHeap& h, Var x, Var y, Exit e, const VarSet& avoid);
Assertion store_post(const SymbolicHeap& h, Var x, Term t, Exit e);

// Existentially closes every disjunct over `binders` (vacuous ones dropped),
// renaming inner binders apart.
Assertion wrap_exists(const std::vector<Var>& binders, const Assertion& p);

}  // namespace isl
