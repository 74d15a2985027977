#pragma once

#include <stdexcept>
#include <vector>

#include "islkit/syntax.hpp"

namespace isl {

inline constexpr int kDefaultVarCap = 7;

// A size cap of the symbolic engine was hit; suites regenerate such cases.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VarCapExceeded : public CapExceeded {
 public:
  VarCapExceeded(std::size_t vars, int cap);
  std::size_t vars;
  int cap;
};

bool satisfiable(const SymbolicHeap& h);

// {v | x == v in h}, either orientation, v != x.
VarSet aliases(Var x, const SymbolicHeap& h);

// One pure heap per set partition of V + {null}; reflexive atoms omitted.
std::vector<SymbolicHeap> pi(const VarSet& vars);

bool is_canonical(const SymbolicHeap& h, const VarSet& vars);

// Satisfiable pi * h over pi(fv(h) | vars), normalized.
std::vector<SymbolicHeap> ca(const SymbolicHeap& h, const VarSet& vars, int cap = kDefaultVarCap);
std::vector<SymbolicHeap> ca(const SymbolicHeap& h, const Command& c, int cap = kDefaultVarCap);

// Binders are renamed away from `avoid` (always including fv(c)) first.
Assertion cano(const Assertion& p, const Command& c, int cap = kDefaultVarCap,
               const VarSet& avoid = {});
Assertion cano_vars(const Assertion& p, const VarSet& vars, int cap = kDefaultVarCap);

}  // namespace isl
