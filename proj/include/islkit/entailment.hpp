#pragma once

#include <string>

#include "islkit/canonical.hpp"
#include "islkit/semantics.hpp"

namespace isl {

struct EntailVerdict {
  enum class Kind { Holds, Fails, Unknown };
  Kind kind = Kind::Holds;
  State counterexample;  // for Fails: satisfies P, not Q
  DomainSpec domain;
  std::string reason;  // for Unknown

  bool holds() const { return kind == Kind::Holds; }
};

std::string to_string(EntailVerdict::Kind k);

// Generic model of a satisfiable canonical heap: one value per alias class,
// null's class mapped to null, `spare` unused locations appended.
std::pair<State, DomainSpec> generic_model(const SymbolicHeap& h, int spare = 0);

// h canonical over fv(h) | fv(q), q's binders disjoint from fv(h).
bool entails_sh(const SymbolicHeap& h, const QuantifiedHeap& q);

EntailVerdict entails(const Assertion& p, const Assertion& q, int cap = kDefaultVarCap);

bool entails_oracle(const Assertion& p, const Assertion& q, const DomainSpec& d);

}  // namespace isl
