#pragma once

#include <optional>
#include <string>

#include "islkit/semantics.hpp"
#include "islkit/wpo.hpp"

namespace isl {

struct TripleVerdict {
  enum class Kind { Valid, Invalid, Unknown };
  enum class Evidence { None, ByEntailment, ByBruteForce };
  enum class Unknown { None, LoopBound, VarCap, DomainExhausted };

  Kind kind = Kind::Unknown;
  Evidence evidence = Evidence::None;
  Unknown unknown = Unknown::None;
  bool bound_relative = false;  // Valid for a star program without a fixpoint
  DomainSpec domain;            // brute-force domain or the witness domain
  std::optional<State> witness; // Invalid: satisfies Q, not reachable
  std::string reason;
};

std::string to_string(TripleVerdict::Kind k);
std::string to_string(TripleVerdict::Unknown u);

// |Loc| = spatial atoms of P and Q (largest disjunct each) + allocs in c + 1,
// maxHeapCells = the larger of the two spatial counts (P- and Q-states have
// exactly that many cells).
DomainSpec auto_domain(const Triple& t);

TripleVerdict check_triple(const Triple& t, const WpoConfig& cfg = {},
                           std::optional<DomainSpec> spec = std::nullopt);

// A P-state from which `post` is reached under c with exit e. Throws
// std::invalid_argument when `post` does not satisfy Q.
std::optional<State> find_witness(const Triple& t, const State& post, const DomainSpec& d,
                                  const WpoConfig& cfg = {});

}  // namespace isl
