#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "islkit/generator.hpp"
#include "islkit/semantics.hpp"
#include "islkit/wpo.hpp"

namespace isl {

struct WpoDiff {
  bool equal = true;
  std::optional<State> only_formula;  // satisfies wpo, not reachable
  std::optional<State> only_brute;    // reachable, does not satisfy wpo
  std::size_t carrier = 0;
  std::size_t reachable = 0;
};

// States of the carrier enum_states(fv(P) | fv(c), d) satisfying wpo(P,c,e)
// versus brute_wpo restricted to the same carrier, at the same loop bound.
WpoDiff compare_wpo(const Assertion& p, const CommandPtr& c, Exit e, const DomainSpec& d,
                    const WpoConfig& cfg);

struct SuiteOptions {
  std::uint64_t seed = 42;
  int cases = 1000;
  int first = 0;  // index of the first case
  DomainSpec domain{3, 2};
  int loop_bound = 3;
  int var_cap = 12;
  int disjunct_cap = 256;
  GenConfig gen;
  enum class Kind { Wpo, Entails, Rules, Cano } kind = Kind::Wpo;
};

struct RunReport {
  std::string suite;
  int run = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;  // cases beyond the variable cap, regenerated
  std::string first_failure;  // reproduction text
  int first_failure_case = -1;
  double seconds = 0;
};

RunReport run_suite(const SuiteOptions& opt);

}  // namespace isl
