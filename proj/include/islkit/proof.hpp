#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "islkit/difftest.hpp"
#include "islkit/syntax.hpp"
#include "islkit/wpo.hpp"

namespace isl {

enum class RuleName {
  Skip,
  Error,
  Seq1,
  Seq2,
  LoopZero,
  LoopNonZero,
  Cons,
  Disj,
  Choice,
  Exist,
  Assign,
  Havoc,
  Assume,
  Local,
  FrameOk,
  Alloc1,
  Alloc2,
  Free,
  FreeEr,
  Load,
  LoadEr,
  Store,
  StoreEr,
  BackwardsVariant,
};

inline constexpr int kRuleCount = 24;

std::string_view to_string(RuleName r);
std::optional<RuleName> rule_from_string(std::string_view s);
bool is_derived(RuleName r);  // BackwardsVariant
std::vector<RuleName> primitive_rules();

struct SideData {
  std::optional<SymbolicHeap> frame;  // FrameOk
  std::vector<Var> vars;              // Exist: the bound variable; Local: renamed binder
  std::optional<Var> alias;           // Free/Load/Store: cell source; Alloc2: y
  std::optional<int> bound;           // BackwardsVariant
  std::optional<int> branch;          // Choice with one premise: 1 or 2
};

struct DerivationNode {
  RuleName rule = RuleName::Skip;
  Triple conclusion;
  SideData side;
  std::vector<DerivationNode> premises;
};

// (RULE [P] C [ok: Q] @frame(h) @vars(x ..) @alias(y) @bound(n) @branch(k) premise*)
DerivationNode parse_derivation(std::string_view text);
std::string to_string(const DerivationNode& d);
std::size_t derivation_size(const DerivationNode& d);

struct CheckOptions {
  int var_cap = 12;  // for the entailments of Cons
};

struct CheckResult {
  bool ok = true;
  RuleName rule = RuleName::Skip;
  std::string path;  // premise indices from the root, e.g. "0.1"
  std::string message;

  static CheckResult pass() { return {}; }
};

CheckResult check_step(const DerivationNode& node, const CheckOptions& opt = {});
CheckResult check_derivation(const DerivationNode& tree, const CheckOptions& opt = {});

// LoopZero / LoopNonZero / Seq2 / Disj / Cons tree for a BackwardsVariant node.
DerivationNode expand_backwards_variant(const DerivationNode& bv);

// Derivation of [P] c [e: wpo(P, c, e, cfg)].
DerivationNode synthesize_derivation(const Assertion& p, const CommandPtr& c, Exit e,
                                     const WpoConfig& cfg = {});

// Expected conclusions of the axioms, shared by checker, synthesizer and tests.
// `alias` selects the cell (Free/Load/Store) or the y of Alloc2.
std::optional<Assertion> axiom_post(RuleName r, const SymbolicHeap& psi, const Command& c, Exit e,
                                    std::optional<Var> alias = std::nullopt);

// Assertion equality up to alpha-renaming and normalization, as multisets / as sets.
bool same_assertion(const Assertion& a, const Assertion& b);
bool same_disjunct_set(const Assertion& a, const Assertion& b);

// ---- rule soundness suite ----------------------------------------------------

struct RuleInstance {
  DerivationNode node;
  bool accepted = false;
  bool premises_valid = true;
  bool conclusion_valid = true;
  int conclusion_bound = 0;
};

// One random instance of `r` built from valid premises; validity is checked by
// brute force on opt.domain.
RuleInstance rule_instance(Generator& g, RuleName r, const SuiteOptions& opt);

struct RuleTally {
  RuleName rule;
  int accepted = 0;
  int rejected = 0;
  int unsound = 0;  // accepted, premises valid, conclusion invalid
  std::string first_unsound;
};

// Draws instances of every primitive rule until `per_rule` are accepted
// (at most 40 * per_rule attempts each).
std::vector<RuleTally> run_rule_suite(const SuiteOptions& opt, int per_rule);

}  // namespace isl
