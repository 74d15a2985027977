#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "islkit/syntax.hpp"

namespace isl {

// Values: 0 is null, 1..n are the locations l1..ln. kBottom marks a
// deallocated cell and never occurs in a store.
using Value = int;
inline constexpr Value kNull = 0;
inline constexpr Value kBottom = -1;

struct DomainSpec {
  int locations = 3;
  int max_heap_cells = 2;

  std::vector<Value> values() const;  // null, l1, ..., ln
  bool is_location(Value v) const { return v >= 1 && v <= locations; }
};

// Total store: variables not listed map to null.
class Store {
 public:
  Value operator()(Var x) const;
  Value eval(Term t) const { return t.is_null() ? kNull : (*this)(t.var()); }
  Store set(Var x, Value v) const;
  const std::vector<std::pair<Var, Value>>& bindings() const { return vals_; }

  friend bool operator==(const Store&, const Store&) = default;
  friend auto operator<=>(const Store&, const Store&) = default;

 private:
  std::vector<std::pair<Var, Value>> vals_;  // sorted by variable, no null entries
};

class Heap {
 public:
  std::optional<Value> get(Value loc) const;
  bool in_dom(Value loc) const { return get(loc).has_value(); }
  bool in_dom_plus(Value loc) const {
    auto v = get(loc);
    return v && *v != kBottom;
  }
  Heap set(Value loc, Value v) const;
  std::size_t size() const { return cells_.size(); }
  const std::vector<std::pair<Value, Value>>& cells() const { return cells_; }

  friend bool operator==(const Heap&, const Heap&) = default;
  friend auto operator<=>(const Heap&, const Heap&) = default;

 private:
  std::vector<std::pair<Value, Value>> cells_;  // sorted by location
};

struct State {
  Store store;
  Heap heap;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
};

class DomainExhausted : public std::runtime_error {
 public:
  DomainExhausted() : std::runtime_error("alloc found no free location in the domain") {}
};

struct ExecOptions {
  int loop_bound = 3;        // maximal number of loop-body executions
  bool strict_alloc = true;  // throw DomainExhausted instead of dropping the transition
};

bool satisfies(const State& st, const QuantifiedHeap& q, const DomainSpec& d);
bool satisfies(const State& st, const Assertion& p, const DomainSpec& d);

std::vector<State> exec(const State& st, const Command& c, Exit e, const DomainSpec& d,
                        const ExecOptions& opt = {});

struct Outcomes {
  std::set<State> ok;
  std::set<State> er;
};
Outcomes exec_both(const State& st, const Command& c, const DomainSpec& d,
                   const ExecOptions& opt = {});

std::vector<State> enum_states(const VarSet& vars, const DomainSpec& d);

// Outputs reachable from P-states among enum_states(fv(P)|fv(c)|extra, d).
std::set<State> brute_wpo(const Assertion& p, const Command& c, Exit e, const DomainSpec& d,
                          const ExecOptions& opt = {}, const VarSet& extra = {});

bool brute_valid(const Triple& t, const DomainSpec& d, const ExecOptions& opt = {});

// Q-states in the carrier that are missing from the brute-force WPO.
std::vector<State> brute_counterexamples(const Triple& t, const DomainSpec& d,
                                         const ExecOptions& opt = {}, std::size_t limit = 1);

std::string value_name(Value v);
std::string to_string(const Store& s);
std::string to_string(const Heap& h);
std::string to_string(const State& st);  // {x=l1} | {l1=⊥}
State parse_state(std::string_view text);

}  // namespace isl
