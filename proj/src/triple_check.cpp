#include "islkit/triple_check.hpp"

#include <algorithm>
#include <stdexcept>

#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"

namespace isl {

std::string to_string(TripleVerdict::Kind k) {
  switch (k) {
    case TripleVerdict::Kind::Valid: return "valid";
    case TripleVerdict::Kind::Invalid: return "invalid";
    case TripleVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(TripleVerdict::Unknown u) {
  switch (u) {
    case TripleVerdict::Unknown::None: return "none";
    case TripleVerdict::Unknown::LoopBound: return "loop-bound";
    case TripleVerdict::Unknown::VarCap: return "var-cap";
    case TripleVerdict::Unknown::DomainExhausted: return "domain-exhausted";
  }
  return "?";
}

namespace {

int max_cells(const Assertion& p) {
  std::size_t n = 0;
  for (const auto& q : p.disjuncts) n = std::max(n, q.body.cell_count());
  return static_cast<int>(n);
}

int cells_of(const State& st) { return static_cast<int>(st.heap.cells().size()); }

TripleVerdict brute_fallback(const Triple& t, const WpoConfig& cfg, const DomainSpec& d,
                             const std::string& why) {
  TripleVerdict v;
  v.domain = d;
  ExecOptions opt;
  opt.loop_bound = cfg.loop_bound;
  try {
    auto cex = brute_counterexamples(t, d, opt, 1);
    v.evidence = TripleVerdict::Evidence::ByBruteForce;
    if (cex.empty()) {
      v.kind = TripleVerdict::Kind::Valid;
      v.reason = why + "; valid on the bounded domain only";
    } else {
      v.kind = TripleVerdict::Kind::Invalid;
      v.witness = cex.front();
      v.reason = why + "; counterexample on the bounded domain";
    }
  } catch (const DomainExhausted&) {
    v.kind = TripleVerdict::Kind::Unknown;
    v.unknown = TripleVerdict::Unknown::DomainExhausted;
    v.reason = why + "; alloc ran out of locations";
  }
  v.bound_relative = has_star(*t.cmd);
  return v;
}

}  // namespace

DomainSpec auto_domain(const Triple& t) {
  int cp = max_cells(t.pre), cq = max_cells(t.post);
  int locs = cp + cq + alloc_count(*desugar(t.cmd)) + 1;
  return DomainSpec{locs, std::max({cp, cq, 1})};
}

TripleVerdict check_triple(const Triple& t, const WpoConfig& cfg, std::optional<DomainSpec> spec) {
  DomainSpec d = spec ? *spec : auto_domain(t);
  CommandPtr core = desugar(t.cmd);
  bool loops = has_star(*core);
  WpoStats stats;
  Assertion w;
  try {
    w = wpo(t.pre, core, t.exit, cfg, &stats);
  } catch (const CapExceeded& e) {
    TripleVerdict v = brute_fallback(t, cfg, d, std::string("wpo: ") + e.what());
    if (v.kind == TripleVerdict::Kind::Unknown) return v;
    v.unknown = TripleVerdict::Unknown::VarCap;
    return v;
  }
  bool exact = !loops || stats.all_fixpoints();
  EntailVerdict ev = entails(t.post, w, cfg.var_cap);

  TripleVerdict v;
  v.domain = d;
  if (ev.holds()) {
    v.kind = TripleVerdict::Kind::Valid;
    v.evidence = TripleVerdict::Evidence::ByEntailment;
    v.bound_relative = !exact;
    v.reason = exact ? "Q entails wpo(P, C, e)"
                     : "Q entails wpo(P, C, e) at loop bound " + std::to_string(cfg.loop_bound);
    return v;
  }
  if (ev.kind == EntailVerdict::Kind::Unknown) {
    TripleVerdict b = brute_fallback(t, cfg, d, "entailment undecided: " + ev.reason);
    if (b.kind != TripleVerdict::Kind::Unknown) b.unknown = TripleVerdict::Unknown::VarCap;
    return b;
  }

  // ev.counterexample satisfies Q and not the exact wpo
  v.witness = ev.counterexample;
  v.domain = DomainSpec{std::max(ev.domain.locations, 1),
                        std::max({ev.domain.max_heap_cells, cells_of(ev.counterexample), 1})};
  if (!exact) {
    v.kind = TripleVerdict::Kind::Unknown;
    v.unknown = TripleVerdict::Unknown::LoopBound;
    v.reason = "Q-state not reached within loop bound " + std::to_string(cfg.loop_bound);
    return v;
  }
  ExecOptions opt;
  opt.loop_bound = cfg.loop_bound;
  opt.strict_alloc = false;
  std::set<State> reach = brute_wpo(t.pre, *core, t.exit, v.domain, opt, fv(t));
  if (reach.count(*v.witness))
    throw std::logic_error("witness " + to_string(*v.witness) + " is reachable by brute force");
  v.kind = TripleVerdict::Kind::Invalid;
  v.evidence = TripleVerdict::Evidence::ByEntailment;
  v.reason = "Q does not entail wpo(P, C, e)";
  return v;
}

std::optional<State> find_witness(const Triple& t, const State& post, const DomainSpec& d,
                                  const WpoConfig& cfg) {
  if (!satisfies(post, t.post, d))
    throw std::invalid_argument("find_witness: state does not satisfy the postcondition");
  VarSet vars = fv(t);
  for (const auto& [x, val] : post.store.bindings()) vars.insert(x);
  CommandPtr core = desugar(t.cmd);
  ExecOptions opt;
  opt.loop_bound = cfg.loop_bound;
  opt.strict_alloc = false;
  for (const State& st : enum_states(vars, d)) {
    if (!satisfies(st, t.pre, d)) continue;
    for (const State& out : exec(st, *core, t.exit, d, opt))
      if (out == post) return st;
  }
  return std::nullopt;
}

}  // namespace isl
