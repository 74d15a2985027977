// One PASS/FAIL line per acceptance criterion. Usage: acceptance [criterion...]

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "islkit/canonical.hpp"
#include "islkit/difftest.hpp"
#include "islkit/entailment.hpp"
#include "islkit/generator.hpp"
#include "islkit/parser.hpp"
#include "islkit/proof.hpp"
#include "islkit/semantics.hpp"
#include "islkit/triple_check.hpp"
#include "islkit/wpo.hpp"

using namespace isl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string report_line(const RunReport& r) {
  std::ostringstream o;
  o << r.run << " run, " << r.passed << " passed, " << r.failed << " failed, " << r.skipped
    << " regenerated";
  if (!r.first_failure.empty()) o << "; first: " << r.first_failure;
  return o.str();
}

// ---- 1: case analysis of y -> null for free(x) -------------------------------

// Relation over {x, y, null} given by which off-diagonal pairs are equal.
using Relation = std::array<bool, 3>;  // x=y, x=null, y=null

Outcome criterion1() {
  Var x("x"), y("y");
  Term n = Term::null();
  std::set<SymbolicHeap> expected{
      SymbolicHeap({Atom::eq(x, y), Atom::neq(x, n), Atom::neq(y, n), Atom::points_to(y, n)}),
      SymbolicHeap({Atom::neq(x, y), Atom::eq(x, n), Atom::neq(y, n), Atom::points_to(y, n)}),
      SymbolicHeap({Atom::neq(x, y), Atom::neq(x, n), Atom::neq(y, n), Atom::points_to(y, n)}),
  };
  auto cs = ca(SymbolicHeap({Atom::points_to(y, n)}), *cmd::free(x));
  std::set<SymbolicHeap> got(cs.begin(), cs.end());
  if (got.size() != cs.size()) return fail("duplicate disjuncts");
  if (got != expected) {
    std::string s;
    for (const auto& h : cs) s += "[" + to_string(h) + "] ";
    return fail("ca = " + s);
  }

  // Reflexive-symmetric relations, kept when some valuation over three values realises them.
  std::set<Relation> sat;
  for (int mask = 0; mask < 8; ++mask) {
    Relation r{bool(mask & 1), bool(mask & 2), bool(mask & 4)};
    for (int vx = 0; vx < 3; ++vx)
      for (int vy = 0; vy < 3; ++vy)
        if ((vx == vy) == r[0] && (vx == 0) == r[1] && (vy == 0) == r[2]) sat.insert(r);
  }
  auto parts = pi({x, y});
  std::set<Relation> from_pi;
  DomainSpec d{2, 0};
  for (const auto& p : parts)
    for (const State& s : enum_states({x, y}, d))
      if (satisfies(s, Assertion(p), d)) {
        from_pi.insert({s.store(x) == s.store(y), s.store(x) == kNull, s.store(y) == kNull});
        break;
      }
  if (sat.size() != 5 || parts.size() != 5 || from_pi != sat)
    return fail("|pi| = " + std::to_string(parts.size()) + ", relations = " + std::to_string(sat.size()));
  return {true, "3 disjuncts; |pi({x,y})| = 5 = satisfiable relations"};
}

// ---- 2: free(x) rows ----------------------------------------------------------

Outcome criterion2() {
  struct Row {
    const char* pre;
    Exit e;
    const char* post;
  };
  Row rows[] = {
      {"x == y * x != null * y != null * y -> null", Exit::Ok, "x == y * x != null * y != null * y -/>"},
      {"x != y * x != null * y != null * y -> null", Exit::Er, "x != y * x != null * y != null * y -> null"},
  };
  for (const Row& r : rows) {
    std::string got = to_string(wpo(parse_assertion(r.pre), cmd::free(Var("x")), r.e));
    if (got != r.post) return fail(std::string(r.pre) + ": got " + got);
  }
  return {true, "ok and er rows byte-identical"};
}

// ---- 3, 4, 8: differential suites --------------------------------------------

Outcome suite(SuiteOptions::Kind k, int cases, DomainSpec d) {
  SuiteOptions o;
  o.kind = k;
  o.cases = cases;
  o.domain = d;
  o.seed = 42;
  RunReport r = run_suite(o);
  if (r.run != cases || r.failed != 0) return fail(report_line(r));
  return {true, report_line(r)};
}

Outcome criterion3() { return suite(SuiteOptions::Kind::Wpo, 1000, {3, 2}); }
Outcome criterion4() { return suite(SuiteOptions::Kind::Cano, 500, {3, 2}); }
Outcome criterion8() { return suite(SuiteOptions::Kind::Entails, 500, {4, 3}); }

// ---- 5: rule soundness ----------------------------------------------------------

Outcome criterion5() {
  SuiteOptions o;
  o.seed = 42;
  int accepted = 0, unsound = 0;
  std::string detail;
  for (const RuleTally& t : run_rule_suite(o, 500)) {
    accepted += t.accepted;
    unsound += t.unsound;
    if (t.unsound) detail += std::string(to_string(t.rule)) + ": " + t.first_unsound + "; ";
    if (t.accepted < 500) detail += std::string(to_string(t.rule)) + " only " + std::to_string(t.accepted) + " accepted; ";
  }
  if (!detail.empty()) return fail(detail);

  Triple er = parse_triple("[ emp * x -> null ] free(x) [ er: emp * x -> null ]");
  Triple premise = parse_triple("[ emp ] free(x) [ er: emp ]");
  if (!brute_valid(premise, {2, 2})) return fail("frame premise not valid");
  DerivationNode frame;
  frame.rule = RuleName::FrameOk;
  frame.conclusion = er;
  frame.side.frame = parse_assertion("x -> null").disjuncts[0].body;
  DerivationNode prem;
  prem.rule = RuleName::Cons;
  prem.conclusion = premise;
  frame.premises.push_back(prem);
  if (check_step(frame).ok) return fail("er frame step accepted");
  TripleVerdict v = check_triple(er);
  if (v.kind != TripleVerdict::Kind::Invalid || !v.witness) return fail("er frame triple not refuted");
  State w = *v.witness;
  ExecOptions eo;
  eo.strict_alloc = false;
  if (to_string(w) != "{x=l1} | {l1=null}" || !satisfies(w, er.post, v.domain) ||
      brute_wpo(er.pre, *er.cmd, er.exit, v.domain, eo, fv(er)).count(w))
    return fail("witness " + to_string(w) + " does not replay");
  return {true, std::to_string(accepted) + " accepted instances over " +
                    std::to_string(primitive_rules().size()) + " rules, 0 unsound; er frame rejected, witness " +
                    to_string(w)};
}

// ---- 6: completeness pipeline -------------------------------------------------

Assertion drop_atom(Generator& g, const Assertion& a) {
  Assertion out = a;
  if (out.is_false()) return g.assertion();
  auto& q = out.disjuncts[static_cast<std::size_t>(g.uniform(0, static_cast<int>(out.disjuncts.size()) - 1))];
  const auto& atoms = q.body.atoms();
  if (atoms.empty()) return g.assertion();
  std::vector<Atom> keep = atoms;
  std::size_t i = static_cast<std::size_t>(g.uniform(0, static_cast<int>(keep.size()) - 1));
  if (keep[i].is_pure() && g.chance(0.5))
    keep[i] = keep[i].negated();
  else
    keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(i));
  q.body = SymbolicHeap(std::move(keep));
  return out;
}

Outcome criterion6() {
  GenConfig gc;
  gc.allow_star = false;
  int valid = 0, invalid = 0, oversize = 0;
  ExecOptions eo;
  eo.strict_alloc = false;
  for (std::uint64_t i = 0; valid < 300 && i < 20000; ++i) {
    Generator g(600000 + i, gc);
    Assertion p = g.assertion();
    CommandPtr c = g.command();
    Exit e = g.exit();
    Assertion w;
    try {
      w = wpo(p, c, e);
    } catch (const CapExceeded&) {
      continue;
    }
    Assertion q;
    switch (g.uniform(0, 3)) {
      case 0:
        for (const auto& d : w.disjuncts)
          if (g.chance(0.6)) q.disjuncts.push_back(d);
        break;
      case 1:
        q = star(w, SymbolicHeap({g.pure_atom()}));
        break;
      case 2:
        q = drop_atom(g, w);
        break;
      default:
        q = g.assertion();
        break;
    }
    Triple t{p, c, e, q};
    DomainSpec d = auto_domain(t);
    if (d.locations > 6 || d.max_heap_cells > 3) {
      ++oversize;
      continue;
    }
    bool bv = brute_valid(t, d, eo);
    EntailVerdict ev = entails(q, w);
    std::string what = to_string(t);
    if (ev.kind == EntailVerdict::Kind::Unknown) continue;
    if (!bv) {
      ++invalid;
      if (ev.holds()) return fail("brute-invalid but entailed: " + what);
      continue;
    }
    ++valid;
    if (!ev.holds()) return fail("brute-valid but not entailed: " + what);
    DerivationNode root;
    root.rule = RuleName::Cons;
    root.conclusion = t;
    root.premises.push_back(synthesize_derivation(p, c, e));
    CheckResult r = check_derivation(root);
    if (!r.ok) return fail("derivation rejected at " + r.path + " (" + std::string(to_string(r.rule)) + "): " + r.message + " for " + what);
  }
  if (valid < 300) return fail("only " + std::to_string(valid) + " valid triples generated");
  return {true, std::to_string(valid) + " valid triples proved, " + std::to_string(invalid) +
                    " invalid triples not entailed, " + std::to_string(oversize) + " skipped for domain size"};
}

// ---- 7: semantic properties -----------------------------------------------

Heap join(Heap a, const Heap& b) {
  for (const auto& [l, v] : b.cells()) a = a.set(l, v);
  return a;
}

Outcome criterion7() {
  const int need = 10000;
  GenConfig gc;
  gc.max_depth = 3;
  DomainSpec d{4, 2};
  ExecOptions eo;
  eo.strict_alloc = false;
  eo.loop_bound = 2;
  VarSet vars{Var("x"), Var("y"), Var("z")};
  std::vector<State> states = enum_states(vars, d);
  int mono = 0, frame = 0, stable = 0, shift = 0;
  std::mt19937_64 rng(7);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  for (std::uint64_t i = 0; mono < need || frame < need || stable < need || shift < need; ++i) {
    if (i > 200000) return fail("sampling did not reach the target");
    Generator g(70000 + i, gc);
    CommandPtr c = desugar(g.command());
    State s = states[pick(states.size())];
    Outcomes o = exec_both(s, *c, d, eo);
    VarSet m = mod_of(*c), f = fv(*c);
    for (const auto* set : {&o.ok, &o.er})
      for (const State& t : *set) {
        for (const auto& [l, v] : s.heap.cells())
          if (!t.heap.in_dom(l)) return fail("heap shrank: " + to_string(c) + " from " + to_string(s));
        ++mono;
        for (Var x : vars)
          if (!m.count(x) && s.store(x) != t.store(x))
            return fail("unmodified " + x.name() + " changed: " + to_string(c) + " from " + to_string(s));
        ++stable;
      }
    // Re-running with an unused variable moved to another value moves the outputs alike.
    for (Var x : vars) {
      if (f.count(x)) continue;
      Value v = static_cast<Value>(pick(static_cast<std::size_t>(d.locations) + 1));
      State s2{s.store.set(x, v), s.heap};
      Outcomes o2 = exec_both(s2, *c, d, eo);
      for (int k = 0; k < 2; ++k) {
        const auto& a = k ? o.er : o.ok;
        const auto& b = k ? o2.er : o2.ok;
        std::set<State> moved;
        for (const State& t : a) moved.insert({t.store.set(x, v), t.heap});
        if (moved != b) return fail("outputs depend on unused " + x.name() + ": " + to_string(c));
        shift += static_cast<int>(a.size());
      }
      break;
    }
    // Frame: a heap disjoint from input and output is carried along.
    for (const State& t : o.ok) {
      Heap hr;
      for (Value l = 1; l <= d.locations; ++l) {
        if (s.heap.in_dom(l) || t.heap.in_dom(l) || rng() % 2) continue;
        int r = static_cast<int>(pick(static_cast<std::size_t>(d.locations) + 2)) - 1;
        hr = hr.set(l, r);
      }
      if (hr.size() == 0) continue;
      State framed{s.store, join(s.heap, hr)};
      State expect{t.store, join(t.heap, hr)};
      auto outs = exec(framed, *c, Exit::Ok, DomainSpec{d.locations, d.locations}, eo);
      if (std::find(outs.begin(), outs.end(), expect) == outs.end())
        return fail("frame lost: " + to_string(c) + " from " + to_string(framed));
      ++frame;
    }
  }

  // Canonical alias: an allocated x in a model of a canonical heap is named by a cell of an alias.
  int alias = 0;
  GenConfig hc;
  for (std::uint64_t i = 0; alias < need; ++i) {
    if (i > 100000) return fail("alias sampling did not reach the target");
    Generator g(90000 + i, hc);
    SymbolicHeap h = g.heap();
    auto cs = ca(h, vars);
    if (cs.empty()) continue;
    const SymbolicHeap& psi = cs[pick(cs.size())];
    DomainSpec dd{3, 2};
    for (const State& s : enum_states(vars, dd)) {
      if (!satisfies(s, Assertion(psi), dd)) continue;
      for (Var x : vars) {
        if (!s.heap.in_dom_plus(s.store(x))) continue;
        VarSet al = aliases(x, psi);
        al.insert(x);
        bool named = std::any_of(psi.atoms().begin(), psi.atoms().end(), [&](const Atom& a) {
          return a.kind == Atom::Kind::PointsTo && al.count(a.src());
        });
        if (!named) return fail("x = " + x.name() + " allocated but unnamed in " + to_string(psi));
        ++alias;
      }
    }
  }
  return {true, std::to_string(mono) + " transitions monotone, " + std::to_string(frame) + " framed, " +
                    std::to_string(stable) + " stable, " + std::to_string(shift) + " shifted, " +
                    std::to_string(alias) + " alias checks"};
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, std::function<Outcome()>> all{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [k, f] : all) which.push_back(k);
  int failed = 0;
  for (int k : which) {
    auto it = all.find(k);
    if (it == all.end()) {
      std::printf("criterion %d: unknown\n", k);
      ++failed;
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = it->second();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.1fs) %s\n", k, r.pass ? "PASS" : "FAIL", secs, r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
