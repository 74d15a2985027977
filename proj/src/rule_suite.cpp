#include <algorithm>

#include "islkit/canonical.hpp"
#include "islkit/parser.hpp"
#include "islkit/proof.hpp"

namespace isl {

namespace {

struct Ctx {
  Generator& g;
  const SuiteOptions& opt;

  WpoConfig wcfg() const {
    WpoConfig c;
    c.loop_bound = opt.loop_bound;
    c.var_cap = opt.var_cap;
    c.detect_fixpoint = false;
    c.disjunct_cap = opt.disjunct_cap;
    return c;
  }

  CommandPtr small_cmd(bool loops = false) {
    for (;;) {
      CommandPtr c = g.command(2);
      if (loops || !has_star(*c)) return c;
    }
  }

  // A sub-disjunction of wpo(P, c, e), sometimes strengthened by a pure atom.
  Triple valid(const Assertion& p, const CommandPtr& c, Exit e) {
    Assertion w = wpo(p, c, e, wcfg());
    Assertion q;
    for (const auto& d : w.disjuncts)
      if (g.chance(0.6)) q.disjuncts.push_back(d);
    if (!q.is_false() && g.chance(0.3)) q = star(q, SymbolicHeap({g.pure_atom()}));
    return {p, c, e, q};
  }

  DerivationNode assumed(Triple t) {
    DerivationNode d;
    d.rule = RuleName::Cons;  // unchecked placeholder: only its conclusion is read
    d.conclusion = std::move(t);
    return d;
  }

  Assertion maybe_mutate(Assertion q) {
    if (g.chance(0.15)) return g.assertion();
    return q;
  }

  std::optional<SymbolicHeap> canonical_for(const CommandPtr& c, bool need_neg = false) {
    SymbolicHeap h = g.heap();
    if (need_neg) h = h.with(Atom::neg_points(g.var()));
    auto cs = ca(h, *c, opt.var_cap);
    if (cs.empty()) return std::nullopt;
    return cs[static_cast<std::size_t>(g.uniform(0, static_cast<int>(cs.size()) - 1))];
  }

  CommandPtr axiom_cmd(RuleName r) {
    switch (r) {
      case RuleName::Assign: return cmd::assign(g.var(), g.term());
      case RuleName::Havoc: return cmd::havoc(g.var());
      case RuleName::Assume: return cmd::assume(g.pure_heap(2));
      case RuleName::Alloc1:
      case RuleName::Alloc2: return cmd::alloc(g.var());
      case RuleName::Free:
      case RuleName::FreeEr: return cmd::free(g.var());
      case RuleName::Load:
      case RuleName::LoadEr: return cmd::load(g.var(), g.var());
      default: return cmd::store(g.var(), g.term());
    }
  }
};

bool heap_axiom_rule(RuleName r) {
  switch (r) {
    case RuleName::Assign:
    case RuleName::Havoc:
    case RuleName::Assume:
    case RuleName::Alloc1:
    case RuleName::Alloc2:
    case RuleName::Free:
    case RuleName::FreeEr:
    case RuleName::Load:
    case RuleName::LoadEr:
    case RuleName::Store:
    case RuleName::StoreEr:
      return true;
    default:
      return false;
  }
}

}  // namespace

RuleInstance rule_instance(Generator& g, RuleName r, const SuiteOptions& opt) {
  Ctx cx{g, opt};
  RuleInstance inst;
  DerivationNode& d = inst.node;
  d.rule = r;
  inst.conclusion_bound = opt.loop_bound;
  Exit e = g.exit();
  bool ok = e == Exit::Ok;

  if (heap_axiom_rule(r)) {
    CommandPtr c = cx.axiom_cmd(r);
    auto psi = cx.canonical_for(c, r == RuleName::Alloc2);
    if (!psi) psi = SymbolicHeap();
    if (g.chance(0.3)) {
      std::vector<Var> srcs;
      for (const Atom& a : psi->atoms())
        if (a.is_cell()) srcs.push_back(a.src());
      if (!srcs.empty()) d.side.alias = srcs[static_cast<std::size_t>(g.uniform(0, static_cast<int>(srcs.size()) - 1))];
    }
    auto post = axiom_post(r, *psi, *c, e, d.side.alias);
    d.conclusion = {Assertion(*psi), c, e, cx.maybe_mutate(post ? *post : g.assertion())};
  } else {
    switch (r) {
      case RuleName::Skip:
      case RuleName::Error:
      case RuleName::LoopZero: {
        Assertion p = g.assertion();
        CommandPtr c = r == RuleName::Skip    ? cmd::skip()
                       : r == RuleName::Error ? cmd::error()
                                              : cmd::star(cx.small_cmd());
        bool keeps = (r == RuleName::Error) != ok;
        d.conclusion = {p, c, e, cx.maybe_mutate(keeps ? p : Assertion::falsum())};
        break;
      }
      case RuleName::Seq1: {
        CommandPtr c1 = cx.small_cmd(), c2 = cx.small_cmd();
        Triple p = cx.valid(g.assertion(), c1, Exit::Er);
        d.conclusion = {p.pre, cmd::seq(c1, c2), g.chance(0.9) ? Exit::Er : Exit::Ok, p.post};
        d.premises.push_back(cx.assumed(p));
        break;
      }
      case RuleName::Seq2: {
        CommandPtr c1 = cx.small_cmd(), c2 = cx.small_cmd();
        Triple p1 = cx.valid(g.assertion(), c1, Exit::Ok);
        Assertion mid = g.chance(0.15) ? g.assertion() : p1.post;
        Triple p2 = cx.valid(mid, c2, e);
        d.conclusion = {p1.pre, cmd::seq(c1, c2), e, p2.post};
        d.premises.push_back(cx.assumed(p1));
        d.premises.push_back(cx.assumed(p2));
        break;
      }
      case RuleName::Cons: {
        CommandPtr c = cx.small_cmd();
        Triple p = cx.valid(g.assertion(), c, e);
        Assertion pre = g.chance(0.5) ? p.pre | g.assertion() : p.pre;
        Assertion post;
        switch (g.uniform(0, 2)) {
          case 0:
            for (const auto& q : p.post.disjuncts)
              if (g.chance(0.5)) post.disjuncts.push_back(q);
            break;
          case 1: post = star(p.post, SymbolicHeap({g.pure_atom()})); break;
          default: post = g.assertion(); break;
        }
        if (g.chance(0.15)) pre = g.assertion();
        d.conclusion = {pre, c, e, post};
        d.premises.push_back(cx.assumed(p));
        break;
      }
      case RuleName::Disj: {
        CommandPtr c = cx.small_cmd();
        int k = g.uniform(0, 3);
        Assertion pres, posts;
        for (int i = 0; i < k; ++i) {
          Triple p = cx.valid(g.assertion(), c, e);
          pres |= p.pre;
          posts |= p.post;
          d.premises.push_back(cx.assumed(p));
        }
        d.conclusion = {pres, c, e, cx.maybe_mutate(posts)};
        break;
      }
      case RuleName::Choice: {
        CommandPtr c1 = cx.small_cmd(), c2 = cx.small_cmd();
        Triple p = cx.valid(g.assertion(), c1, e);
        CommandPtr c = g.chance(0.5) ? cmd::choice(c1, c2) : cmd::choice(c2, c1);
        d.conclusion = {p.pre, c, e, cx.maybe_mutate(p.post)};
        d.premises.push_back(cx.assumed(p));
        break;
      }
      case RuleName::Exist: {
        CommandPtr c = cx.small_cmd();
        Assertion p = g.assertion();
        std::vector<Var> cands;
        VarSet fc = fv(*c);
        for (Var v : fv(p))
          if (!fc.count(v) || g.chance(0.1)) cands.push_back(v);
        Var x = cands.empty() ? g.var()
                              : cands[static_cast<std::size_t>(
                                    g.uniform(0, static_cast<int>(cands.size()) - 1))];
        Triple t = cx.valid(p, c, e);
        d.side.vars = {x};
        d.conclusion = {exists(x, t.pre), c, e, cx.maybe_mutate(exists(x, t.post))};
        d.premises.push_back(cx.assumed(t));
        break;
      }
      case RuleName::Local: {
        CommandPtr c = cx.small_cmd();
        Var x = g.var();
        Assertion p = g.assertion();
        if (fv(p).count(x) && g.chance(0.9)) {
          VarSet taken = fv(p) | fv(*c);
          p = subst(p, x, Term(fresh_var(x, taken)));
        }
        Triple t = cx.valid(p, c, e);
        d.conclusion = {p, cmd::local(x, c), e, cx.maybe_mutate(exists(x, t.post))};
        d.premises.push_back(cx.assumed(t));
        break;
      }
      case RuleName::FrameOk: {
        CommandPtr c = cx.small_cmd();
        SymbolicHeap phi = g.heap();
        if (g.chance(0.8)) {
          VarSet m = mod_of(*c);
          std::vector<Atom> keep;
          for (const Atom& a : phi.atoms()) {
            VarSet av = fv(a);
            if (std::none_of(av.begin(), av.end(), [&](Var v) { return m.count(v) > 0; }))
              keep.push_back(a);
          }
          phi = SymbolicHeap(std::move(keep));
        }
        Exit fe = g.chance(0.75) ? Exit::Ok : Exit::Er;
        Triple t = cx.valid(g.assertion(), c, fe);
        d.side.frame = phi;
        d.conclusion = {star(t.pre, phi), c, fe, cx.maybe_mutate(star(t.post, phi))};
        d.premises.push_back(cx.assumed(t));
        break;
      }
      case RuleName::LoopNonZero: {
        CommandPtr body = cx.small_cmd();
        CommandPtr c = cmd::star(body);
        Triple t = cx.valid(g.assertion(), cmd::seq(c, body), e);
        d.conclusion = {t.pre, c, e, cx.maybe_mutate(t.post)};
        d.premises.push_back(cx.assumed(t));
        inst.conclusion_bound = opt.loop_bound + 1;
        break;
      }
      default:
        break;
    }
  }

  inst.accepted = check_step(d).ok;
  ExecOptions eo;
  eo.loop_bound = opt.loop_bound;
  eo.strict_alloc = false;
  for (const auto& p : d.premises)
    if (!brute_valid(p.conclusion, opt.domain, eo)) inst.premises_valid = false;
  if (inst.accepted && inst.premises_valid) {
    eo.loop_bound = inst.conclusion_bound;
    inst.conclusion_valid = brute_valid(d.conclusion, opt.domain, eo);
  }
  return inst;
}

std::vector<RuleTally> run_rule_suite(const SuiteOptions& opt, int per_rule) {
  std::vector<RuleTally> out;
  for (RuleName r : primitive_rules()) {
    RuleTally t;
    t.rule = r;
    for (int i = 0; i < 40 * per_rule && t.accepted < per_rule; ++i) {
      Generator g(opt.seed * 1000003ull + static_cast<std::uint64_t>(r) * 7919ull +
                      static_cast<std::uint64_t>(i),
                  opt.gen);
      RuleInstance inst;
      try {
        inst = rule_instance(g, r, opt);
      } catch (const CapExceeded&) {
        continue;
      }
      if (!inst.accepted) {
        ++t.rejected;
        continue;
      }
      if (!inst.premises_valid) continue;
      ++t.accepted;
      if (!inst.conclusion_valid) {
        ++t.unsound;
        if (t.first_unsound.empty()) t.first_unsound = to_string(inst.node);
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string rules_case(Generator& g, const SuiteOptions& opt) {
  auto rules = primitive_rules();
  RuleName r = rules[static_cast<std::size_t>(g.uniform(0, static_cast<int>(rules.size()) - 1))];
  RuleInstance inst = rule_instance(g, r, opt);
  if (inst.accepted && inst.premises_valid && !inst.conclusion_valid)
    return "unsound " + std::string(to_string(r)) + " step: " + to_string(inst.node);
  return {};
}

}  // namespace isl
