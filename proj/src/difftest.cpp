#include "islkit/difftest.hpp"

#include <chrono>

#include "islkit/canonical.hpp"
#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"

namespace isl {

WpoDiff compare_wpo(const Assertion& p, const CommandPtr& c, Exit e, const DomainSpec& d,
                    const WpoConfig& cfg) {
  Assertion w = wpo(p, c, e, cfg);
  ExecOptions opt;
  opt.loop_bound = cfg.loop_bound;
  opt.strict_alloc = false;
  VarSet vars = fv(p) | fv(*c);
  std::set<State> reach = brute_wpo(p, *c, e, d, opt, vars);
  WpoDiff out;
  for (const State& st : enum_states(vars, d)) {
    ++out.carrier;
    bool in_formula = satisfies(st, w, d);
    bool in_brute = reach.count(st) > 0;
    if (in_brute) ++out.reachable;
    if (in_formula == in_brute) continue;
    out.equal = false;
    if (in_formula && !out.only_formula) out.only_formula = st;
    if (in_brute && !out.only_brute) out.only_brute = st;
  }
  return out;
}

namespace {

std::string describe(const Assertion& p, const CommandPtr& c, Exit e) {
  return to_string(p) + " ; " + to_string(c) + " ; " + std::string(to_string(e));
}

// Returns empty on pass, a reproduction string on failure; throws CapExceeded to skip.
std::string wpo_case(Generator& g, const SuiteOptions& opt) {
  Assertion p = g.assertion();
  CommandPtr c = g.command();
  Exit e = g.exit();
  WpoConfig cfg;
  cfg.loop_bound = opt.loop_bound;
  cfg.var_cap = opt.var_cap;
  cfg.detect_fixpoint = false;
  cfg.disjunct_cap = opt.disjunct_cap;
  WpoDiff r = compare_wpo(p, c, e, opt.domain, cfg);
  if (r.equal) return {};
  std::string msg = describe(p, c, e);
  if (r.only_formula) msg += "  [in wpo only: " + to_string(*r.only_formula) + "]";
  if (r.only_brute) msg += "  [reachable only: " + to_string(*r.only_brute) + "]";
  return msg;
}

std::string cano_case(Generator& g, const SuiteOptions& opt) {
  Assertion p = g.assertion();
  CommandPtr c = g.command();
  Assertion cp = cano(p, *c, opt.var_cap);
  for (const auto& q : cp.disjuncts)
    if (!is_canonical(q.body, fv(q.body) | fv(*c)))
      return "not canonical: " + to_string(q) + " for " + to_string(c);
  for (const State& st : enum_states(fv(p) | fv(*c), opt.domain))
    if (satisfies(st, p, opt.domain) != satisfies(st, cp, opt.domain))
      return to_string(p) + " ; " + to_string(c) + "  [state " + to_string(st) + "]";
  return {};
}

std::string entails_case(Generator& g, const SuiteOptions& opt) {
  Assertion p = g.assertion();
  Assertion q = g.chance(0.3) ? p : g.assertion();
  if (g.chance(0.3)) q = q | g.assertion();
  // keep the small-width regime: at most `vars` variables overall
  std::size_t width = (fv(p) | fv(q)).size();
  if (static_cast<int>(width) > g.config().vars) throw VarCapExceeded(width, g.config().vars);
  EntailVerdict v = entails(p, q, opt.var_cap);
  bool oracle = entails_oracle(p, q, opt.domain);
  if (v.kind == EntailVerdict::Kind::Unknown) throw VarCapExceeded(0, opt.var_cap);
  if (v.holds() == oracle) return {};
  return to_string(p) + "  |=  " + to_string(q) + "  [entails " + to_string(v.kind) +
         ", oracle " + (oracle ? "holds" : "fails") + "]";
}

}  // namespace

std::string rules_case(Generator& g, const SuiteOptions& opt);  // rule_suite.cpp

RunReport run_suite(const SuiteOptions& opt) {
  RunReport rep;
  switch (opt.kind) {
    case SuiteOptions::Kind::Wpo: rep.suite = "wpo"; break;
    case SuiteOptions::Kind::Entails: rep.suite = "entails"; break;
    case SuiteOptions::Kind::Rules: rep.suite = "rules"; break;
    case SuiteOptions::Kind::Cano: rep.suite = "cano"; break;
  }
  auto start = std::chrono::steady_clock::now();
  for (int i = opt.first; i < opt.first + opt.cases; ++i) {
    // Each case gets its own generator so failures reproduce from (seed, case).
    Generator g(opt.seed * 1000003ull + static_cast<std::uint64_t>(i), opt.gen);
    std::string fail;
    bool done = false;
    for (int attempt = 0; attempt < 50 && !done; ++attempt) {
      try {
        switch (opt.kind) {
          case SuiteOptions::Kind::Wpo: fail = wpo_case(g, opt); break;
          case SuiteOptions::Kind::Entails: fail = entails_case(g, opt); break;
          case SuiteOptions::Kind::Rules: fail = rules_case(g, opt); break;
          case SuiteOptions::Kind::Cano: fail = cano_case(g, opt); break;
        }
        done = true;
      } catch (const CapExceeded&) {
        ++rep.skipped;
      }
    }
    if (!done) continue;
    ++rep.run;
    if (fail.empty()) {
      ++rep.passed;
    } else {
      ++rep.failed;
      if (rep.first_failure.empty()) {
        rep.first_failure = "case " + std::to_string(i) + ": " + fail;
        rep.first_failure_case = i;
      }
    }
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace isl
