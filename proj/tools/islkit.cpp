#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "islkit/canonical.hpp"
#include "islkit/difftest.hpp"
#include "islkit/entailment.hpp"
#include "islkit/parser.hpp"
#include "islkit/proof.hpp"
#include "islkit/semantics.hpp"
#include "islkit/triple_check.hpp"
#include "islkit/wpo.hpp"

using namespace isl;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_machine = false;

// One record per line: `key=value` in machine format, `key: value` otherwise.
void emit(const std::string& key, const std::string& value) {
  if (g_machine)
    std::cout << key << "=" << value << "\n";
  else
    std::cout << key << ": " << value << "\n";
}

std::string read_input(const std::string& path, const std::string& expr) {
  if (!expr.empty()) return expr;
  if (path.empty()) throw UsageError("no input: give a file, '-' for stdin, or --expr");
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// An argument that names an existing file is read, otherwise it is the text itself.
std::string file_or_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Exit parse_exit(const std::string& s) { return s == "er" ? Exit::Er : Exit::Ok; }

struct Common {
  std::string file;
  std::string expr;
  int loop_bound = 3;
  int var_cap = kDefaultVarCap;
  int disjunct_cap = 0;
  int locs = 0;
  int max_cells = 0;
};

void add_input(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "input file ('-' for stdin)");
  sub->add_option("-e,--expr", c.expr, "inline input instead of a file");
}

void add_bounds(CLI::App* sub, Common& c) {
  sub->add_option("--loop-bound", c.loop_bound, "maximal loop iterations")
      ->check(CLI::NonNegativeNumber);
}

void add_caps(CLI::App* sub, Common& c) {
  sub->add_option("--var-cap", c.var_cap, "variable cap for case analysis")
      ->check(CLI::PositiveNumber);
  sub->add_option("--disjunct-cap", c.disjunct_cap, "give up past this many disjuncts (0: never)")
      ->check(CLI::NonNegativeNumber);
}

void add_domain(CLI::App* sub, Common& c) {
  sub->add_option("--locs", c.locs, "number of locations")->check(CLI::PositiveNumber);
  sub->add_option("--max-cells", c.max_cells, "maximal heap cells")->check(CLI::PositiveNumber);
}

DomainSpec domain_of(const Common& c, DomainSpec dflt = {}) {
  DomainSpec d = dflt;
  if (c.locs > 0) d.locations = c.locs;
  if (c.max_cells > 0) d.max_heap_cells = c.max_cells;
  return d;
}

WpoConfig wpo_config(const Common& c) {
  WpoConfig cfg;
  cfg.loop_bound = c.loop_bound;
  cfg.var_cap = c.var_cap;
  cfg.disjunct_cap = c.disjunct_cap;
  return cfg;
}

// ---- subcommands ------------------------------------------------------------

int cmd_parse(const Common& c, const std::string& as) {
  std::string text = read_input(c.file, c.expr);
  auto try_kind = [&](const std::string& kind) -> std::optional<std::string> {
    try {
      if (kind == "assertion") return to_string(parse_assertion(text));
      if (kind == "program") return to_string(parse_program(text));
      if (kind == "triple") return to_string(parse_triple(text));
      if (kind == "query") {
        WpoQuery q = parse_wpo_query(text);
        return to_string(q.pre) + " ; " + to_string(q.cmd) + " ; " + std::string(to_string(q.exit));
      }
      if (kind == "derivation") return to_string(parse_derivation(text));
    } catch (const ParseError&) {
      if (as != "auto") throw;
    }
    return std::nullopt;
  };
  std::vector<std::string> kinds =
      as == "auto" ? std::vector<std::string>{"derivation", "triple", "query", "program", "assertion"}
                   : std::vector<std::string>{as};
  for (const auto& k : kinds) {
    if (auto r = try_kind(k)) {
      emit("kind", k);
      emit("text", *r);
      return 0;
    }
  }
  // report the error of the most likely reading
  parse_program(text);
  return 0;
}

int cmd_desugar(const Common& c) {
  CommandPtr p = parse_program(read_input(c.file, c.expr));
  std::cout << to_string(desugar(p)) << "\n";
  return 0;
}

int cmd_exec(const Common& c, const std::string& state, const std::string& exit) {
  CommandPtr p = parse_program(read_input(c.file, c.expr));
  State st = parse_state(state);
  DomainSpec d = domain_of(c);
  ExecOptions opt;
  opt.loop_bound = c.loop_bound;
  Outcomes o = exec_both(st, *desugar(p), d, opt);
  if (exit != "er")
    for (const State& s : o.ok) emit("ok", to_string(s));
  if (exit != "ok")
    for (const State& s : o.er) emit("er", to_string(s));
  return 0;
}

int cmd_canonicalize(const Common& c, const std::vector<std::string>& vars) {
  Parser p(read_input(c.file, c.expr));
  Assertion a = p.assertion();
  std::optional<CommandPtr> prog;
  if (p.accept(";")) prog = p.command();
  p.expect_end();
  Assertion out;
  if (prog) {
    out = cano(a, **prog, c.var_cap);
  } else {
    VarSet vs;
    for (const auto& v : vars) vs.insert(Var(v));
    out = cano_vars(a, vs, c.var_cap);
  }
  emit("disjuncts", std::to_string(out.disjuncts.size()));
  for (const auto& q : out.disjuncts) emit("case", to_string(q));
  return 0;
}

int cmd_wpo(const Common& c, const std::string& exit, bool no_simplify, bool no_fixpoint,
            bool lines) {
  Parser p(read_input(c.file, c.expr));
  Assertion pre = p.assertion();
  p.expect(";");
  CommandPtr prog = p.command();
  Exit e = parse_exit(exit);
  if (p.accept(";")) e = p.exit_condition();
  p.expect_end();
  WpoConfig cfg = wpo_config(c);
  cfg.prune = !no_simplify;
  cfg.detect_fixpoint = !no_fixpoint;
  WpoStats stats;
  Assertion w = wpo(pre, prog, e, cfg, &stats);
  if (lines) {
    for (const auto& q : w.disjuncts) emit("disjunct", to_string(q));
  } else {
    emit("wpo", to_string(w));
  }
  if (g_machine || stats.stars > 0) {
    emit("disjuncts", std::to_string(w.disjuncts.size()));
    emit("stars", std::to_string(stats.stars));
    emit("fixpoints", std::to_string(stats.fixpoints));
  }
  return 0;
}

int cmd_entails(const std::string& lhs, const std::string& rhs, bool explain, int cap) {
  Assertion p = parse_assertion(file_or_text(lhs));
  Assertion q = parse_assertion(file_or_text(rhs));
  EntailVerdict v = entails(p, q, cap);
  emit("verdict", to_string(v.kind));
  if (v.kind == EntailVerdict::Kind::Fails && explain) {
    emit("counterexample", to_string(v.counterexample));
    emit("locations", std::to_string(v.domain.locations));
  }
  if (v.kind == EntailVerdict::Kind::Unknown) emit("reason", v.reason);
  switch (v.kind) {
    case EntailVerdict::Kind::Holds: return 0;
    case EntailVerdict::Kind::Fails: return 1;
    default: return 2;
  }
}

int cmd_check(const Common& c, bool witness) {
  Triple t = parse_triple(read_input(c.file, c.expr));
  std::optional<DomainSpec> spec;
  if (c.locs > 0 || c.max_cells > 0) spec = domain_of(c, auto_domain(t));
  TripleVerdict v = check_triple(t, wpo_config(c), spec);
  emit("verdict", to_string(v.kind));
  if (v.kind == TripleVerdict::Kind::Valid)
    emit("evidence", v.evidence == TripleVerdict::Evidence::ByEntailment ? "entailment"
                                                                         : "brute-force");
  if (v.bound_relative) emit("bound", "relative to loop bound " + std::to_string(c.loop_bound));
  if (v.kind == TripleVerdict::Kind::Unknown) emit("unknown", to_string(v.unknown));
  emit("reason", v.reason);
  if (v.witness && (witness || v.kind == TripleVerdict::Kind::Invalid)) {
    emit("witness", to_string(*v.witness));
    emit("locations", std::to_string(v.domain.locations));
  }
  if (witness && v.kind == TripleVerdict::Kind::Invalid && v.witness) {
    // the witness is a Q-state; show that no P-state reaches it
    auto pred = find_witness(t, *v.witness, v.domain, wpo_config(c));
    emit("predecessor", pred ? to_string(*pred) : "none");
  }
  switch (v.kind) {
    case TripleVerdict::Kind::Valid: return 0;
    case TripleVerdict::Kind::Invalid: return 1;
    default: return 2;
  }
}

int cmd_prove_check(const Common& c, bool expand) {
  DerivationNode d = parse_derivation(read_input(c.file, c.expr));
  if (expand && d.rule == RuleName::BackwardsVariant) d = expand_backwards_variant(d);
  CheckResult r = check_derivation(d);
  emit("nodes", std::to_string(derivation_size(d)));
  if (expand) std::cout << to_string(d) << "\n";
  if (r.ok) {
    emit("result", "ok");
    return 0;
  }
  emit("result", "violation");
  emit("path", r.path.empty() ? "root" : r.path);
  emit("rule", std::string(to_string(r.rule)));
  emit("message", r.message);
  return 1;
}

int cmd_prove_synth(const Common& c, bool quiet) {
  std::string text = read_input(c.file, c.expr);
  WpoConfig cfg = wpo_config(c);
  DerivationNode d;
  try {
    Triple t = parse_triple(text);
    d = synthesize_derivation(t.pre, t.cmd, t.exit, cfg);
    EntailVerdict v = entails(t.post, d.conclusion.post, c.var_cap);
    if (!v.holds()) {
      emit("result", "not-derivable");
      emit("reason", "postcondition does not entail wpo (" + to_string(v.kind) + ")");
      if (v.kind == EntailVerdict::Kind::Fails) emit("witness", to_string(v.counterexample));
      return v.kind == EntailVerdict::Kind::Fails ? 1 : 2;
    }
    if (!same_assertion(t.post, d.conclusion.post)) {
      DerivationNode cons;
      cons.rule = RuleName::Cons;
      cons.conclusion = t;
      cons.premises.push_back(std::move(d));
      d = std::move(cons);
    }
  } catch (const ParseError&) {
    WpoQuery q = parse_wpo_query(text);
    d = synthesize_derivation(q.pre, q.cmd, q.exit, cfg);
  }
  CheckResult r = check_derivation(d);
  if (!quiet) std::cout << to_string(d) << "\n";
  emit("nodes", std::to_string(derivation_size(d)));
  emit("check", r.ok ? "ok" : "violation at " + (r.path.empty() ? "root" : r.path) + ": " + r.message);
  if (!r.ok) throw std::logic_error("synthesized derivation rejected: " + r.message);
  return 0;
}

struct DiffArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int cases = 1000;
  int first = 0;
  int locs = 3;
  int max_cells = 2;
  int loop_bound = 3;
  int var_cap = 12;
  int disjunct_cap = 256;
  int vars = 3;
  int depth = 4;
  bool timing = false;
};

int cmd_diff_test(const DiffArgs& a) {
  std::vector<std::pair<std::string, SuiteOptions::Kind>> suites = {
      {"wpo", SuiteOptions::Kind::Wpo},
      {"cano", SuiteOptions::Kind::Cano},
      {"entails", SuiteOptions::Kind::Entails},
      {"rules", SuiteOptions::Kind::Rules}};
  int failed = 0;
  for (const auto& [name, kind] : suites) {
    if (a.suite != "all" && a.suite != name) continue;
    SuiteOptions o;
    o.kind = kind;
    o.seed = a.seed;
    o.cases = a.cases;
    o.first = a.first;
    o.domain = {a.locs, a.max_cells};
    o.loop_bound = a.loop_bound;
    o.var_cap = a.var_cap;
    o.disjunct_cap = a.disjunct_cap;
    o.gen.vars = a.vars;
    o.gen.max_depth = a.depth;
    RunReport r = run_suite(o);
    emit("suite", r.suite);
    emit("run", std::to_string(r.run));
    emit("passed", std::to_string(r.passed));
    emit("failed", std::to_string(r.failed));
    emit("skipped", std::to_string(r.skipped));
    if (a.timing) emit("seconds", std::to_string(r.seconds));
    if (r.failed > 0) {
      emit("first_failure", r.first_failure);
      std::ostringstream repro;
      repro << "islkit diff-test --suite " << name << " --seed " << a.seed << " --first "
            << r.first_failure_case << " --cases 1 --locs " << a.locs << " --max-cells "
            << a.max_cells << " --loop-bound " << a.loop_bound << " --var-cap " << a.var_cap
            << " --disjunct-cap " << a.disjunct_cap
            << " --vars " << a.vars << " --depth " << a.depth;
      emit("reproduce", repro.str());
    }
    failed += r.failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"islkit: incorrectness separation logic toolkit"};
  app.require_subcommand(1);
  std::string format = "plain";
  app.add_option("--format", format, "plain or machine (key=value lines)")
      ->check(CLI::IsMember({"plain", "machine"}));

  Common c;
  std::string as = "auto";
  auto* parse = app.add_subcommand("parse", "parse and pretty-print");
  add_input(parse, c);
  parse->add_option("--as", as, "input kind")
      ->check(CLI::IsMember({"auto", "assertion", "program", "triple", "query", "derivation"}));

  auto* desugar_cmd = app.add_subcommand("desugar", "remove if/while/assert/malloc");
  add_input(desugar_cmd, c);

  std::string state, exit = "both";
  auto* exec_cmd = app.add_subcommand("exec", "run a program from a concrete state");
  add_input(exec_cmd, c);
  add_bounds(exec_cmd, c);
  add_domain(exec_cmd, c);
  exec_cmd->add_option("--state", state, "initial state, e.g. '{x=l1} | {l1=null}'")->required();
  exec_cmd->add_option("--exit", exit, "ok, er or both")->check(CLI::IsMember({"ok", "er", "both"}));

  std::vector<std::string> vars;
  auto* canon = app.add_subcommand("canonicalize", "cano(P, C) for input 'P ; C', or over --vars");
  add_input(canon, c);
  canon->add_option("--var-cap", c.var_cap, "variable cap");
  canon->add_option("--vars", vars, "variables for an assertion-only input")->delimiter(',');

  std::string wexit = "ok";
  bool no_simplify = false, no_fixpoint = false, lines = false;
  auto* wpo_cmd = app.add_subcommand("wpo", "weakest postcondition of 'P ; C [; ok|er]'");
  add_input(wpo_cmd, c);
  add_bounds(wpo_cmd, c);
  add_caps(wpo_cmd, c);
  wpo_cmd->add_option("--exit", wexit, "exit condition when the input has none")
      ->check(CLI::IsMember({"ok", "er"}));
  wpo_cmd->add_flag("--no-simplify", no_simplify, "keep unsatisfiable and duplicate disjuncts");
  wpo_cmd->add_flag("--no-fixpoint", no_fixpoint, "always unroll loops to the bound");
  wpo_cmd->add_flag("--lines", lines, "one disjunct per line");

  std::string lhs, rhs;
  bool explain = false;
  auto* ent = app.add_subcommand("entails", "decide P |= Q (exit 0 holds, 1 fails, 2 unknown)");
  ent->add_option("P", lhs, "assertion or file")->required();
  ent->add_option("Q", rhs, "assertion or file")->required();
  ent->add_flag("--explain", explain, "print a counterexample state");
  ent->add_option("--var-cap", c.var_cap, "variable cap");

  bool witness = false;
  auto* check = app.add_subcommand("check", "validity of a triple (exit 0 valid, 1 invalid, 2 unknown)");
  add_input(check, c);
  add_bounds(check, c);
  add_caps(check, c);
  add_domain(check, c);
  check->add_flag("--witness", witness, "print witness states");

  bool expand = false;
  auto* pcheck = app.add_subcommand("prove-check", "check a derivation tree");
  add_input(pcheck, c);
  pcheck->add_flag("--expand", expand, "expand a root BackwardsVariant and print it");

  bool quiet = false;
  auto* psynth = app.add_subcommand("prove-synth", "derivation of a triple or of 'P ; C ; e'");
  add_input(psynth, c);
  add_bounds(psynth, c);
  add_caps(psynth, c);
  psynth->add_flag("-q,--quiet", quiet, "do not print the derivation");

  DiffArgs da;
  auto* diff = app.add_subcommand("diff-test", "differential suites against brute force");
  diff->add_option("--suite", da.suite, "wpo, cano, entails, rules or all")
      ->check(CLI::IsMember({"all", "wpo", "cano", "entails", "rules"}));
  diff->add_option("--seed", da.seed, "random seed");
  diff->add_option("--cases", da.cases, "cases per suite")->check(CLI::NonNegativeNumber);
  diff->add_option("--first", da.first, "index of the first case")->check(CLI::NonNegativeNumber);
  diff->add_option("--locs", da.locs, "number of locations")->check(CLI::PositiveNumber);
  diff->add_option("--max-cells", da.max_cells, "maximal heap cells")->check(CLI::PositiveNumber);
  diff->add_option("--loop-bound", da.loop_bound, "loop bound")->check(CLI::NonNegativeNumber);
  diff->add_option("--var-cap", da.var_cap, "variable cap")->check(CLI::PositiveNumber);
  diff->add_option("--disjunct-cap", da.disjunct_cap, "skip cases past this many disjuncts")
      ->check(CLI::NonNegativeNumber);
  diff->add_option("--vars", da.vars, "program variables")->check(CLI::Range(1, 6));
  diff->add_option("--depth", da.depth, "command depth")->check(CLI::PositiveNumber);
  diff->add_flag("--timing", da.timing, "report wall time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  g_machine = format == "machine";

  try {
    if (*parse) return cmd_parse(c, as);
    if (*desugar_cmd) return cmd_desugar(c);
    if (*exec_cmd) return cmd_exec(c, state, exit);
    if (*canon) return cmd_canonicalize(c, vars);
    if (*wpo_cmd) return cmd_wpo(c, wexit, no_simplify, no_fixpoint, lines);
    if (*ent) return cmd_entails(lhs, rhs, explain, c.var_cap);
    if (*check) return cmd_check(c, witness);
    if (*pcheck) return cmd_prove_check(c, expand);
    if (*psynth) return cmd_prove_synth(c, quiet);
    if (*diff) return cmd_diff_test(da);
  } catch (const UsageError& e) {
    std::cerr << "islkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "islkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "islkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VarCapExceeded& e) {
    std::cerr << "islkit: " << e.what() << " (raise --var-cap)\n";
    return kExitUsage;
  } catch (const DisjunctCapExceeded& e) {
    std::cerr << "islkit: " << e.what() << " (raise --disjunct-cap)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "islkit: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
