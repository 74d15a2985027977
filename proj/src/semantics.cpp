#include "islkit/semantics.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace isl {

std::vector<Value> DomainSpec::values() const {
  std::vector<Value> out;
  for (Value v = 0; v <= locations; ++v) out.push_back(v);
  return out;
}

Value Store::operator()(Var x) const {
  auto it = std::lower_bound(vals_.begin(), vals_.end(), x,
                             [](const auto& kv, Var k) { return kv.first < k; });
  if (it != vals_.end() && it->first == x) return it->second;
  return kNull;
}

Store Store::set(Var x, Value v) const {
  Store out = *this;
  auto it = std::lower_bound(out.vals_.begin(), out.vals_.end(), x,
                             [](const auto& kv, Var k) { return kv.first < k; });
  bool present = it != out.vals_.end() && it->first == x;
  if (v == kNull) {
    if (present) out.vals_.erase(it);
  } else if (present) {
    it->second = v;
  } else {
    out.vals_.insert(it, {x, v});
  }
  return out;
}

std::optional<Value> Heap::get(Value loc) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), loc,
                             [](const auto& kv, Value k) { return kv.first < k; });
  if (it != cells_.end() && it->first == loc) return it->second;
  return std::nullopt;
}

Heap Heap::set(Value loc, Value v) const {
  Heap out = *this;
  auto it = std::lower_bound(out.cells_.begin(), out.cells_.end(), loc,
                             [](const auto& kv, Value k) { return kv.first < k; });
  if (it != out.cells_.end() && it->first == loc) {
    it->second = v;
  } else {
    out.cells_.insert(it, {loc, v});
  }
  return out;
}

// ---- satisfaction ----------------------------------------------------------

namespace {

constexpr Value kUnbound = -2;

class Matcher {
 public:
  Matcher(const State& st, const QuantifiedHeap& q, const DomainSpec& d)
      : st_(st), q_(q), d_(d), bind_(q.binders.size(), kUnbound), used_(st.heap.size(), false) {
    for (const Atom& a : q.body.atoms()) {
      if (a.is_cell()) cells_.push_back(&a);
      if (a.is_pure()) pures_.push_back(&a);
    }
  }

  bool run() {
    if (cells_.size() != st_.heap.size()) return false;
    return match_cell(0);
  }

 private:
  int binder(Term t) const {
    if (t.is_null()) return -1;
    for (std::size_t i = 0; i < q_.binders.size(); ++i)
      if (Term(q_.binders[i]) == t) return static_cast<int>(i);
    return -1;
  }

  Value eval(Term t) const {
    int b = binder(t);
    if (b >= 0) return bind_[b];
    return st_.store.eval(t);
  }

  bool match_cell(std::size_t i) {
    if (i == cells_.size()) return match_pure();
    const Atom& a = *cells_[i];
    int sb = binder(a.lhs);
    Value src = eval(a.lhs);
    const auto& hc = st_.heap.cells();
    for (std::size_t j = 0; j < hc.size(); ++j) {
      if (used_[j]) continue;
      if (src != kUnbound && hc[j].first != src) continue;
      Value content = hc[j].second;
      if (sb >= 0 && src == kUnbound) bind_[sb] = hc[j].first;
      bool ok = false;
      int db = -1;
      if (a.kind == Atom::Kind::NegPoints) {
        ok = content == kBottom;
      } else if (content != kBottom) {
        Value dst = eval(a.rhs);
        if (dst == kUnbound) {
          db = binder(a.rhs);
          bind_[db] = content;
          ok = true;
        } else {
          ok = dst == content;
        }
      }
      if (ok) {
        used_[j] = true;
        if (match_cell(i + 1)) return true;
        used_[j] = false;
      }
      if (db >= 0) bind_[db] = kUnbound;
      if (sb >= 0 && src == kUnbound) bind_[sb] = kUnbound;
    }
    return false;
  }

  bool pure_holds(const Atom& a) const {
    Value l = eval(a.lhs), r = eval(a.rhs);
    return a.kind == Atom::Kind::Eq ? l == r : l != r;
  }

  bool match_pure() {
    std::vector<Value> saved = bind_;
    // propagate equalities into unbound binders
    for (bool changed = true; changed;) {
      changed = false;
      for (const Atom* a : pures_) {
        if (a->kind != Atom::Kind::Eq) continue;
        Value l = eval(a->lhs), r = eval(a->rhs);
        if (l == kUnbound && r != kUnbound) {
          bind_[binder(a->lhs)] = r;
          changed = true;
        } else if (r == kUnbound && l != kUnbound) {
          bind_[binder(a->rhs)] = l;
          changed = true;
        }
      }
    }
    std::vector<int> open;
    for (const Atom* a : pures_) {
      for (Term t : {a->lhs, a->rhs}) {
        int b = binder(t);
        if (b >= 0 && bind_[b] == kUnbound &&
            std::find(open.begin(), open.end(), b) == open.end())
          open.push_back(b);
      }
    }
    bool ok = enumerate(open, 0);
    bind_ = std::move(saved);
    return ok;
  }

  bool enumerate(const std::vector<int>& open, std::size_t k) {
    if (k == open.size()) {
      for (const Atom* a : pures_)
        if (!pure_holds(*a)) return false;
      return true;
    }
    for (Value v = 0; v <= d_.locations; ++v) {
      bind_[open[k]] = v;
      if (enumerate(open, k + 1)) return true;
    }
    bind_[open[k]] = kUnbound;
    return false;
  }

  const State& st_;
  const QuantifiedHeap& q_;
  const DomainSpec& d_;
  std::vector<Value> bind_;
  std::vector<bool> used_;
  std::vector<const Atom*> cells_;
  std::vector<const Atom*> pures_;
};

}  // namespace

bool satisfies(const State& st, const QuantifiedHeap& q, const DomainSpec& d) {
  return Matcher(st, q, d).run();
}

bool satisfies(const State& st, const Assertion& p, const DomainSpec& d) {
  for (const auto& q : p.disjuncts)
    if (satisfies(st, q, d)) return true;
  return false;
}

// ---- execution -------------------------------------------------------------

namespace {

bool store_models(const Store& s, const SymbolicHeap& b) {
  for (const Atom& a : b.atoms()) {
    bool eq = s.eval(a.lhs) == s.eval(a.rhs);
    if (a.kind == Atom::Kind::Eq && !eq) return false;
    if (a.kind == Atom::Kind::Neq && eq) return false;
  }
  return true;
}

class Executor {
 public:
  Executor(const DomainSpec& d, const ExecOptions& opt) : d_(d), opt_(opt) {}

  void step(const State& st, const Command& c, Outcomes& out) const {
    const Store& s = st.store;
    const Heap& h = st.heap;
    if (c.is<node::Skip>()) {
      out.ok.insert(st);
    } else if (c.is<node::Error>()) {
      out.er.insert(st);
    } else if (auto* n = c.as<node::Assign>()) {
      out.ok.insert({s.set(n->x, s.eval(n->t)), h});
    } else if (auto* n = c.as<node::Havoc>()) {
      for (Value v = 0; v <= d_.locations; ++v) out.ok.insert({s.set(n->x, v), h});
    } else if (auto* n = c.as<node::Assume>()) {
      if (store_models(s, n->cond)) out.ok.insert(st);
    } else if (auto* n = c.as<node::Local>()) {
      Value keep = s(n->x);
      for (Value v = 0; v <= d_.locations; ++v) {
        Outcomes inner;
        step({s.set(n->x, v), h}, *n->body, inner);
        for (const State& r : inner.ok) out.ok.insert({r.store.set(n->x, keep), r.heap});
        for (const State& r : inner.er) out.er.insert({r.store.set(n->x, keep), r.heap});
      }
    } else if (auto* n = c.as<node::Seq>()) {
      Outcomes first;
      step(st, *n->first, first);
      out.er.insert(first.er.begin(), first.er.end());
      for (const State& mid : first.ok) step(mid, *n->second, out);
    } else if (auto* n = c.as<node::Choice>()) {
      step(st, *n->left, out);
      step(st, *n->right, out);
    } else if (auto* n = c.as<node::Star>()) {
      std::set<State> seen{st};
      std::vector<State> frontier{st};
      for (int k = 0; k < opt_.loop_bound && !frontier.empty(); ++k) {
        Outcomes round;
        for (const State& f : frontier) step(f, *n->body, round);
        out.er.insert(round.er.begin(), round.er.end());
        frontier.clear();
        for (const State& r : round.ok)
          if (seen.insert(r).second) frontier.push_back(r);
      }
      out.ok.insert(seen.begin(), seen.end());
    } else if (auto* n = c.as<node::Alloc>()) {
      bool any = false;
      for (Value l = 1; l <= d_.locations; ++l) {
        auto cur = h.get(l);
        if (cur && *cur != kBottom) continue;
        any = true;
        for (Value v = 0; v <= d_.locations; ++v) out.ok.insert({s.set(n->x, l), h.set(l, v)});
      }
      if (!any && opt_.strict_alloc) throw DomainExhausted();
    } else if (auto* n = c.as<node::Free>()) {
      Value l = s(n->x);
      if (h.in_dom_plus(l)) {
        out.ok.insert({s, h.set(l, kBottom)});
      } else {
        out.er.insert(st);
      }
    } else if (auto* n = c.as<node::Load>()) {
      Value l = s(n->y);
      if (h.in_dom_plus(l)) {
        out.ok.insert({s.set(n->x, *h.get(l)), h});
      } else {
        out.er.insert(st);
      }
    } else if (auto* n = c.as<node::Store>()) {
      Value l = s(n->x);
      if (h.in_dom_plus(l)) {
        out.ok.insert({s, h.set(l, s.eval(n->t))});
      } else {
        out.er.insert(st);
      }
    } else {
      step(st, *desugar(std::make_shared<const Command>(c)), out);
    }
  }

 private:
  const DomainSpec& d_;
  const ExecOptions& opt_;
};

}  // namespace

Outcomes exec_both(const State& st, const Command& c, const DomainSpec& d,
                   const ExecOptions& opt) {
  Outcomes out;
  CommandPtr core = desugar(std::make_shared<const Command>(c));
  Executor(d, opt).step(st, *core, out);
  return out;
}

std::vector<State> exec(const State& st, const Command& c, Exit e, const DomainSpec& d,
                        const ExecOptions& opt) {
  Outcomes o = exec_both(st, c, d, opt);
  const auto& s = e == Exit::Ok ? o.ok : o.er;
  return {s.begin(), s.end()};
}

// ---- enumeration and oracles -----------------------------------------------

std::vector<State> enum_states(const VarSet& vars, const DomainSpec& d) {
  std::vector<Store> stores{Store{}};
  for (Var x : vars) {
    std::vector<Store> next;
    for (const Store& s : stores)
      for (Value v = 0; v <= d.locations; ++v) next.push_back(s.set(x, v));
    stores = std::move(next);
  }
  std::vector<Heap> heaps;
  // Subsets of locations of size <= max_heap_cells, then cell contents.
  std::vector<Value> locs;
  for (Value l = 1; l <= d.locations; ++l) locs.push_back(l);
  int n = d.locations;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > d.max_heap_cells) continue;
    std::vector<Heap> partial{Heap{}};
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      std::vector<Heap> next;
      for (const Heap& h : partial) {
        next.push_back(h.set(locs[i], kBottom));
        for (Value v = 0; v <= d.locations; ++v) next.push_back(h.set(locs[i], v));
      }
      partial = std::move(next);
    }
    heaps.insert(heaps.end(), partial.begin(), partial.end());
  }
  std::vector<State> out;
  out.reserve(stores.size() * heaps.size());
  for (const Store& s : stores)
    for (const Heap& h : heaps) out.push_back({s, h});
  return out;
}

std::set<State> brute_wpo(const Assertion& p, const Command& c, Exit e, const DomainSpec& d,
                          const ExecOptions& opt, const VarSet& extra) {
  VarSet vars = fv(p) | fv(c) | extra;
  CommandPtr core = desugar(std::make_shared<const Command>(c));
  Executor ex(d, opt);
  std::set<State> out;
  for (const State& st : enum_states(vars, d)) {
    if (!satisfies(st, p, d)) continue;
    Outcomes o;
    ex.step(st, *core, o);
    const auto& s = e == Exit::Ok ? o.ok : o.er;
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::vector<State> brute_counterexamples(const Triple& t, const DomainSpec& d,
                                         const ExecOptions& opt, std::size_t limit) {
  VarSet vars = fv(t);
  std::set<State> reach = brute_wpo(t.pre, *t.cmd, t.exit, d, opt, vars);
  std::vector<State> out;
  for (const State& st : enum_states(vars, d)) {
    if (!satisfies(st, t.post, d) || reach.count(st)) continue;
    out.push_back(st);
    if (out.size() >= limit) break;
  }
  return out;
}

bool brute_valid(const Triple& t, const DomainSpec& d, const ExecOptions& opt) {
  return brute_counterexamples(t, d, opt, 1).empty();
}

// ---- printing --------------------------------------------------------------

std::string value_name(Value v) {
  if (v == kNull) return "null";
  if (v == kBottom) return "⊥";
  return "l" + std::to_string(v);
}

std::string to_string(const Store& s) {
  std::string out = "{";
  for (const auto& [x, v] : s.bindings()) {
    if (out.size() > 1) out += ", ";
    out += x.name() + "=" + value_name(v);
  }
  return out + "}";
}

std::string to_string(const Heap& h) {
  std::string out = "{";
  for (const auto& [l, v] : h.cells()) {
    if (out.size() > 1) out += ", ";
    out += value_name(l) + "=" + value_name(v);
  }
  return out + "}";
}

std::string to_string(const State& st) { return to_string(st.store) + " | " + to_string(st.heap); }

namespace {

struct StateReader {
  std::string_view text;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad state at offset " + std::to_string(i) + ": expected " + what);
  }
  void skip_ws() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }
  bool accept(std::string_view s) {
    skip_ws();
    if (text.substr(i, s.size()) == s) {
      i += s.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("'" + std::string(s) + "'");
  }
  std::string word() {
    skip_ws();
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                               text[j] == '_' || text[j] == '\''))
      ++j;
    if (j == i) fail("name");
    std::string w(text.substr(i, j - i));
    i = j;
    return w;
  }
  Value value(bool allow_bottom) {
    if (allow_bottom && (accept("⊥") || accept("bot"))) return kBottom;
    std::string w = word();
    if (w == "null") return kNull;
    if (w.size() > 1 && w[0] == 'l' &&
        std::all_of(w.begin() + 1, w.end(), [](char c) { return std::isdigit(c); })) {
      int v = std::stoi(w.substr(1));
      if (v >= 1) return v;
    }
    fail("value (null, l1, l2, ...)");
  }
};

}  // namespace

State parse_state(std::string_view text) {
  StateReader r{text};
  State st;
  r.expect("{");
  if (!r.accept("}")) {
    do {
      Var x(r.word());
      r.expect("=");
      st.store = st.store.set(x, r.value(false));
    } while (r.accept(","));
    r.expect("}");
  }
  r.expect("|");
  r.expect("{");
  if (!r.accept("}")) {
    do {
      Value l = r.value(false);
      if (l == kNull) r.fail("location");
      r.expect("=");
      st.heap = st.heap.set(l, r.value(true));
    } while (r.accept(","));
    r.expect("}");
  }
  r.skip_ws();
  if (r.i != text.size()) r.fail("end of input");
  return st;
}

}  // namespace isl
