#include "maxreal/encoding.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace maxreal::enc {

using automata::RelaxedAutomaton;
using automata::SymbolicAutomaton;
using ltl::Formula;

// ---------------------------------------------------------------- VarTable

int VarTable::intern(const std::string& name) {
  auto [it, fresh] = ids_.try_emplace(name, static_cast<int>(names_.size()) + 1);
  if (fresh) names_.push_back(name);
  return it->second;
}

std::optional<int> VarTable::find(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int VarTable::fresh_aux() { return intern("aux_" + std::to_string(aux_count_++)); }

namespace {
std::string name_trans(int s, int iv, int s2) {
  return "tau_" + std::to_string(s) + "_" + std::to_string(iv) + "_" + std::to_string(s2);
}
std::string name_out(int o, int s, int iv) {
  return "out_" + std::to_string(o) + "_" + std::to_string(s) + "_" + std::to_string(iv);
}
std::string name_ann(const std::string& fam, int s, int q) {
  return fam + "_" + std::to_string(s) + "_" + std::to_string(q);
}
std::string name_ann(const std::string& fam, int s, int q, int bit) {
  return name_ann(fam, s, q) + "_" + std::to_string(bit);
}
}  // namespace

int VarTable::trans(int s, int iv, int s2) { return intern(name_trans(s, iv, s2)); }
int VarTable::out(int o, int s, int iv) { return intern(name_out(o, s, iv)); }
int VarTable::reach_hard(int s, int q) { return intern(name_ann("lB", s, q)); }
int VarTable::reach_mon(int s, int q) { return intern(name_ann("lS", s, q)); }
int VarTable::bound_hard(int s, int q, int bit) { return intern(name_ann("lN", s, q, bit)); }
int VarTable::reach_fg(int j, int s, int q) {
  return intern(name_ann("lfgB" + std::to_string(j), s, q));
}
int VarTable::bound_fg(int j, int s, int q, int bit) {
  return intern(name_ann("lfgN" + std::to_string(j), s, q, bit));
}
int VarTable::reach_gf(int j, int s, int q) {
  return intern(name_ann("lgfB" + std::to_string(j), s, q));
}
int VarTable::bound_gf(int j, int s, int q, int bit) {
  return intern(name_ann("lgfN" + std::to_string(j), s, q, bit));
}
int VarTable::reach_level(int j, int l, int s, int q) {
  return intern(name_ann("lvB" + std::to_string(j) + "_" + std::to_string(l), s, q));
}
int VarTable::bound_level(int j, int l, int s, int q, int bit) {
  return intern(name_ann("lvN" + std::to_string(j) + "_" + std::to_string(l), s, q, bit));
}
int VarTable::soft_ind(int j, int k) {
  return intern("soft_" + std::to_string(j) + "_" + std::to_string(k));
}

std::string VarTable::map_text() const {
  std::string out;
  for (size_t i = 0; i < names_.size(); ++i)
    out += names_[i] + " " + std::to_string(i + 1) + "\n";
  return out;
}

// ------------------------------------------------------------ WcnfInstance

long long WcnfInstance::total_soft_weight() const {
  long long sum = 0;
  for (const auto& c : soft) sum += c.weight;
  return sum;
}

void WcnfInstance::add_hard(std::vector<int> lits) {
  if (lits.empty()) throw std::runtime_error("empty hard clause");
  hard.push_back(std::move(lits));
}

void WcnfInstance::add_soft(long long weight, std::vector<int> lits) {
  if (weight < 1) throw std::runtime_error("soft clause weight must be positive");
  soft.push_back({weight, std::move(lits)});
}

std::string to_wdimacs(const WcnfInstance& w) {
  std::ostringstream os;
  long long top = w.top();
  os << "p wcnf " << w.num_vars << ' ' << w.hard.size() + w.soft.size() << ' ' << top << '\n';
  auto line = [&](long long weight, const std::vector<int>& lits) {
    os << weight;
    for (int l : lits) os << ' ' << l;
    os << " 0\n";
  };
  for (const auto& c : w.hard) line(top, c);
  for (const auto& c : w.soft) line(c.weight, c.lits);
  return os.str();
}

WcnfInstance parse_wdimacs(const std::string& text) {
  WcnfInstance w;
  std::istringstream is(text);
  std::string line;
  long long top = -1;
  size_t declared = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> w.num_vars >> declared >> top;
      if (fmt != "wcnf") throw std::runtime_error("not a wcnf file");
      continue;
    }
    if (top < 0) throw std::runtime_error("clause before wcnf header");
    long long weight;
    ls >> weight;
    std::vector<int> lits;
    int lit;
    while (ls >> lit && lit != 0) lits.push_back(lit);
    if (weight == top)
      w.hard.push_back(std::move(lits));
    else
      w.soft.push_back({weight, std::move(lits)});
  }
  if (top < 0) throw std::runtime_error("missing wcnf header");
  if (w.hard.size() + w.soft.size() != declared)
    throw std::runtime_error("wcnf clause count mismatch");
  if (w.top() != top) throw std::runtime_error("wcnf top weight inconsistent with soft weights");
  return w;
}

Stats stats(const WcnfInstance& w) {
  return {w.num_vars, static_cast<int>(w.hard.size() + w.soft.size()), w.total_soft_weight()};
}

// ------------------------------------------------------------------- Expr

namespace {
Expr make(ExprNode::Kind k, int lit, std::vector<Expr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lit = lit;
  n->args = std::move(args);
  return n;
}
}  // namespace

Expr e_true() {
  static const Expr t = make(ExprNode::Kind::True, 0, {});
  return t;
}
Expr e_false() {
  static const Expr f = make(ExprNode::Kind::False, 0, {});
  return f;
}
Expr e_lit(int lit) {
  if (lit == 0) throw std::runtime_error("literal 0");
  return make(ExprNode::Kind::Lit, lit, {});
}

Expr e_and(std::vector<Expr> args) {
  std::vector<Expr> kept;
  for (auto& a : args) {
    if (a->kind == ExprNode::Kind::False) return e_false();
    if (a->kind == ExprNode::Kind::True) continue;
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return e_true();
  if (kept.size() == 1) return kept[0];
  return make(ExprNode::Kind::And, 0, std::move(kept));
}

Expr e_or(std::vector<Expr> args) {
  std::vector<Expr> kept;
  for (auto& a : args) {
    if (a->kind == ExprNode::Kind::True) return e_true();
    if (a->kind == ExprNode::Kind::False) continue;
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return e_false();
  if (kept.size() == 1) return kept[0];
  return make(ExprNode::Kind::Or, 0, std::move(kept));
}

// ----------------------------------------------------------------- Tseitin

int tseitin(const Expr& e, Polarity p, VarTable& vt, WcnfInstance& w) {
  switch (e->kind) {
    case ExprNode::Kind::Lit:
      return e->lit;
    case ExprNode::Kind::True: {
      int v = vt.fresh_aux();
      w.add_hard({v});
      return v;
    }
    case ExprNode::Kind::False: {
      int v = vt.fresh_aux();
      w.add_hard({-v});
      return v;
    }
    case ExprNode::Kind::And: {
      int v = vt.fresh_aux();
      std::vector<int> sub;
      for (const auto& a : e->args) sub.push_back(tseitin(a, p, vt, w));
      if (p == Polarity::Implies || p == Polarity::Both)
        for (int l : sub) w.add_hard({-v, l});
      if (p == Polarity::Implied || p == Polarity::Both) {
        std::vector<int> clause;
        for (int l : sub) clause.push_back(-l);
        clause.push_back(v);
        w.add_hard(std::move(clause));
      }
      return v;
    }
    case ExprNode::Kind::Or: {
      int v = vt.fresh_aux();
      std::vector<int> sub;
      for (const auto& a : e->args) sub.push_back(tseitin(a, p, vt, w));
      if (p == Polarity::Implies || p == Polarity::Both) {
        std::vector<int> clause{-v};
        clause.insert(clause.end(), sub.begin(), sub.end());
        w.add_hard(std::move(clause));
      }
      if (p == Polarity::Implied || p == Polarity::Both)
        for (int l : sub) w.add_hard({-l, v});
      return v;
    }
  }
  throw std::logic_error("bad expr kind");
}

namespace {

// Appends literals whose disjunction is implied by !e (so a clause holding
// them is entailed whenever e is false is NOT what we need -- rather, the
// appended literals are false whenever e is true, making the rest of the
// clause carry the implication e -> rest).
void push_negated(const Expr& e, std::vector<int>& clause, VarTable& vt, WcnfInstance& w) {
  switch (e->kind) {
    case ExprNode::Kind::True:
      return;  // !true contributes nothing
    case ExprNode::Kind::False:
      throw std::logic_error("negating constant false antecedent");
    case ExprNode::Kind::Lit:
      clause.push_back(-e->lit);
      return;
    case ExprNode::Kind::And:
      for (const auto& a : e->args) push_negated(a, clause, vt, w);
      return;
    case ExprNode::Kind::Or:
      clause.push_back(-tseitin(e, Polarity::Implied, vt, w));
      return;
  }
}

}  // namespace

void emit_implication(const std::vector<int>& negated_antecedent, const Expr& rhs, VarTable& vt,
                      WcnfInstance& w) {
  switch (rhs->kind) {
    case ExprNode::Kind::True:
      return;
    case ExprNode::Kind::False:
      w.add_hard(negated_antecedent);
      return;
    case ExprNode::Kind::Lit: {
      std::vector<int> clause = negated_antecedent;
      clause.push_back(rhs->lit);
      w.add_hard(std::move(clause));
      return;
    }
    case ExprNode::Kind::And:
      for (const auto& a : rhs->args) emit_implication(negated_antecedent, a, vt, w);
      return;
    case ExprNode::Kind::Or: {
      std::vector<int> clause = negated_antecedent;
      for (const auto& a : rhs->args)
        clause.push_back(a->kind == ExprNode::Kind::Lit ? a->lit
                                                        : tseitin(a, Polarity::Implies, vt, w));
      w.add_hard(std::move(clause));
      return;
    }
  }
}

// ------------------------------------------------------------- comparators

namespace {
Expr bit_eq(int x, int y) {
  return e_or({e_and({e_lit(x), e_lit(y)}), e_and({e_lit(-x), e_lit(-y)})});
}
}  // namespace

Expr cmp_gt(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw std::runtime_error("comparator width mismatch");
  Expr res = e_false();
  for (size_t i = 0; i < x.size(); ++i)  // LSB to MSB
    res = e_or({e_and({e_lit(x[i]), e_lit(-y[i])}), e_and({bit_eq(x[i], y[i]), res})});
  return res;
}

Expr cmp_ge(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw std::runtime_error("comparator width mismatch");
  Expr res = e_true();
  for (size_t i = 0; i < x.size(); ++i)
    res = e_or({e_and({e_lit(x[i]), e_lit(-y[i])}), e_and({bit_eq(x[i], y[i]), res})});
  return res;
}

Expr cmp_eq_const(const std::vector<int>& x, unsigned value) {
  if (value >> x.size() != 0) throw std::runtime_error("constant exceeds comparator width");
  std::vector<Expr> bits;
  for (size_t i = 0; i < x.size(); ++i)
    bits.push_back(e_lit(value >> i & 1 ? x[i] : -x[i]));
  return e_and(std::move(bits));
}

// ------------------------------------------------------------------ guards

Expr guard_expr(const Formula& g, const std::map<std::string, bool>& input_val,
                const std::map<std::string, int>& out_lit) {
  // Recursion carries a negation flag; guards are propositional only.
  std::function<Expr(const Formula&, bool)> go = [&](const Formula& f, bool neg) -> Expr {
    switch (f->op) {
      case ltl::Op::True:
        return neg ? e_false() : e_true();
      case ltl::Op::False:
        return neg ? e_true() : e_false();
      case ltl::Op::Atom: {
        auto in = input_val.find(f->atom);
        if (in != input_val.end()) return in->second != neg ? e_true() : e_false();
        auto out = out_lit.find(f->atom);
        if (out == out_lit.end())
          throw std::runtime_error("guard atom is neither input nor output: " + f->atom);
        return e_lit(neg ? -out->second : out->second);
      }
      case ltl::Op::Not:
        return go(f->lhs, !neg);
      case ltl::Op::And:
        return neg ? e_or({go(f->lhs, true), go(f->rhs, true)})
                   : e_and({go(f->lhs, false), go(f->rhs, false)});
      case ltl::Op::Or:
        return neg ? e_and({go(f->lhs, true), go(f->rhs, true)})
                   : e_or({go(f->lhs, false), go(f->rhs, false)});
      case ltl::Op::Implies:
        return neg ? e_and({go(f->lhs, false), go(f->rhs, true)})
                   : e_or({go(f->lhs, true), go(f->rhs, false)});
      default:
        throw std::runtime_error("temporal operator in a guard");
    }
  };
  return go(g, false);
}

// ------------------------------------------------------------- annotations

int annotation_width_cobuchi(int b, int num_rejecting) {
  int range = b * num_rejecting;  // annotation values live in [0, b*|F|]
  int w = 0;
  while ((1 << w) < range + 1) ++w;
  return w;
}

int annotation_width_fg(int b) {
  int w = 0;
  while ((1 << w) < b + 1) ++w;
  return w;
}

void encode_input_enabled(int b, int num_inputs, VarTable& vt, WcnfInstance& w) {
  if (b < 1) throw std::runtime_error("bound must be positive");
  for (int s = 0; s < b; ++s)
    for (int iv = 0; iv < (1 << num_inputs); ++iv) {
      std::vector<int> clause;
      for (int s2 = 0; s2 < b; ++s2) clause.push_back(vt.trans(s, iv, s2));
      w.add_hard(std::move(clause));
    }
}

void encode_state_order(int b, int num_inputs, VarTable& vt, WcnfInstance& w) {
  if (b < 2) return;
  // Machine-state symmetry breaking: m_s over-approximates reachability from
  // state 0, and every reached state must have a predecessor with a smaller
  // index. Any solution can be relabeled in BFS discovery order to satisfy
  // this, and a minimal assignment of m exempts unused states.
  int num_iv = 1 << num_inputs;
  std::vector<int> m(b);
  for (int s = 0; s < b; ++s) m[s] = vt.intern("mreach_" + std::to_string(s));
  w.add_hard({m[0]});
  for (int s = 0; s < b; ++s)
    for (int iv = 0; iv < num_iv; ++iv)
      for (int t = 0; t < b; ++t) {
        if (t == s) continue;
        w.add_hard({-m[s], -vt.trans(s, iv, t), m[t]});
      }
  for (int t = 1; t < b; ++t) {
    std::vector<int> clause{-m[t]};
    for (int s = 0; s < t; ++s)
      for (int iv = 0; iv < num_iv; ++iv) clause.push_back(vt.trans(s, iv, t));
    w.add_hard(std::move(clause));
  }
}

namespace {

struct GuardContext {
  const std::vector<std::string>& inputs;
  const std::vector<std::string>& outputs;
  VarTable& vt;

  std::map<std::string, bool> input_val(int iv) const {
    std::map<std::string, bool> val;
    for (size_t i = 0; i < inputs.size(); ++i) val[inputs[i]] = (iv >> i & 1) != 0;
    return val;
  }
  std::map<std::string, int> out_lits(int s, int iv) const {
    std::map<std::string, int> m;
    for (size_t o = 0; o < outputs.size(); ++o)
      m[outputs[o]] = vt.out(static_cast<int>(o), s, iv);
    return m;
  }
};

// Comparator literals are independent of the input valuation; cache them
// across the 2^|I| * b^2 clause group they serve.
struct CmpCache {
  std::map<std::tuple<int, int, int, int, bool>, int> lit;

  int get(int s, int q, int s2, int q2, bool strict, const AnnotationAccess& av, VarTable& vt,
          WcnfInstance& w) {
    auto key = std::make_tuple(s, q, s2, q2, strict);
    auto it = lit.find(key);
    if (it != lit.end()) return it->second;
    std::vector<int> from, to;
    for (int i = 0; i < av.width; ++i) {
      from.push_back(av.bit(s, q, i));
      to.push_back(av.bit(s2, q2, i));
    }
    Expr cmp = strict ? cmp_gt(to, from) : cmp_ge(to, from);
    int l = tseitin(cmp, Polarity::Implies, vt, w);
    lit.emplace(key, l);
    return l;
  }

  // Zero-width special case: >= is vacuous (nullopt clause), > is false.
  static bool trivially_true(int width, bool strict) { return width == 0 && !strict; }
  static bool trivially_false(int width, bool strict) { return width == 0 && strict; }
};

void emit_annotation_step(int b, int num_iv, const GuardContext& gc, const AnnotationAccess& av,
                          int q, int q2, const std::vector<Formula>& guards,
                          const std::vector<Formula>& rej_guards, bool cobuchi_strict,
                          CmpCache& cache, VarTable& vt, WcnfInstance& w) {
  for (int s = 0; s < b; ++s)
    for (int iv = 0; iv < num_iv; ++iv) {
      auto ival = gc.input_val(iv);
      auto olits = gc.out_lits(s, iv);
      std::vector<Expr> parts;
      for (const auto& g : guards) parts.push_back(guard_expr(g, ival, olits));
      Expr delta = e_or(std::move(parts));
      if (delta->kind == ExprNode::Kind::False) continue;
      std::vector<Expr> rej_parts;
      for (const auto& g : rej_guards) rej_parts.push_back(guard_expr(g, ival, olits));
      Expr rej = e_or(std::move(rej_parts));

      std::vector<int> base{-av.reach(s, q)};
      push_negated(delta, base, vt, w);
      for (int s2 = 0; s2 < b; ++s2) {
        std::vector<int> ante = base;
        ante.push_back(-vt.trans(s, iv, s2));
        {
          std::vector<int> clause = ante;
          clause.push_back(av.reach(s2, q2));
          w.add_hard(std::move(clause));
        }
        auto add_cmp = [&](bool strict, int extra_lit) {
          if (CmpCache::trivially_true(av.width, strict)) return;
          std::vector<int> clause = ante;
          if (extra_lit != 0) clause.push_back(extra_lit);
          if (!CmpCache::trivially_false(av.width, strict))
            clause.push_back(cache.get(s, q, s2, q2, strict, av, vt, w));
          w.add_hard(std::move(clause));
        };
        if (rej_guards.empty() || rej->kind == ExprNode::Kind::False) {
          add_cmp(cobuchi_strict, 0);
        } else if (rej->kind == ExprNode::Kind::True) {
          add_cmp(true, 0);
        } else {
          int r = tseitin(rej, Polarity::Both, vt, w);
          add_cmp(true, -r);   // rej holds  -> strict increase
          add_cmp(false, r);   // rej fails  -> non-strict
        }
      }
    }
}

}  // namespace

void encode_cobuchi_annotation(const SymbolicAutomaton& a, int b,
                               const std::vector<std::string>& inputs,
                               const std::vector<std::string>& outputs,
                               const AnnotationAccess& av, VarTable& vt, WcnfInstance& w) {
  GuardContext gc{inputs, outputs, vt};
  CmpCache cache;
  int num_iv = 1 << inputs.size();
  std::map<std::pair<int, int>, std::vector<Formula>> by_pair;
  for (const auto& e : a.edges) by_pair[{e.src, e.dst}].push_back(e.guard);
  for (const auto& [pair, guards] : by_pair)
    emit_annotation_step(b, num_iv, gc, av, pair.first, pair.second, guards, {},
                         a.marked[pair.second], cache, vt, w);
}

void encode_fg_annotation(const RelaxedAutomaton& a, int b, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs, const AnnotationAccess& av,
                          VarTable& vt, WcnfInstance& w) {
  GuardContext gc{inputs, outputs, vt};
  CmpCache cache;
  int num_iv = 1 << inputs.size();
  std::map<std::pair<int, int>, std::vector<Formula>> by_pair, rej_by_pair;
  for (size_t i = 0; i < a.base.edges.size(); ++i) {
    const auto& e = a.base.edges[i];
    by_pair[{e.src, e.dst}].push_back(e.guard);
    if (a.rej_edges.count(static_cast<int>(i))) rej_by_pair[{e.src, e.dst}].push_back(e.guard);
  }
  for (const auto& [pair, guards] : by_pair) {
    auto it = rej_by_pair.find(pair);
    emit_annotation_step(b, num_iv, gc, av, pair.first, pair.second, guards,
                         it == rej_by_pair.end() ? std::vector<Formula>{} : it->second, false,
                         cache, vt, w);
  }
}

void encode_hard_annotation(const SymbolicAutomaton& ucw, int b,
                            const std::vector<std::string>& inputs,
                            const std::vector<std::string>& outputs, VarTable& vt,
                            WcnfInstance& w) {
  int rejecting = static_cast<int>(std::count(ucw.marked.begin(), ucw.marked.end(), true));
  AnnotationAccess av{
      [&vt](int s, int q) { return vt.reach_hard(s, q); },
      [&vt](int s, int q, int bit) { return vt.bound_hard(s, q, bit); },
      annotation_width_cobuchi(b, rejecting),
  };
  w.add_hard({vt.reach_hard(0, ucw.initial)});
  encode_cobuchi_annotation(ucw, b, inputs, outputs, av, vt, w);
}

void encode_hard_safety(const automata::SafetyAutomaton& mon, int b,
                        const std::vector<std::string>& inputs,
                        const std::vector<std::string>& outputs, VarTable& vt, WcnfInstance& w) {
  if (mon.sink == mon.base.initial) {
    // The hard specification is equivalent to false.
    int v = vt.fresh_aux();
    w.add_hard({v});
    w.add_hard({-v});
    return;
  }
  if (mon.sink == -1 && mon.base.edges.empty()) return;  // equivalent to true

  GuardContext gc{inputs, outputs, vt};
  int num_iv = 1 << inputs.size();
  std::map<std::pair<int, int>, std::vector<Formula>> by_pair;
  std::map<int, std::vector<Formula>> to_sink;
  for (const auto& e : mon.base.edges) {
    if (e.src == mon.sink) continue;
    if (e.dst == mon.sink)
      to_sink[e.src].push_back(e.guard);
    else
      by_pair[{e.src, e.dst}].push_back(e.guard);
  }

  w.add_hard({vt.reach_mon(0, mon.base.initial)});
  for (int s = 0; s < b; ++s)
    for (int iv = 0; iv < num_iv; ++iv) {
      auto ival = gc.input_val(iv);
      auto olits = gc.out_lits(s, iv);
      // Reachability closure over non-sink monitor states.
      for (const auto& [pair, guards] : by_pair) {
        std::vector<Expr> parts;
        for (const auto& g : guards) parts.push_back(guard_expr(g, ival, olits));
        Expr delta = e_or(std::move(parts));
        if (delta->kind == ExprNode::Kind::False) continue;
        std::vector<int> base{-vt.reach_mon(s, pair.first)};
        push_negated(delta, base, vt, w);
        for (int s2 = 0; s2 < b; ++s2) {
          std::vector<int> clause = base;
          clause.push_back(-vt.trans(s, iv, s2));
          clause.push_back(vt.reach_mon(s2, pair.second));
          w.add_hard(std::move(clause));
        }
      }
      // No reachable node may fire an edge into the sink; the successor
      // machine state is irrelevant, so trans literals are not needed.
      for (const auto& [q, guards] : to_sink) {
        std::vector<Expr> parts;
        for (const auto& g : guards) parts.push_back(guard_expr(g, ival, olits));
        Expr bad = e_or(std::move(parts));
        if (bad->kind == ExprNode::Kind::False) continue;
        std::vector<int> clause{-vt.reach_mon(s, q)};
        if (bad->kind == ExprNode::Kind::True) {
          w.add_hard(std::move(clause));
          continue;
        }
        push_negated(bad, clause, vt, w);
        w.add_hard(std::move(clause));
      }
    }
}

void encode_soft_default(int j, const RelaxedAutomaton& bfg, const SymbolicAutomaton& gf_ucw,
                         int b, const std::vector<std::string>& inputs,
                         const std::vector<std::string>& outputs, long long w_g, long long w_fg,
                         long long w_gf, VarTable& vt, WcnfInstance& w) {
  AnnotationAccess fg{
      [&vt, j](int s, int q) { return vt.reach_fg(j, s, q); },
      [&vt, j](int s, int q, int bit) { return vt.bound_fg(j, s, q, bit); },
      annotation_width_fg(b),
  };
  encode_fg_annotation(bfg, b, inputs, outputs, fg, vt, w);

  int rejecting = static_cast<int>(std::count(gf_ucw.marked.begin(), gf_ucw.marked.end(), true));
  AnnotationAccess gf{
      [&vt, j](int s, int q) { return vt.reach_gf(j, s, q); },
      [&vt, j](int s, int q, int bit) { return vt.bound_gf(j, s, q, bit); },
      annotation_width_cobuchi(b, rejecting),
  };
  encode_cobuchi_annotation(gf_ucw, b, inputs, outputs, gf, vt, w);

  int fg_init = vt.reach_fg(j, 0, bfg.base.initial);
  int gf_init = vt.reach_gf(j, 0, gf_ucw.initial);

  // G level: indicator with one-sided defining clauses. The initial
  // annotation value is pinned to the largest representable value, so a Rej
  // edge (strict increase) can never be taken anywhere reachable.
  int g = vt.soft_ind(j, 1);
  w.add_hard({-g, fg_init});
  for (int i = 0; i < fg.width; ++i)
    w.add_hard({-g, vt.bound_fg(j, 0, bfg.base.initial, i)});
  w.add_soft(w_g, {g});
  w.add_soft(w_fg, {fg_init});
  w.add_soft(w_gf, {fg_init, gf_init});
}

void encode_soft_general(int j, const std::vector<SymbolicAutomaton>& chain_ucw, int b,
                         const std::vector<std::string>& inputs,
                         const std::vector<std::string>& outputs,
                         const std::vector<long long>& weights, VarTable& vt, WcnfInstance& w) {
  int m = static_cast<int>(chain_ucw.size());
  if (static_cast<int>(weights.size()) != m)
    throw std::runtime_error("weight count does not match chain length");
  for (int l = 1; l <= m; ++l) {
    const auto& a = chain_ucw[l - 1];
    int rejecting = static_cast<int>(std::count(a.marked.begin(), a.marked.end(), true));
    AnnotationAccess av{
        [&vt, j, l](int s, int q) { return vt.reach_level(j, l, s, q); },
        [&vt, j, l](int s, int q, int bit) { return vt.bound_level(j, l, s, q, bit); },
        annotation_width_cobuchi(b, rejecting),
    };
    encode_cobuchi_annotation(a, b, inputs, outputs, av, vt, w);
  }
  for (int k = 1; k <= m; ++k) {
    std::vector<int> clause;
    for (int l = 1; l <= k; ++l) clause.push_back(vt.reach_level(j, l, 0, chain_ucw[l - 1].initial));
    w.add_soft(weights[k - 1], std::move(clause));
  }
}

// ----------------------------------------------------------------- weights

std::vector<std::vector<long long>> scheme_weights(ltl::WeightScheme scheme, int n, int m,
                                                   const std::vector<std::vector<long long>>& user) {
  std::vector<std::vector<long long>> w(n, std::vector<long long>(m, 1));
  switch (scheme) {
    case ltl::WeightScheme::Default:
      if (m != 3) throw std::runtime_error("default weight scheme needs a 3-level chain");
      for (int j = 0; j < n; ++j) w[j] = {1, n, static_cast<long long>(n) * n};
      return w;
    case ltl::WeightScheme::General:
      for (int j = 0; j < n; ++j)
        for (int k = 1; k <= m; ++k) {
          long long v = 1;
          for (int i = 1; i < k; ++i) v *= n;
          w[j][k - 1] = v;
        }
      return w;
    case ltl::WeightScheme::PriorityOrdered:
      // w_{j,k} = 1 when j = n or k < m; otherwise 1 + total weight of all
      // lower-priority specs. Spec 1 has the highest priority.
      for (int j = n; j >= 1; --j)
        for (int k = 1; k <= m; ++k) {
          if (j == n || k < m) {
            w[j - 1][k - 1] = 1;
          } else {
            long long sum = 0;
            for (int j2 = j + 1; j2 <= n; ++j2)
              for (int k2 = 1; k2 <= m; ++k2) sum += w[j2 - 1][k2 - 1];
            w[j - 1][k - 1] = sum + 1;
          }
        }
      return w;
    case ltl::WeightScheme::PriorityStrict: {
      // Every weight strictly exceeds the sum of all lower-priority weights;
      // priority descends with j and, within a spec, with decreasing k.
      long long total = 0;
      for (int j = n; j >= 1; --j)
        for (int k = 1; k <= m; ++k) {
          w[j - 1][k - 1] = total + 1;
          total += w[j - 1][k - 1];
        }
      return w;
    }
    case ltl::WeightScheme::User:
      if (static_cast<int>(user.size()) != n)
        throw std::runtime_error("user weights missing for some soft specification");
      for (int j = 0; j < n; ++j) {
        if (static_cast<int>(user[j].size()) != m)
          throw std::runtime_error("user weight count does not match chain length");
        for (long long v : user[j])
          if (v < 1) throw std::runtime_error("user weights must be positive");
        w[j] = user[j];
      }
      return w;
  }
  throw std::logic_error("bad weight scheme");
}

// ----------------------------------------------------------- full problem

namespace {

bool has_default_chain(const ltl::SoftSpec& s) {
  if (s.formula->op != ltl::Op::Globally || !ltl::is_syntactically_safe(s.formula)) return false;
  if (s.relax_chain.size() != 3) return false;
  auto def = ltl::relax_vector(s.formula);
  for (int i = 0; i < 3; ++i)
    if (!ltl::equal(s.relax_chain[i], def[i])) return false;
  return true;
}

}  // namespace

ProblemAutomata build_problem_automata(const ltl::SpecProblem& p) {
  p.validate();
  std::vector<std::string> props = p.inputs;
  props.insert(props.end(), p.outputs.begin(), p.outputs.end());
  ProblemAutomata out;
  std::vector<ltl::Formula> safe_parts, live_parts;
  std::vector<ltl::Formula> todo{p.hard};
  while (!todo.empty()) {
    ltl::Formula f = todo.back();
    todo.pop_back();
    if (f->op == ltl::Op::And) {
      todo.push_back(f->lhs);
      todo.push_back(f->rhs);
    } else {
      (ltl::is_syntactically_safe(f) ? safe_parts : live_parts).push_back(f);
    }
  }
  if (!safe_parts.empty()) {
    out.has_hard_safety = true;
    out.hard_safety = automata::safety_monitor(ltl::f_and_all(safe_parts), props);
  }
  if (!live_parts.empty()) {
    out.has_hard_ucw = true;
    out.hard_ucw = automata::ucw_for(ltl::f_and_all(live_parts), props);
  }
  for (const auto& s : p.soft) {
    SoftAutomata sa;
    if (p.scheme == ltl::WeightScheme::Default && has_default_chain(s)) {
      sa.default_shape = true;
      sa.bfg = automata::relax_fg(automata::build_b_gpsi(s.formula->lhs, props));
      sa.gf_ucw = automata::ucw_for(s.relax_chain[2], props);
    } else {
      for (const auto& level : s.relax_chain) sa.chain.push_back(automata::ucw_for(level, props));
    }
    out.soft.push_back(std::move(sa));
  }
  return out;
}

EncodedProblem encode_problem(const ltl::SpecProblem& p, const ProblemAutomata& aut, int b) {
  EncodedProblem e;
  e.bound = b;
  VarTable& vt = e.vars;
  WcnfInstance& w = e.wcnf;

  encode_input_enabled(b, static_cast<int>(p.inputs.size()), vt, w);
  encode_state_order(b, static_cast<int>(p.inputs.size()), vt, w);
  // Allocate the output variables up front so extraction never misses one.
  for (int s = 0; s < b; ++s)
    for (int iv = 0; iv < (1 << p.inputs.size()); ++iv)
      for (size_t o = 0; o < p.outputs.size(); ++o) vt.out(static_cast<int>(o), s, iv);

  // Everything interned so far describes the machine itself (transitions,
  // outputs, state order); deciding those first lets the annotation layers
  // follow largely by propagation.
  for (int v = 1; v <= vt.num_vars(); ++v) w.branch_priority.push_back(v);

  if (aut.has_hard_safety) encode_hard_safety(aut.hard_safety, b, p.inputs, p.outputs, vt, w);
  if (aut.has_hard_ucw) encode_hard_annotation(aut.hard_ucw, b, p.inputs, p.outputs, vt, w);

  int n = static_cast<int>(p.soft.size());
  if (n > 0) {
    std::vector<std::vector<long long>> weights;
    switch (p.scheme) {
      case ltl::WeightScheme::General:
        for (const auto& s : p.soft)
          weights.push_back(scheme_weights(p.scheme, n,
                                           static_cast<int>(s.relax_chain.size()))[0]);
        break;
      case ltl::WeightScheme::User:
        for (const auto& s : p.soft) {
          if (s.user_weights.size() != s.relax_chain.size())
            throw std::runtime_error("user weight count does not match chain length");
          for (long long v : s.user_weights)
            if (v < 1) throw std::runtime_error("user weights must be positive");
          weights.push_back(s.user_weights);
        }
        break;
      default: {
        size_t m = p.soft[0].relax_chain.size();
        for (const auto& s : p.soft)
          if (s.relax_chain.size() != m)
            throw std::runtime_error("this weight scheme needs equal-length relaxation chains");
        weights = scheme_weights(p.scheme, n, static_cast<int>(m));
      }
    }
    for (int j = 1; j <= n; ++j) {
      const auto& sa = aut.soft[j - 1];
      if (sa.default_shape)
        encode_soft_default(j, sa.bfg, sa.gf_ucw, b, p.inputs, p.outputs, weights[j - 1][0],
                            weights[j - 1][1], weights[j - 1][2], vt, w);
      else
        encode_soft_general(j, sa.chain, b, p.inputs, p.outputs, weights[j - 1], vt, w);
    }
  }
  w.num_vars = vt.num_vars();
  return e;
}

ts::TransitionSystem extract_system(const ltl::SpecProblem& p, const EncodedProblem& e,
                                    const std::vector<bool>& model) {
  ts::TransitionSystem t;
  t.inputs = p.inputs;
  t.outputs = p.outputs;
  t.num_states = e.bound;
  t.initial = 0;
  auto truth = [&](const std::string& name) {
    auto id = e.vars.find(name);
    if (!id || *id >= static_cast<int>(model.size()))
      throw std::runtime_error("model does not cover variable " + name);
    return model[*id];
  };
  t.tr.assign(e.bound, std::vector<ts::TransitionSystem::Step>(t.num_input_valuations()));
  for (int s = 0; s < e.bound; ++s)
    for (int iv = 0; iv < t.num_input_valuations(); ++iv) {
      int succ = -1;
      for (int s2 = 0; s2 < e.bound && succ < 0; ++s2)
        if (truth(name_trans(s, iv, s2))) succ = s2;
      if (succ < 0) throw std::runtime_error("model violates input-enabledness");
      std::uint32_t out = 0;
      for (size_t o = 0; o < p.outputs.size(); ++o)
        if (truth(name_out(static_cast<int>(o), s, iv))) out |= 1u << o;
      t.tr[s][iv] = {succ, out};
    }
  t.validate();
  return t;
}

}  // namespace maxreal::enc
