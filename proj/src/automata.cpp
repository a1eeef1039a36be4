#include "maxreal/automata.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace maxreal::automata {

using ltl::Formula;
using ltl::FormulaSet;
using ltl::Op;

std::vector<std::vector<int>> SymbolicAutomaton::edges_from() const {
  std::vector<std::vector<int>> out(num_states);
  for (size_t i = 0; i < edges.size(); ++i) out[edges[i].src].push_back(static_cast<int>(i));
  return out;
}

bool eval_prop(const Formula& f, const std::set<std::string>& valuation) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return valuation.count(f->atom) > 0;
    case Op::Not: return !eval_prop(f->lhs, valuation);
    case Op::And: return eval_prop(f->lhs, valuation) && eval_prop(f->rhs, valuation);
    case Op::Or: return eval_prop(f->lhs, valuation) || eval_prop(f->rhs, valuation);
    case Op::Implies: return !eval_prop(f->lhs, valuation) || eval_prop(f->rhs, valuation);
    default: throw std::logic_error("temporal operator in propositional guard");
  }
}

Formula specialize(const Formula& f, const std::map<std::string, bool>& fixed) {
  switch (f->op) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom: {
      auto it = fixed.find(f->atom);
      if (it == fixed.end()) return f;
      return it->second ? ltl::f_true() : ltl::f_false();
    }
    case Op::Not: {
      Formula a = specialize(f->lhs, fixed);
      if (a->op == Op::True) return ltl::f_false();
      if (a->op == Op::False) return ltl::f_true();
      return ltl::f_not(a);
    }
    case Op::And: {
      Formula a = specialize(f->lhs, fixed), b = specialize(f->rhs, fixed);
      if (a->op == Op::False || b->op == Op::False) return ltl::f_false();
      if (a->op == Op::True) return b;
      if (b->op == Op::True) return a;
      return ltl::f_and(a, b);
    }
    case Op::Or: {
      Formula a = specialize(f->lhs, fixed), b = specialize(f->rhs, fixed);
      if (a->op == Op::True || b->op == Op::True) return ltl::f_true();
      if (a->op == Op::False) return b;
      if (b->op == Op::False) return a;
      return ltl::f_or(a, b);
    }
    case Op::Implies: {
      Formula a = specialize(f->lhs, fixed), b = specialize(f->rhs, fixed);
      if (a->op == Op::False || b->op == Op::True) return ltl::f_true();
      if (a->op == Op::True) return b;
      if (b->op == Op::False) {
        if (a->op == Op::Not) return a->lhs;
        return ltl::f_not(a);
      }
      return ltl::f_implies(a, b);
    }
    default: throw std::logic_error("temporal operator in propositional guard");
  }
}

namespace {

// One way of discharging the obligations of a tableau state for one step:
// literal constraints on the current letter, obligations deferred to the
// next step, and the until-type obligations that were deferred unfulfilled.
struct Branch {
  std::map<std::string, bool> literals;
  FormulaSet next;
  FormulaSet delayed;
};

void expand(std::vector<Formula>& pending, Branch cur, std::vector<Branch>& out) {
  if (pending.empty()) {
    out.push_back(std::move(cur));
    return;
  }
  Formula g = pending.back();
  pending.pop_back();
  switch (g->op) {
    case Op::True: expand(pending, std::move(cur), out); break;
    case Op::False: break;
    case Op::Atom:
    case Op::Not: {
      bool positive = g->op == Op::Atom;
      const std::string& name = positive ? g->atom : g->lhs->atom;
      auto it = cur.literals.find(name);
      if (it == cur.literals.end()) {
        cur.literals[name] = positive;
        expand(pending, std::move(cur), out);
      } else if (it->second == positive) {
        expand(pending, std::move(cur), out);
      }
      // contradictory literal: drop this branch
      break;
    }
    case Op::And:
      pending.push_back(g->lhs);
      pending.push_back(g->rhs);
      expand(pending, std::move(cur), out);
      pending.pop_back();
      pending.pop_back();
      break;
    case Op::Or: {
      for (const Formula& child : {g->lhs, g->rhs}) {
        pending.push_back(child);
        expand(pending, cur, out);
        pending.pop_back();
      }
      break;
    }
    case Op::Next: {
      Branch b = cur;
      b.next.insert(g->lhs);
      expand(pending, std::move(b), out);
      break;
    }
    case Op::Globally: {
      Branch b = cur;
      b.next.insert(g);
      pending.push_back(g->lhs);
      expand(pending, std::move(b), out);
      pending.pop_back();
      break;
    }
    case Op::Finally: {
      // fulfilled now
      pending.push_back(g->lhs);
      expand(pending, cur, out);
      pending.pop_back();
      // or deferred
      Branch b = std::move(cur);
      b.next.insert(g);
      b.delayed.insert(g);
      expand(pending, std::move(b), out);
      break;
    }
    case Op::Until: {
      pending.push_back(g->rhs);
      expand(pending, cur, out);
      pending.pop_back();
      Branch b = std::move(cur);
      b.next.insert(g);
      b.delayed.insert(g);
      pending.push_back(g->lhs);
      expand(pending, std::move(b), out);
      pending.pop_back();
      break;
    }
    case Op::Release: {
      // a R b: either a & b now, or b now and defer
      {
        Branch b = cur;
        pending.push_back(g->lhs);
        pending.push_back(g->rhs);
        expand(pending, std::move(b), out);
        pending.pop_back();
        pending.pop_back();
      }
      Branch b = std::move(cur);
      b.next.insert(g);
      pending.push_back(g->rhs);
      expand(pending, std::move(b), out);
      pending.pop_back();
      break;
    }
    case Op::Implies: throw std::logic_error("tableau input not in NNF");
  }
  pending.push_back(g);
}

std::vector<Branch> expand_state(const FormulaSet& state) {
  std::vector<Formula> pending(state.begin(), state.end());
  std::vector<Branch> out;
  expand(pending, Branch{}, out);
  return out;
}

Formula literals_to_guard(const std::map<std::string, bool>& lits) {
  std::vector<Formula> parts;
  for (const auto& [name, pos] : lits) {
    Formula a = ltl::f_atom(name);
    parts.push_back(pos ? a : ltl::f_not(a));
  }
  return ltl::f_and_all(parts);
}

// Obligation-set automaton shared by the NBA and NFA constructions.
struct Tableau {
  std::vector<FormulaSet> states;
  std::map<FormulaSet, int, bool (*)(const FormulaSet&, const FormulaSet&)> index;
  struct Tr {
    int src;
    Formula guard;
    int dst;
    FormulaSet delayed;
  };
  std::vector<Tr> transitions;

  static bool set_less(const FormulaSet& a, const FormulaSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Formula& x, const Formula& y) {
                                          return ltl::compare(x, y) < 0;
                                        });
  }

  Tableau() : index(&set_less) {}

  int intern(FormulaSet s) {
    s.erase(ltl::f_true());
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(states.size());
    if (id >= kStateCap) throw AutomatonTooLarge("tableau exceeds state cap");
    states.push_back(s);
    index.emplace(std::move(s), id);
    return id;
  }
};

Tableau build_tableau(const Formula& f) {
  Tableau t;
  std::deque<int> work;
  work.push_back(t.intern(FormulaSet{f}));
  std::set<int> done;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    if (!done.insert(q).second) continue;
    for (Branch& b : expand_state(t.states[q])) {
      int dst = t.intern(std::move(b.next));
      if (!done.count(dst)) work.push_back(dst);
      t.transitions.push_back({q, literals_to_guard(b.literals), dst, std::move(b.delayed)});
    }
  }
  return t;
}

std::vector<Formula> until_conditions(const Formula& f) {
  std::vector<Formula> conds;
  for (const auto& sub : ltl::subformulas(f))
    if (sub->op == Op::Until || sub->op == Op::Finally) conds.push_back(sub);
  return conds;
}

void prune_unreachable(SymbolicAutomaton& a) {
  std::vector<bool> seen(a.num_states, false);
  auto from = a.edges_from();
  std::deque<int> work{a.initial};
  seen[a.initial] = true;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int e : from[q])
      if (!seen[a.edges[e].dst]) {
        seen[a.edges[e].dst] = true;
        work.push_back(a.edges[e].dst);
      }
  }
  std::vector<int> remap(a.num_states, -1);
  int next = 0;
  for (int q = 0; q < a.num_states; ++q)
    if (seen[q]) remap[q] = next++;
  std::vector<Edge> edges;
  for (const Edge& e : a.edges)
    if (seen[e.src]) edges.push_back({remap[e.src], e.guard, remap[e.dst]});
  std::vector<bool> marked(next, false);
  for (int q = 0; q < a.num_states; ++q)
    if (seen[q]) marked[remap[q]] = a.marked[q];
  a.num_states = next;
  a.initial = remap[a.initial];
  a.edges = std::move(edges);
  a.marked = std::move(marked);
}

}  // namespace

SymbolicAutomaton ltl_to_nba(const Formula& f, const std::vector<std::string>& props) {
  if (!ltl::is_nnf(f)) throw std::invalid_argument("ltl_to_nba requires NNF input");
  Tableau t = build_tableau(f);
  std::vector<Formula> conds = until_conditions(f);
  int k = static_cast<int>(conds.size());

  SymbolicAutomaton a;
  a.acceptance = Acceptance::Buchi;
  a.branching = Branching::Nondeterministic;
  a.props = props;

  if (k == 0) {
    a.num_states = static_cast<int>(t.states.size());
    a.initial = 0;
    a.marked.assign(a.num_states, true);
    for (const auto& tr : t.transitions) a.edges.push_back({tr.src, tr.guard, tr.dst});
    prune_unreachable(a);
    return a;
  }

  // Degeneralize: levels 0..k; level i waits for condition i; level k is
  // accepting and behaves like level 0 when stepping.
  auto cond_index = [&](const Formula& c) {
    for (int i = 0; i < k; ++i)
      if (ltl::equal(conds[i], c)) return i;
    throw std::logic_error("unknown acceptance condition");
  };
  auto id_of = [&](int q, int level) { return q * (k + 1) + level; };
  a.num_states = static_cast<int>(t.states.size()) * (k + 1);
  if (a.num_states > kStateCap) throw AutomatonTooLarge("degeneralized NBA exceeds state cap");
  a.initial = id_of(0, 0);
  a.marked.assign(a.num_states, false);
  for (size_t q = 0; q < t.states.size(); ++q) a.marked[id_of(static_cast<int>(q), k)] = true;
  for (const auto& tr : t.transitions) {
    std::vector<bool> sat(k, true);
    for (const auto& d : tr.delayed) sat[cond_index(d)] = false;
    for (int level = 0; level <= k; ++level) {
      int j = level == k ? 0 : level;
      while (j < k && sat[j]) ++j;
      a.edges.push_back({id_of(tr.src, level), tr.guard, id_of(tr.dst, j)});
    }
  }
  prune_unreachable(a);
  return a;
}

SymbolicAutomaton ucw_for(const Formula& f, const std::vector<std::string>& props) {
  SymbolicAutomaton a = ltl_to_nba(ltl::to_nnf(ltl::f_not(f)), props);
  a.acceptance = Acceptance::CoBuchi;
  a.branching = Branching::Universal;
  return a;
}

FiniteAutomaton bad_prefix_nfa(const Formula& psi, const std::vector<std::string>& props) {
  if (!ltl::is_syntactically_safe(psi))
    throw NotSyntacticallySafe("not syntactically safe: " + ltl::to_string(psi));
  Formula neg = ltl::to_nnf(ltl::f_not(psi));
  Tableau t = build_tableau(neg);
  SymbolicAutomaton a;
  a.acceptance = Acceptance::Buchi;  // unused; finite-word semantics
  a.branching = Branching::Nondeterministic;
  a.props = props;
  a.num_states = static_cast<int>(t.states.size());
  a.initial = 0;
  a.marked.assign(a.num_states, false);
  for (size_t q = 0; q < t.states.size(); ++q)
    if (t.states[q].empty()) a.marked[q] = true;  // all obligations discharged
  for (const auto& tr : t.transitions) a.edges.push_back({tr.src, tr.guard, tr.dst});
  prune_unreachable(a);
  return {std::move(a)};
}

namespace {

// Shared wrapping of a bad-prefix NFA into a universal safety monitor:
// accepting NFA states collapse into one absorbing non-accepting sink.
// With `restart` a true self-loop is added at the initial state, turning the
// monitor for psi into the monitor for G psi.
SafetyAutomaton wrap_bad_prefix(const FiniteAutomaton& nfa, bool restart,
                                const std::vector<std::string>& props) {
  const SymbolicAutomaton& n = nfa.base;

  SafetyAutomaton out;
  out.base.acceptance = Acceptance::Buchi;
  out.base.branching = Branching::Universal;
  out.base.props = props;

  if (n.marked[n.initial]) {
    // The empty word is already a bad prefix (psi equivalent to false):
    // the automaton is a single rejecting sink.
    out.base.num_states = 1;
    out.base.initial = 0;
    out.base.marked = {false};
    out.base.edges.push_back({0, ltl::f_true(), 0});
    out.sink = 0;
    return out;
  }

  // Non-accepting NFA states keep their role; accepting targets become rej.
  std::vector<int> remap(n.num_states, -1);
  int next = 0;
  for (int q = 0; q < n.num_states; ++q)
    if (!n.marked[q]) remap[q] = next++;
  int rej = next;
  out.base.num_states = next + 1;
  out.base.initial = remap[n.initial];
  for (const Edge& e : n.edges) {
    if (n.marked[e.src]) continue;
    out.base.edges.push_back({remap[e.src], e.guard, n.marked[e.dst] ? rej : remap[e.dst]});
  }
  out.base.edges.push_back({rej, ltl::f_true(), rej});

  // Unconditional self-loop at the initial state: a fresh check of psi is
  // spawned at every position, which under universal branching is exactly
  // the semantics of G psi.
  if (restart) out.base.edges.push_back({out.base.initial, ltl::f_true(), out.base.initial});

  out.base.marked.assign(out.base.num_states, true);
  out.base.marked[rej] = false;

  // Elide the sink if nothing reaches it.
  bool rej_reachable = false;
  for (const Edge& e : out.base.edges)
    if (e.dst == rej && e.src != rej) rej_reachable = true;
  if (!rej_reachable) {
    std::vector<Edge> kept;
    for (const Edge& e : out.base.edges)
      if (e.src != rej && e.dst != rej) kept.push_back(e);
    out.base.edges = std::move(kept);
    out.base.num_states = next;
    out.base.marked.assign(next, true);
    out.sink = -1;
  } else {
    out.sink = rej;
  }
  return out;
}

}  // namespace

SafetyAutomaton build_b_gpsi(const Formula& psi, const std::vector<std::string>& props) {
  return wrap_bad_prefix(bad_prefix_nfa(psi, props), true, props);
}

SafetyAutomaton safety_monitor(const Formula& f, const std::vector<std::string>& props) {
  return wrap_bad_prefix(bad_prefix_nfa(f, props), false, props);
}

RelaxedAutomaton relax_fg(const SafetyAutomaton& b) {
  RelaxedAutomaton out;
  out.base.acceptance = Acceptance::Buchi;
  out.base.branching = Branching::Universal;
  out.base.props = b.base.props;
  if (b.sink == -1) {
    out.base = b.base;
    out.base.marked.assign(out.base.num_states, true);
    return out;
  }
  if (b.sink == b.base.initial) {
    // psi is equivalent to false: every step takes a Rej edge, so no trace
    // satisfies FG psi. Keep one state with a rejecting self-loop.
    out.base.num_states = 1;
    out.base.initial = 0;
    out.base.marked = {true};
    out.rej_edges.insert(0);
    out.base.edges.push_back({0, ltl::f_true(), 0});
    return out;
  }
  std::vector<int> remap(b.base.num_states, -1);
  int next = 0;
  for (int q = 0; q < b.base.num_states; ++q)
    if (q != b.sink) remap[q] = next++;
  out.base.num_states = next;
  out.base.initial = remap[b.base.initial];
  for (const Edge& e : b.base.edges) {
    if (e.src == b.sink) continue;
    if (e.dst == b.sink) {
      out.rej_edges.insert(static_cast<int>(out.base.edges.size()));
      out.base.edges.push_back({remap[e.src], e.guard, out.base.initial});
    } else {
      out.base.edges.push_back({remap[e.src], e.guard, remap[e.dst]});
    }
  }
  out.base.marked.assign(next, true);
  return out;
}

std::string dump(const SymbolicAutomaton& a) {
  std::ostringstream os;
  os << "states: " << a.num_states << "\n";
  os << "initial: " << a.initial << "\n";
  os << "acceptance: " << (a.acceptance == Acceptance::Buchi ? "Buchi" : "coBuchi") << "\n";
  os << "branching: "
     << (a.branching == Branching::Universal ? "universal" : "nondeterministic") << "\n";
  os << "marked:";
  for (int q = 0; q < a.num_states; ++q)
    if (a.marked[q]) os << ' ' << q;
  os << "\n";
  for (const Edge& e : a.edges)
    os << "  " << e.src << " --[" << ltl::to_string(e.guard) << "]--> " << e.dst << "\n";
  return os.str();
}

}  // namespace maxreal::automata
