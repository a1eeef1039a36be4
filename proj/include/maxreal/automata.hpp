#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "maxreal/ltl.hpp"

namespace maxreal::automata {

enum class Acceptance { Buchi, CoBuchi };
enum class Branching { Nondeterministic, Universal };

struct Edge {
  int src;
  ltl::Formula guard;  // propositional formula over the declared propositions
  int dst;
};

/// Omega-automaton with symbolic guards. `marked` is the F set: accepting
/// states for Buchi acceptance, rejecting states for co-Buchi.
struct SymbolicAutomaton {
  int num_states = 0;
  int initial = 0;
  std::vector<Edge> edges;
  Acceptance acceptance = Acceptance::Buchi;
  Branching branching = Branching::Nondeterministic;
  std::vector<bool> marked;
  std::vector<std::string> props;

  std::vector<std::vector<int>> edges_from() const;  // edge indices per state
};

/// Finite-word NFA; `base.marked` are the accepting states, acceptance is
/// read at the end of the input.
struct FiniteAutomaton {
  SymbolicAutomaton base;
};

/// Universal Buchi automaton for G psi with a unique non-accepting sink.
/// sink == -1 when the sink is unreachable and has been elided.
struct SafetyAutomaton {
  SymbolicAutomaton base;
  int sink = -1;
};

/// Relax_FG result: universal Buchi automaton, all states accepting;
/// rej_edges are indices into base.edges of the redirected sink edges.
struct RelaxedAutomaton {
  SymbolicAutomaton base;
  std::set<int> rej_edges;
};

struct NotSyntacticallySafe : std::runtime_error {
  explicit NotSyntacticallySafe(const std::string& msg) : std::runtime_error(msg) {}
};

struct AutomatonTooLarge : std::runtime_error {
  explicit AutomatonTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kStateCap = 5000;

/// Evaluates a propositional formula under a valuation (true propositions).
bool eval_prop(const ltl::Formula& f, const std::set<std::string>& valuation);

/// Partially evaluates f by fixing the propositions in `fixed`; atoms not in
/// `fixed` are left symbolic. Simplifies constants away.
ltl::Formula specialize(const ltl::Formula& f, const std::map<std::string, bool>& fixed);

/// Nondeterministic Buchi automaton with L(result) = L(f); f must be in NNF.
SymbolicAutomaton ltl_to_nba(const ltl::Formula& f, const std::vector<std::string>& props);

/// Universal co-Buchi automaton accepting exactly the transition systems
/// satisfying f (built from the NBA for !f).
SymbolicAutomaton ucw_for(const ltl::Formula& f, const std::vector<std::string>& props);

/// NFA accepting only bad prefixes of psi, and at least one bad prefix of
/// every word violating psi. psi must be syntactically safe.
FiniteAutomaton bad_prefix_nfa(const ltl::Formula& psi, const std::vector<std::string>& props);

/// Universal Buchi automaton for G psi with non-accepting sink rej.
SafetyAutomaton build_b_gpsi(const ltl::Formula& psi, const std::vector<std::string>& props);

/// Universal monitor for a syntactically safe formula f: the bad-prefix NFA
/// run universally, with all bad-prefix acceptors merged into one absorbing
/// non-accepting sink. A word satisfies f iff no run reaches the sink.
SafetyAutomaton safety_monitor(const ltl::Formula& f, const std::vector<std::string>& props);

/// Redirects the sink-bound edges of B to its initial state.
RelaxedAutomaton relax_fg(const SafetyAutomaton& b);

/// Plain-text listing of states, guards and the marked set, for debugging.
std::string dump(const SymbolicAutomaton& a);

}  // namespace maxreal::automata
