#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maxreal/automata.hpp"
#include "maxreal/ltl.hpp"

namespace maxreal::ts {

/// Finite Mealy-style machine: total transition map (state, input
/// valuation) -> (successor, output valuation). Valuations are bitmasks
/// over the declared proposition lists (bit i = i-th proposition true).
struct TransitionSystem {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  int num_states = 0;
  int initial = 0;

  struct Step {
    int succ = 0;
    std::uint32_t out = 0;
  };
  // tr[s][iv] for every state s and input valuation index iv in [0, 2^|I|).
  std::vector<std::vector<Step>> tr;

  int num_input_valuations() const { return 1 << inputs.size(); }
  /// Letter (set of true propositions) for input valuation iv in state s.
  std::set<std::string> letter(int s, int iv) const;
  std::set<std::string> letter_of(std::uint32_t iv, std::uint32_t ov) const;
  void validate() const;
};

struct RunGraphEdge {
  int src;          // node index
  int input;        // input valuation index
  int dst;          // node index
  int autom_edge;   // index into the automaton's edge list
  bool dst_marked;  // destination automaton state is in F
  bool rej;         // instance of a Rej edge (RelaxedAutomaton products only)
};

/// Product of a universal automaton and a transition system, restricted to
/// the nodes reachable from (s0, q0).
struct RunGraph {
  std::vector<std::pair<int, int>> nodes;  // (system state, automaton state)
  std::vector<RunGraphEdge> edges;
  int initial = 0;

  std::vector<std::vector<int>> edges_from() const;
};

RunGraph run_graph(const automata::SymbolicAutomaton& a, const TransitionSystem& t);
RunGraph run_graph(const automata::RelaxedAutomaton& a, const TransitionSystem& t);

/// Lasso-shaped counterexample trace u . v^omega (letters as proposition sets).
struct TraceWitness {
  std::vector<std::set<std::string>> prefix;
  std::vector<std::set<std::string>> loop;
};

/// True iff every trace of t satisfies f. On failure a violating lasso is
/// available through model_check_witness.
bool model_check(const TransitionSystem& t, const ltl::Formula& f);
std::optional<TraceWitness> model_check_witness(const TransitionSystem& t, const ltl::Formula& f);

/// Lexicographic value vector of the soft specifications (weakest column
/// first, per-column counts of satisfied relaxation levels).
std::vector<int> compute_value(const TransitionSystem& t, const std::vector<ltl::SoftSpec>& soft);

/// Least fg-valid annotation (number of Rej edges on a longest path from the
/// initial node), or nullopt if a reachable cycle passes through a Rej edge.
struct FgAnnotation {
  std::map<std::pair<int, int>, int> value;  // reachable nodes only
  int max_value = 0;                         // 0 iff no Rej edge is reachable
};
std::optional<FgAnnotation> compute_fg_annotation(const automata::RelaxedAutomaton& a,
                                                  const TransitionSystem& t);

/// True iff the run graph of a universal co-Buchi automaton on t is
/// accepting (no reachable cycle through a rejecting state).
bool run_graph_accepting(const automata::SymbolicAutomaton& ucw, const TransitionSystem& t);

std::string to_dot(const TransitionSystem& t);
TransitionSystem from_dot(const std::string& text, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs);

std::string format_witness(const TraceWitness& w);

}  // namespace maxreal::ts
