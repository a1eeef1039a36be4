#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maxreal/automata.hpp"
#include "maxreal/ltl.hpp"
#include "maxreal/transition_system.hpp"

namespace maxreal::enc {

/// Bijection between semantic variable names and positive DIMACS ids.
class VarTable {
 public:
  int intern(const std::string& name);
  std::optional<int> find(const std::string& name) const;
  int fresh_aux();
  int num_vars() const { return static_cast<int>(names_.size()); }

  // Name builders for the encoding's variable families. All intern.
  int trans(int s, int iv, int s2);              // tau_{s,iv,s'}
  int out(int o, int s, int iv);                 // o-th output bit in (s,iv)
  int reach_hard(int s, int q);                  // lambda^B for the hard UCW
  int bound_hard(int s, int q, int bit);         // lambda^# bit (LSB first)
  int reach_mon(int s, int q);                   // safety-monitor reachability
  int reach_fg(int j, int s, int q);             // lambda^{FG,B,j}
  int bound_fg(int j, int s, int q, int bit);    // lambda^{FG,#,j}
  int reach_gf(int j, int s, int q);             // lambda^{B,j} for GF phi_j
  int bound_gf(int j, int s, int q, int bit);    // lambda^{#,j}
  int reach_level(int j, int l, int s, int q);   // chain level annotations
  int bound_level(int j, int l, int s, int q, int bit);
  int soft_ind(int j, int k);

  /// One line per variable: `name id`.
  std::string map_text() const;

 private:
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
  int aux_count_ = 0;
};

struct SoftClause {
  long long weight;
  std::vector<int> lits;
};

struct WcnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> hard;
  std::vector<SoftClause> soft;
  std::vector<int> branch_priority;  // decide-first hint for the builtin solver

  long long total_soft_weight() const;
  long long top() const { return 1 + total_soft_weight(); }
  void add_hard(std::vector<int> lits);
  void add_soft(long long weight, std::vector<int> lits);
};

std::string to_wdimacs(const WcnfInstance& w);
WcnfInstance parse_wdimacs(const std::string& text);

struct Stats {
  int vars;
  int clauses;
  long long total_soft_weight;
};
Stats stats(const WcnfInstance& w);

/// Propositional expression over DIMACS literals, used as the intermediate
/// form between automaton guards / comparators and CNF.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;
struct ExprNode {
  enum class Kind { True, False, Lit, And, Or } kind;
  int lit = 0;  // Kind::Lit only; nonzero, possibly negative
  std::vector<Expr> args;
};

Expr e_true();
Expr e_false();
Expr e_lit(int lit);
Expr e_and(std::vector<Expr> args);
Expr e_or(std::vector<Expr> args);

/// Polarity of a Tseitin variable's occurrences: Implies emits t -> e,
/// Implied emits e -> t, Both emits both directions.
enum class Polarity { Implies, Implied, Both };

/// Returns a literal equivalent (in the requested direction) to e. Constant
/// expressions yield a constrained fresh variable.
int tseitin(const Expr& e, Polarity p, VarTable& vt, WcnfInstance& w);

/// Appends clauses for (conjunction of `antecedent` literals) -> rhs,
/// where `antecedent` is given pre-negated (clause-ready).
void emit_implication(const std::vector<int>& negated_antecedent, const Expr& rhs, VarTable& vt,
                      WcnfInstance& w);

/// Unsigned comparators over bit vectors given LSB-first literal vectors.
Expr cmp_gt(const std::vector<int>& x, const std::vector<int>& y);
Expr cmp_ge(const std::vector<int>& x, const std::vector<int>& y);
Expr cmp_eq_const(const std::vector<int>& x, unsigned value);

/// Converts a propositional guard to an Expr: input atoms are evaluated
/// under `input_val`, output atoms become the literals given by `out_lit`.
Expr guard_expr(const ltl::Formula& g, const std::map<std::string, bool>& input_val,
                const std::map<std::string, int>& out_lit);

int annotation_width_cobuchi(int b, int num_rejecting);  // ceil(log2(b*|F|+1))
int annotation_width_fg(int b);                          // ceil(log2(b+1))

void encode_input_enabled(int b, int num_inputs, VarTable& vt, WcnfInstance& w);

/// State-symmetry breaking: every machine state the solver marks reachable
/// must have a predecessor with a smaller index (BFS discovery order).
void encode_state_order(int b, int num_inputs, VarTable& vt, WcnfInstance& w);

/// Valid-annotation constraints for a universal co-Buchi automaton, using
/// the reach/bit variables supplied by `reach` and `bit` (width LSB-first).
struct AnnotationAccess {
  std::function<int(int s, int q)> reach;
  std::function<int(int s, int q, int bit)> bit;
  int width;
};

void encode_cobuchi_annotation(const automata::SymbolicAutomaton& a, int b,
                               const std::vector<std::string>& inputs,
                               const std::vector<std::string>& outputs,
                               const AnnotationAccess& av, VarTable& vt, WcnfInstance& w);

/// Same, for a Relax_FG automaton: strict comparator on Rej edges,
/// non-strict otherwise.
void encode_fg_annotation(const automata::RelaxedAutomaton& a, int b,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs, const AnnotationAccess& av,
                          VarTable& vt, WcnfInstance& w);

/// Hard-specification constraints: asserts reachability of the initial
/// node and emits the valid-annotation constraints for the hard UCW.
void encode_hard_annotation(const automata::SymbolicAutomaton& ucw, int b,
                            const std::vector<std::string>& inputs,
                            const std::vector<std::string>& outputs, VarTable& vt,
                            WcnfInstance& w);

/// Hard-specification constraints for a syntactically safe formula: pure
/// sink avoidance on the safety monitor, no annotation counters.
void encode_hard_safety(const automata::SafetyAutomaton& mon, int b,
                        const std::vector<std::string>& inputs,
                        const std::vector<std::string>& outputs, VarTable& vt, WcnfInstance& w);

/// Soft constraints for the default (G, FG, GF) chain of spec j: weights
/// (w_g, w_fg, w_gf), hard defining clauses for the G indicator included.
void encode_soft_default(int j, const automata::RelaxedAutomaton& bfg,
                         const automata::SymbolicAutomaton& gf_ucw, int b,
                         const std::vector<std::string>& inputs,
                         const std::vector<std::string>& outputs, long long w_g, long long w_fg,
                         long long w_gf, VarTable& vt, WcnfInstance& w);

/// Soft constraints for a general relaxation chain of spec j: one UCW per
/// level (strongest first), soft clause k = (level 1 or ... or level k).
void encode_soft_general(int j, const std::vector<automata::SymbolicAutomaton>& chain_ucw, int b,
                         const std::vector<std::string>& inputs,
                         const std::vector<std::string>& outputs,
                         const std::vector<long long>& weights, VarTable& vt, WcnfInstance& w);

/// Per-(spec, level) soft-clause weights for n specs with m levels each.
/// `user` is consulted only for WeightScheme::User.
std::vector<std::vector<long long>> scheme_weights(
    ltl::WeightScheme scheme, int n, int m,
    const std::vector<std::vector<long long>>& user = {});

/// Automata prepared once per problem, reused across bounds.
struct SoftAutomata {
  bool default_shape = false;                     // G psi with safe psi, 3-level chain
  automata::RelaxedAutomaton bfg;                 // default shape only
  automata::SymbolicAutomaton gf_ucw;             // default shape only
  std::vector<automata::SymbolicAutomaton> chain; // general shape: UCW per level
};

/// The hard specification is split at its top-level conjunction: the
/// syntactically safe conjuncts share a sink-avoidance monitor (no counters),
/// the rest share a UCW with co-Buchi annotations.
struct ProblemAutomata {
  bool has_hard_safety = false;
  automata::SafetyAutomaton hard_safety;
  bool has_hard_ucw = false;
  automata::SymbolicAutomaton hard_ucw;
  std::vector<SoftAutomata> soft;
};

ProblemAutomata build_problem_automata(const ltl::SpecProblem& p);

struct EncodedProblem {
  WcnfInstance wcnf;
  VarTable vars;
  int bound = 0;
};

EncodedProblem encode_problem(const ltl::SpecProblem& p, const ProblemAutomata& aut, int b);

/// Reads the transition system out of a model of the hard clauses.
ts::TransitionSystem extract_system(const ltl::SpecProblem& p, const EncodedProblem& e,
                                    const std::vector<bool>& model);

}  // namespace maxreal::enc
