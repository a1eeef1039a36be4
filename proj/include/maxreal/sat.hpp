#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

namespace maxreal::sat {

enum class Result { Sat, Unsat, Unknown };

/// CDCL SAT solver: two-watched-literal propagation, first-UIP clause
/// learning, VSIDS branching with deterministic tie-breaking, phase saving,
/// Luby restarts and activity-based learned-clause deletion. Clauses use
/// DIMACS literals (nonzero ints, negative = negated).
class Solver {
 public:
  explicit Solver(int num_vars = 0);

  int new_var();  // returns the new variable's (positive) index
  int num_vars() const { return static_cast<int>(activity_.size()); }

  /// Adds a clause; literals beyond the current variable count grow the
  /// solver. An empty clause makes the instance permanently unsat.
  void add_clause(std::vector<int> lits);

  /// Solves under the given assumption literals. Unsat means unsat under
  /// the assumptions (with no assumptions: unconditionally unsat).
  Result solve(const std::vector<int>& assumptions = {}, double timeout_s = 0);

  /// Marks variables (1-based) as preferred decision variables: they are
  /// branched on before any other variable.
  void set_priority(const std::vector<int>& vars);

  /// Model after Sat: model()[v] for v in [1, num_vars()].
  const std::vector<bool>& model() const { return model_; }

  std::uint64_t conflicts() const { return conflicts_; }

 private:
  struct Clause {
    std::vector<int> lits;  // encoded literals
    bool learned = false;
    double activity = 0;
  };

  // encoded literal: 2*var + sign, var 0-based
  static int enc(int dimacs) {
    int v = dimacs > 0 ? dimacs : -dimacs;
    return 2 * (v - 1) + (dimacs < 0 ? 1 : 0);
  }
  static int neg(int lit) { return lit ^ 1; }
  static int var(int lit) { return lit >> 1; }

  void ensure_var(int v);
  bool enqueue(int lit, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int confl, std::vector<int>& learned, int& backtrack_level);
  void backtrack(int level);
  int pick_branch();
  void bump_var(int v);
  void bump_clause(int ci);
  void reduce_learned();
  bool locked(int ci) const;

  // Indexed binary max-heap over variable activities (no stale entries).
  // Priority variables sort above all others, so they are decided first.
  bool heap_before(int a, int b) const {
    if (priority_[a] != priority_[b]) return priority_[a];
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_sift_up(int i);
  void heap_sift_down(int i);
  void heap_insert(int v);
  int heap_pop();  // -1 when empty
  int level_of(int lit) const { return level_[var(lit)]; }
  bool value_true(int lit) const { return assigns_[var(lit)] == (lit & 1 ? -1 : 1); }
  bool value_false(int lit) const { return assigns_[var(lit)] == (lit & 1 ? 1 : -1); }
  bool unassigned(int lit) const { return assigns_[var(lit)] == 0; }

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // per encoded literal: clause indices
  std::vector<signed char> assigns_;       // per var: 0 unassigned, 1 true, -1 false
  std::vector<int> level_;
  std::vector<int> reason_;  // clause index or -1
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  std::vector<char> priority_;  // preferred decision variables
  std::vector<int> heap_;      // heap of variable indices
  std::vector<int> heap_pos_;  // var -> index in heap_, or -1
  std::vector<bool> phase_;
  double var_inc_ = 1.0, clause_inc_ = 1.0;
  std::vector<char> seen_;   // scratch buffer for analyze()
  std::vector<int> freed_;   // vars unassigned since the last decision
  bool ok_ = true;

  std::vector<bool> model_;
  std::uint64_t conflicts_ = 0;
  int first_learned_ = 0;  // clauses_ index where learned clauses may start
};

}  // namespace maxreal::sat
