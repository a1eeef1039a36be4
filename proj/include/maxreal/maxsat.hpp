#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "maxreal/encoding.hpp"

namespace maxreal::msat {

enum class Status { Optimum, HardUnsat, Unknown };

struct MaxSatOutcome {
  Status status = Status::Unknown;
  std::vector<bool> model;  // indexed by variable, [1, num_vars]; Optimum only
  long long cost = 0;       // total weight of falsified soft clauses
  long long satisfied_weight = 0;
};

struct SolverCrash : std::runtime_error {
  explicit SolverCrash(const std::string& msg) : std::runtime_error(msg) {}
};
struct OutputParseError : std::runtime_error {
  explicit OutputParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Weight of soft clauses falsified by a model.
long long eval_cost(const enc::WcnfInstance& w, const std::vector<bool>& model);

/// Exact optimum with the built-in CDCL solver: per-clause relaxation
/// literals, a generalized totalizer over their weights, and binary search
/// on the falsified weight. timeout_s = 0 means no limit.
MaxSatOutcome solve_builtin(const enc::WcnfInstance& w, double timeout_s = 0);

/// Runs `command <wcnf-path>` and parses MaxSAT-evaluation style output
/// (s / o / v lines; v lines with spaced literals or contiguous 0/1).
MaxSatOutcome solve_external(const enc::WcnfInstance& w, const std::string& command,
                             double timeout_s = 0);

/// Output parsing, exposed for tests.
MaxSatOutcome parse_solver_output(const std::string& text, const enc::WcnfInstance& w);

}  // namespace maxreal::msat
