#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxreal/encoding.hpp"
#include "maxreal/ltl.hpp"
#include "maxreal/maxsat.hpp"
#include "maxreal/transition_system.hpp"

namespace maxreal::synth {

enum class Backend { Builtin, External };
enum class BoundSchedule { Step1, Step2, Doubling };

struct SynthesisOptions {
  int min_bound = 2;
  int max_bound = 8;
  BoundSchedule schedule = BoundSchedule::Step2;
  std::optional<long long> threshold;  // stop once satisfied weight reaches this
  double timeout_s = 0;                // wall clock over the whole loop; 0 = none
  Backend backend = Backend::Builtin;
  std::string solver_cmd;              // Backend::External: `cmd <wcnf-path>`
};

struct BoundRecord {
  int bound = 0;
  msat::Status status = msat::Status::Unknown;
  long long satisfied_weight = 0;
  long long weight_bound = 0;
  double encode_ms = 0;
  double solve_ms = 0;
};

struct SynthesisResult {
  std::vector<BoundRecord> records;
  std::optional<ts::TransitionSystem> implementation;
  int bound = 0;                       // bound of the reported implementation
  long long satisfied_weight = 0;
  long long weight_bound = 0;
  std::vector<int> value;              // certified, weakest column first
  std::vector<ltl::Formula> achieved;  // per spec: strongest satisfied level, or true
};

/// A solver model decoded to a system that fails independent model checking,
/// or claims a value the system does not have. Always indicates a bug.
struct CertificationFailure : std::runtime_error {
  explicit CertificationFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterates implementation bounds per `opts`: encode, solve, extract,
/// certify. Hard-UNSAT bounds are recorded and skipped; a solver timeout
/// stops the loop. The result carries the best certified implementation.
SynthesisResult synthesize_max(const ltl::SpecProblem& p, const SynthesisOptions& opts);

/// Per spec, the strongest relaxation level t satisfies (true if none).
std::vector<ltl::Formula> achieved_relaxations(const ts::TransitionSystem& t,
                                               const std::vector<ltl::SoftSpec>& soft);

/// Implementation-size bound sufficient for the maximal value: ((2^(c +
/// ceil(log2 c)))!)^2 with c the largest subformula count over relaxation
/// choices. Documentation-grade; exact decimal for small values, otherwise
/// an order-of-magnitude estimate.
std::string theoretical_bound(const ltl::SpecProblem& p);

/// Machine-readable report: key: value lines per bound plus a result block.
std::string run_report(const SynthesisResult& r);

}  // namespace maxreal::synth
