#pragma once

#include <vector>

#include "maxreal/ltl.hpp"

namespace maxreal::bench {

/// Museum tour guide robot: one input (occupied), eight location outputs,
/// hard tour rules, three soft avoidance rules with default chains.
ltl::SpecProblem gen_robot();

/// Power distribution network parameters. Loads are numbered with the
/// critical ones first, then non-critical, then initializing.
struct PowerParams {
  int supplies = 0;
  int loads = 0;
  int capacity = 1;  // uniform per supply
  int critical = 0;
  int non_critical = 0;
  int initializing = 0;
  int max_faults = 1;  // simultaneously faulty supplies
  bool sparse = false; // sparse: load l connects to l mod P and (l+1) mod P
  bool switching_restricted = false;

  std::vector<int> suppliers(int l) const;
  std::vector<int> consumers(int p) const;
  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

ltl::SpecProblem gen_power(const PowerParams& params);

/// The twelve benchmark parameter rows, 1-based id.
PowerParams power_instance(int id);

}  // namespace maxreal::bench
