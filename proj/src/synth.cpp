#include "maxreal/synth.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace maxreal::synth {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool clause_satisfied(const std::vector<int>& lits, const std::vector<bool>& model) {
  for (int l : lits) {
    int v = l > 0 ? l : -l;
    if (v < static_cast<int>(model.size()) && model[v] == (l > 0)) return true;
  }
  return false;
}

/// Strongest chain level claimed by the model for each spec: soft clauses
/// are emitted per spec in chain order, weakest-implied last, so the claim
/// is the first satisfied clause of the spec's block (0 = none).
std::vector<int> claimed_levels(const ltl::SpecProblem& p, const enc::WcnfInstance& w,
                                const std::vector<bool>& model) {
  std::vector<int> claim(p.soft.size(), 0);
  size_t base = 0;
  for (size_t j = 0; j < p.soft.size(); ++j) {
    size_t m = p.soft[j].relax_chain.size();
    for (size_t k = 1; k <= m; ++k)
      if (clause_satisfied(w.soft[base + k - 1].lits, model)) {
        claim[j] = static_cast<int>(k);
        break;
      }
    base += m;
  }
  return claim;
}

void certify(const ltl::SpecProblem& p, const enc::EncodedProblem& ep,
             const msat::MaxSatOutcome& out, const ts::TransitionSystem& t) {
  if (auto cex = ts::model_check_witness(t, p.hard))
    throw CertificationFailure("extracted system violates the hard specification on " +
                               ts::format_witness(*cex));
  auto claim = claimed_levels(p, ep.wcnf, out.model);
  for (size_t j = 0; j < p.soft.size(); ++j) {
    if (claim[j] == 0) continue;
    const auto& f = p.soft[j].relax_chain[claim[j] - 1];
    if (auto cex = ts::model_check_witness(t, f))
      throw CertificationFailure("claimed relaxation level " + ltl::to_string(f) +
                                 " of soft specification " + std::to_string(j + 1) +
                                 " fails on " + ts::format_witness(*cex));
  }
  // The optimum weight must match what the certified levels are worth.
  long long expected = 0;
  size_t base = 0;
  for (size_t j = 0; j < p.soft.size(); ++j) {
    size_t m = p.soft[j].relax_chain.size();
    size_t best = 0;
    for (size_t k = 1; k <= m; ++k)
      if (ts::model_check(t, p.soft[j].relax_chain[k - 1])) {
        best = k;
        break;
      }
    if (best > 0)
      for (size_t k = best; k <= m; ++k) expected += ep.wcnf.soft[base + k - 1].weight;
    base += m;
  }
  if (expected != out.satisfied_weight)
    throw CertificationFailure("optimum weight " + std::to_string(out.satisfied_weight) +
                               " disagrees with the model-checked value worth " +
                               std::to_string(expected));
}

int next_bound(int b, BoundSchedule s) {
  switch (s) {
    case BoundSchedule::Step1: return b + 1;
    case BoundSchedule::Step2: return b + 2;
    case BoundSchedule::Doubling: return 2 * b;
  }
  throw std::logic_error("bad bound schedule");
}

const char* status_name(msat::Status s) {
  switch (s) {
    case msat::Status::Optimum: return "optimum";
    case msat::Status::HardUnsat: return "hard-unsat";
    case msat::Status::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace

SynthesisResult synthesize_max(const ltl::SpecProblem& p, const SynthesisOptions& opts) {
  if (opts.min_bound < 1 || opts.min_bound > opts.max_bound)
    throw std::invalid_argument("need 1 <= min_bound <= max_bound");
  p.validate();
  auto aut = enc::build_problem_automata(p);

  SynthesisResult res;
  auto start = Clock::now();
  auto remaining = [&]() -> double {
    if (opts.timeout_s <= 0) return 0;
    return opts.timeout_s - std::chrono::duration<double>(Clock::now() - start).count();
  };

  for (int b = opts.min_bound; b <= opts.max_bound; b = next_bound(b, opts.schedule)) {
    double left = remaining();
    if (opts.timeout_s > 0 && left <= 0) break;

    auto t_enc = Clock::now();
    auto ep = enc::encode_problem(p, aut, b);
    double encode_ms = ms_since(t_enc);

    auto t_solve = Clock::now();
    msat::MaxSatOutcome out = opts.backend == Backend::Builtin
                                  ? msat::solve_builtin(ep.wcnf, left)
                                  : msat::solve_external(ep.wcnf, opts.solver_cmd, left);
    double solve_ms = ms_since(t_solve);

    res.records.push_back({b, out.status, out.satisfied_weight, ep.wcnf.total_soft_weight(),
                           encode_ms, solve_ms});
    if (out.status == msat::Status::HardUnsat) continue;
    if (out.status == msat::Status::Unknown) break;

    auto t = enc::extract_system(p, ep, out.model);
    certify(p, ep, out, t);
    if (!res.implementation || out.satisfied_weight > res.satisfied_weight) {
      res.implementation = t;
      res.bound = b;
      res.satisfied_weight = out.satisfied_weight;
      res.weight_bound = ep.wcnf.total_soft_weight();
      res.value = ts::compute_value(t, p.soft);
      res.achieved = achieved_relaxations(t, p.soft);
    }
    if (opts.threshold && out.satisfied_weight >= *opts.threshold) break;
    if (out.satisfied_weight == ep.wcnf.total_soft_weight()) break;
  }
  return res;
}

std::vector<ltl::Formula> achieved_relaxations(const ts::TransitionSystem& t,
                                               const std::vector<ltl::SoftSpec>& soft) {
  std::vector<ltl::Formula> out;
  for (const auto& s : soft) {
    ltl::Formula best = ltl::f_true();
    for (const auto& level : s.relax_chain)
      if (ts::model_check(t, level)) {
        best = level;
        break;
      }
    out.push_back(best);
  }
  return out;
}

std::string theoretical_bound(const ltl::SpecProblem& p) {
  // Largest subformula count over the per-spec relaxation choices.
  std::vector<ltl::Formula> parts{p.hard};
  for (const auto& s : p.soft) {
    ltl::Formula worst = s.formula;
    size_t worst_count = 0;
    for (const auto& level : s.relax_chain) {
      size_t cnt = ltl::subformulas(level).size();
      if (cnt > worst_count) {
        worst_count = cnt;
        worst = level;
      }
    }
    parts.push_back(worst);
  }
  size_t c = ltl::subformulas(ltl::f_and_all(parts)).size();
  int log_c = 0;
  while ((size_t{1} << log_c) < c) ++log_c;
  size_t exp = c + log_c;  // states of the value automaton: N = 2^exp

  char buf[64];
  if (exp <= 12) {
    boost::multiprecision::cpp_int fact = 1;
    for (std::uint64_t i = 2; i <= (std::uint64_t{1} << exp); ++i) fact *= i;
    return boost::multiprecision::cpp_int(fact * fact).str();
  }
  if (exp <= 900) {
    // Stirling: log10((N!)^2) = 2 (N log10 N - N/ln 10 + log10(sqrt(2 pi N))).
    double n = std::ldexp(1.0, static_cast<int>(exp));
    double d = 2 * (n * std::log10(n) - n / std::log(10.0) +
                    0.5 * std::log10(2 * 3.14159265358979323846 * n));
    std::snprintf(buf, sizeof buf, "about 10^%.4g", d);
    return buf;
  }
  // log10 of the digit count itself: d ~ 2 N log10 N with N = 2^exp.
  double log_d = exp * std::log10(2.0) + std::log10(2 * exp * std::log10(2.0));
  std::snprintf(buf, sizeof buf, "about 10^(10^%.1f)", log_d);
  return buf;
}

std::string run_report(const SynthesisResult& r) {
  std::ostringstream os;
  for (const auto& rec : r.records) {
    os << "bound: " << rec.bound << "\n"
       << "status: " << status_name(rec.status) << "\n"
       << "weight: " << rec.satisfied_weight << "\n"
       << "weight_bound: " << rec.weight_bound << "\n"
       << "encode_ms: " << rec.encode_ms << "\n"
       << "solve_ms: " << rec.solve_ms << "\n\n";
  }
  if (r.implementation) {
    os << "result: optimum\n"
       << "best_bound: " << r.bound << "\n"
       << "best_weight: " << r.satisfied_weight << "\n"
       << "best_weight_bound: " << r.weight_bound << "\n";
    os << "value:";
    for (int v : r.value) os << ' ' << v;
    os << "\n";
    for (size_t j = 0; j < r.achieved.size(); ++j)
      os << "achieved_" << (j + 1) << ": " << ltl::to_string(r.achieved[j]) << "\n";
  } else {
    os << "result: none\n";
  }
  return os.str();
}

}  // namespace maxreal::synth
