#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "maxreal/maxsat.hpp"
#include "maxreal/sat.hpp"

using namespace maxreal;

namespace {

// Brute-force satisfiability of a CNF over variables 1..n.
bool brute_sat(int n, const std::vector<std::vector<int>>& cnf, const std::vector<int>& assume = {}) {
  for (unsigned m = 0; m < (1u << n); ++m) {
    auto holds = [&](int lit) {
      int v = std::abs(lit);
      bool val = (m >> (v - 1)) & 1;
      return lit > 0 ? val : !val;
    };
    bool ok = true;
    for (int a : assume)
      if (!holds(a)) ok = false;
    for (const auto& c : cnf) {
      bool any = false;
      for (int l : c) any = any || holds(l);
      if (!any) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

std::vector<std::vector<int>> random_cnf(std::mt19937& rng, int n, int clauses, int max_len) {
  std::uniform_int_distribution<int> var(1, n), len(1, max_len), sign(0, 1);
  std::vector<std::vector<int>> cnf;
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> lits;
    for (int i = len(rng); i-- > 0;) lits.push_back(var(rng) * (sign(rng) ? 1 : -1));
    cnf.push_back(lits);
  }
  return cnf;
}

// Minimum falsified-soft weight over all assignments, or -1 if hard is unsat.
long long brute_min_cost(const enc::WcnfInstance& w) {
  long long best = -1;
  for (unsigned m = 0; m < (1u << w.num_vars); ++m) {
    std::vector<bool> model(w.num_vars + 1);
    for (int v = 1; v <= w.num_vars; ++v) model[v] = (m >> (v - 1)) & 1;
    bool hard_ok = true;
    for (const auto& c : w.hard) {
      bool any = false;
      for (int l : c) any = any || (l > 0 ? model[l] : !model[-l]);
      if (!any) hard_ok = false;
    }
    if (!hard_ok) continue;
    long long cost = msat::eval_cost(w, model);
    if (best < 0 || cost < best) best = cost;
  }
  return best;
}

}  // namespace

TEST_CASE("sat solver agrees with brute force on random small instances") {
  std::mt19937 rng(17);
  for (int iter = 0; iter < 400; ++iter) {
    int n = 1 + iter % 8;
    auto cnf = random_cnf(rng, n, 3 + iter % 14, 3);
    sat::Solver s(n);
    for (const auto& c : cnf) s.add_clause(c);
    bool expect = brute_sat(n, cnf);
    auto res = s.solve();
    REQUIRE(res != sat::Result::Unknown);
    CHECK((res == sat::Result::Sat) == expect);
    if (res == sat::Result::Sat) {
      const auto& m = s.model();
      for (const auto& c : cnf) {
        bool any = false;
        for (int l : c) any = any || (l > 0 ? m[l] : !m[-l]);
        CHECK(any);
      }
    }
  }
}

TEST_CASE("sat solver respects assumptions") {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + iter % 6;
    auto cnf = random_cnf(rng, n, 2 + iter % 10, 3);
    std::uniform_int_distribution<int> var(1, n), sign(0, 1);
    std::vector<int> assume = {var(rng) * (sign(rng) ? 1 : -1), var(rng) * (sign(rng) ? 1 : -1)};
    sat::Solver s(n);
    for (const auto& c : cnf) s.add_clause(c);
    CHECK((s.solve(assume) == sat::Result::Sat) == brute_sat(n, cnf, assume));
    // Solving under assumptions must not poison later unassumed solves.
    CHECK((s.solve() == sat::Result::Sat) == brute_sat(n, cnf));
  }
}

TEST_CASE("pigeonhole instances are unsat") {
  // n+1 pigeons, n holes: var p*n + h + 1 means pigeon p sits in hole h.
  for (int n = 2; n <= 4; ++n) {
    sat::Solver s((n + 1) * n);
    for (int p = 0; p <= n; ++p) {
      std::vector<int> some;
      for (int h = 0; h < n; ++h) some.push_back(p * n + h + 1);
      s.add_clause(some);
    }
    for (int h = 0; h < n; ++h)
      for (int p1 = 0; p1 <= n; ++p1)
        for (int p2 = p1 + 1; p2 <= n; ++p2)
          s.add_clause({-(p1 * n + h + 1), -(p2 * n + h + 1)});
    CHECK(s.solve() == sat::Result::Unsat);
  }
}

TEST_CASE("empty clause makes the solver permanently unsat") {
  sat::Solver s(2);
  s.add_clause({1, 2});
  s.add_clause({});
  CHECK(s.solve() == sat::Result::Unsat);
}

TEST_CASE("builtin maxsat matches brute-force optimum") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> weight(1, 9);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + iter % 6;
    enc::WcnfInstance w;
    w.num_vars = n;
    for (auto& c : random_cnf(rng, n, 2 + iter % 6, 3)) w.add_hard(std::move(c));
    for (auto& c : random_cnf(rng, n, 1 + iter % 5, 2)) w.add_soft(weight(rng), std::move(c));
    long long expect = brute_min_cost(w);
    auto out = msat::solve_builtin(w);
    if (expect < 0) {
      CHECK(out.status == msat::Status::HardUnsat);
    } else {
      REQUIRE(out.status == msat::Status::Optimum);
      CHECK(out.cost == expect);
      CHECK(out.satisfied_weight == w.total_soft_weight() - expect);
      CHECK(msat::eval_cost(w, out.model) == out.cost);
      // The model satisfies every hard clause.
      for (const auto& c : w.hard) {
        bool any = false;
        for (int l : c) any = any || (l > 0 ? out.model[l] : !out.model[-l]);
        CHECK(any);
      }
    }
  }
}

TEST_CASE("builtin maxsat with no soft clauses") {
  enc::WcnfInstance w;
  w.num_vars = 2;
  w.add_hard({1, 2});
  auto out = msat::solve_builtin(w);
  CHECK(out.status == msat::Status::Optimum);
  CHECK(out.cost == 0);
  CHECK(out.satisfied_weight == 0);
}

TEST_CASE("eval_cost sums falsified soft weights") {
  enc::WcnfInstance w;
  w.num_vars = 2;
  w.add_soft(3, {1});
  w.add_soft(5, {-1, 2});
  std::vector<bool> model = {false, false, false};  // x1 = x2 = false
  CHECK(msat::eval_cost(w, model) == 3);  // first falsified, second holds via -1
  model[1] = true;
  CHECK(msat::eval_cost(w, model) == 5);
  model[2] = true;
  CHECK(msat::eval_cost(w, model) == 0);
}

TEST_CASE("parse_solver_output handles both v-line styles") {
  enc::WcnfInstance w;
  w.num_vars = 3;
  w.add_hard({1, 2});
  w.add_soft(4, {3});

  auto spaced = msat::parse_solver_output("c comment\no 4\ns OPTIMUM FOUND\nv 1 -2 -3\n", w);
  CHECK(spaced.status == msat::Status::Optimum);
  CHECK(spaced.cost == 4);
  CHECK(spaced.satisfied_weight == 0);
  CHECK(spaced.model[1]);
  CHECK_FALSE(spaced.model[2]);

  auto packed = msat::parse_solver_output("o 0\ns OPTIMUM FOUND\nv 101\n", w);
  CHECK(packed.status == msat::Status::Optimum);
  CHECK(packed.cost == 0);
  CHECK(packed.model[1]);
  CHECK_FALSE(packed.model[2]);
  CHECK(packed.model[3]);

  auto unsat = msat::parse_solver_output("s UNSATISFIABLE\n", w);
  CHECK(unsat.status == msat::Status::HardUnsat);

  auto unknown = msat::parse_solver_output("s UNKNOWN\n", w);
  CHECK(unknown.status == msat::Status::Unknown);

  // Claimed cost must match the model's actual cost.
  CHECK_THROWS_AS(msat::parse_solver_output("o 0\ns OPTIMUM FOUND\nv 1 -2 -3\n", w),
                  msat::OutputParseError);
  // Optimum without a model line is malformed.
  CHECK_THROWS_AS(msat::parse_solver_output("s OPTIMUM FOUND\n", w), msat::OutputParseError);
  // Unrecognized status line is malformed.
  CHECK_THROWS_AS(msat::parse_solver_output("s MAYBE\n", w), msat::OutputParseError);
}

TEST_CASE("solve_external runs a command and parses its output") {
  enc::WcnfInstance w;
  w.num_vars = 2;
  w.add_hard({1});
  w.add_soft(2, {-1});

  // Fake solver that ignores the instance and prints a fixed answer.
  const char* path = "fake_solver.sh";
  {
    std::ofstream f(path);
    f << "#!/bin/sh\necho 'o 2'\necho 's OPTIMUM FOUND'\necho 'v 1 -2'\n";
  }
  REQUIRE(std::system("chmod +x fake_solver.sh") == 0);
  auto out = msat::solve_external(w, "./fake_solver.sh");
  CHECK(out.status == msat::Status::Optimum);
  CHECK(out.cost == 2);
  CHECK(out.model[1]);

  CHECK_THROWS_AS(msat::solve_external(w, "./does-not-exist-solver"), msat::SolverCrash);
  std::remove(path);
}
