#include <doctest.h>

#include <random>

#include "maxreal/synth.hpp"
#include "oracles.hpp"

using namespace maxreal;

namespace {

ltl::SpecProblem waiter_problem() {
  ltl::SpecProblem p;
  p.inputs = {"r1", "r2"};
  p.outputs = {"table1", "table2"};
  p.hard = ltl::parse("G (!table1 | !table2)");
  p.soft = {ltl::SoftSpec::with_default_chain(ltl::parse("G (r1 -> X table1)")),
            ltl::SoftSpec::with_default_chain(ltl::parse("G (r2 -> X table2)"))};
  return p;
}

}  // namespace

TEST_CASE("waiter synthesis reaches 8 of 14 and its value is (2,0,0)") {
  auto p = waiter_problem();
  synth::SynthesisOptions opts;
  opts.min_bound = 2;
  opts.max_bound = 4;
  auto r = synth::synthesize_max(p, opts);
  REQUIRE(r.implementation.has_value());
  CHECK(r.satisfied_weight == 8);
  CHECK(r.weight_bound == 14);
  CHECK(r.value == std::vector<int>{2, 0, 0});
  CHECK(ts::model_check(*r.implementation, p.hard));
  CHECK(ts::compute_value(*r.implementation, p.soft) == r.value);
}

TEST_CASE("achieved relaxations name the weakest satisfied level per spec") {
  auto p = waiter_problem();
  synth::SynthesisOptions opts;
  opts.min_bound = 2;
  opts.max_bound = 2;
  auto r = synth::synthesize_max(p, opts);
  REQUIRE(r.implementation.has_value());
  auto ach = synth::achieved_relaxations(*r.implementation, p.soft);
  REQUIRE(ach.size() == 2);
  for (size_t j = 0; j < 2; ++j) {
    // Each achieved formula really holds on the implementation.
    CHECK(ts::model_check(*r.implementation, ach[j]));
    // And nothing strictly stronger in the chain does.
    bool seen = false;
    for (const auto& level : p.soft[j].relax_chain) {
      if (ltl::to_string(level) == ltl::to_string(ach[j])) {
        seen = true;
        break;
      }
      CHECK_FALSE(ts::model_check(*r.implementation, level));
    }
    CHECK(seen);
  }
}

TEST_CASE("unrealizable hard specification yields hard-unsat at every bound") {
  ltl::SpecProblem p;
  p.inputs = {"i"};
  p.outputs = {"o"};
  p.hard = ltl::parse("G o & G !o");
  synth::SynthesisOptions opts;
  opts.min_bound = 1;
  opts.max_bound = 4;
  opts.schedule = synth::BoundSchedule::Step1;
  auto r = synth::synthesize_max(p, opts);
  CHECK_FALSE(r.implementation.has_value());
  REQUIRE(r.records.size() == 4);
  for (const auto& rec : r.records) CHECK(rec.status == msat::Status::HardUnsat);
  CHECK(r.records[0].bound == 1);
  CHECK(r.records[3].bound == 4);
}

TEST_CASE("bound schedules") {
  ltl::SpecProblem p;
  p.inputs = {};
  p.outputs = {"o"};
  p.hard = ltl::f_false();
  synth::SynthesisOptions opts;
  opts.min_bound = 1;
  opts.max_bound = 6;

  opts.schedule = synth::BoundSchedule::Step2;
  auto r2 = synth::synthesize_max(p, opts);
  std::vector<int> b2;
  for (const auto& rec : r2.records) b2.push_back(rec.bound);
  CHECK(b2 == std::vector<int>{1, 3, 5});

  opts.schedule = synth::BoundSchedule::Doubling;
  auto rd = synth::synthesize_max(p, opts);
  std::vector<int> bd;
  for (const auto& rec : rd.records) bd.push_back(rec.bound);
  CHECK(bd == std::vector<int>{1, 2, 4});
}

TEST_CASE("threshold stops the bound loop early") {
  auto p = waiter_problem();
  synth::SynthesisOptions opts;
  opts.min_bound = 2;
  opts.max_bound = 8;
  opts.schedule = synth::BoundSchedule::Step1;
  opts.threshold = 8;  // reached already at bound 2
  auto r = synth::synthesize_max(p, opts);
  REQUIRE(r.implementation.has_value());
  CHECK(r.records.size() == 1);
  CHECK(r.bound == 2);
  CHECK(r.satisfied_weight >= 8);
}

TEST_CASE("full weight stops the bound loop early") {
  // Soft spec is realizable outright, so weight_bound is hit at the first bound.
  ltl::SpecProblem p;
  p.inputs = {"i"};
  p.outputs = {"o"};
  p.hard = ltl::f_true();
  p.soft = {ltl::SoftSpec::with_default_chain(ltl::parse("G (i -> X o)"))};
  synth::SynthesisOptions opts;
  opts.min_bound = 2;
  opts.max_bound = 8;
  auto r = synth::synthesize_max(p, opts);
  REQUIRE(r.implementation.has_value());
  CHECK(r.records.size() == 1);
  CHECK(r.satisfied_weight == r.weight_bound);
  CHECK(r.value == std::vector<int>{1, 1, 1});
}

TEST_CASE("certification validates every optimum") {
  // Random safe problems: synthesize and recheck the result independently.
  std::mt19937 rng(47);
  int produced = 0;
  for (int iter = 0; iter < 30; ++iter) {
    ltl::SpecProblem p;
    p.inputs = {"i"};
    p.outputs = {"o"};
    p.hard = ltl::f_globally(oracle::random_safe(rng, {"i", "o"}, 2));
    p.soft = {ltl::SoftSpec::with_default_chain(
        ltl::f_globally(oracle::random_safe(rng, {"i", "o"}, 2)))};
    synth::SynthesisOptions opts;
    opts.min_bound = 2;
    opts.max_bound = 2;
    synth::SynthesisResult r;
    CHECK_NOTHROW(r = synth::synthesize_max(p, opts));
    if (!r.implementation) continue;
    ++produced;
    CHECK(ts::model_check(*r.implementation, p.hard));
    // compute_value is an independent check of the claimed weights: under the
    // default scheme the weight of value (v1,v2,v3) is v3 + 1*v2 + 1*v3... use
    // Lemma-style identity with n = 1: weight = v3 + v2 + v1.
    long long w = r.value[2] + r.value[1] + r.value[0];
    CHECK(w == r.satisfied_weight);
  }
  CHECK(produced > 5);
}

TEST_CASE("synthesis weight agrees with brute force over all 1-input 1-output systems") {
  // Every deterministic 2-state system over one input and one output, scored
  // by model checking each chain level directly; the encoder must match the
  // best score.
  std::mt19937 rng(53);
  for (int iter = 0; iter < 12; ++iter) {
    ltl::SpecProblem p;
    p.inputs = {"i"};
    p.outputs = {"o"};
    p.hard = ltl::f_globally(oracle::random_safe(rng, {"i", "o"}, 1));
    p.soft = {ltl::SoftSpec::with_default_chain(
        ltl::f_globally(oracle::random_safe(rng, {"i", "o"}, 2)))};
    auto aut = enc::build_problem_automata(p);
    auto ep = enc::encode_problem(p, aut, 2);
    auto out = msat::solve_builtin(ep.wcnf);

    long long best = -1;
    for (const auto& t : oracle::all_systems_1_1(2)) {
      if (!ts::model_check(t, p.hard)) continue;
      auto v = ts::compute_value(t, p.soft);
      long long w = v[2] + v[1] * 1 + v[0] * 1;  // n = 1
      best = std::max(best, w);
    }
    if (best < 0) {
      CHECK(out.status == msat::Status::HardUnsat);
    } else {
      REQUIRE(out.status == msat::Status::Optimum);
      CHECK(out.satisfied_weight == best);
    }
  }
}

TEST_CASE("theoretical bound reporting") {
  ltl::SpecProblem p;
  p.inputs = {"i"};
  p.outputs = {"o"};
  p.hard = ltl::parse("G o");
  auto s = synth::theoretical_bound(p);
  CHECK_FALSE(s.empty());
  // Tiny instance: exact factorial-squared value, so all digits.
  CHECK(s.find_first_not_of("0123456789") == std::string::npos);

  // Larger instance falls back to an order-of-magnitude estimate.
  ltl::SpecProblem big;
  big.inputs = {"a", "b", "c"};
  big.outputs = {"x", "y", "z"};
  big.hard = ltl::parse(
      "G (a -> X (x U y)) & G (b -> F (y & X z)) & G (c -> (x R (y | z))) & G (F x) & F (G !z)");
  auto sb = synth::theoretical_bound(big);
  CHECK(sb.find("10^") != std::string::npos);
}

TEST_CASE("run report lists every bound and the final result") {
  auto p = waiter_problem();
  synth::SynthesisOptions opts;
  opts.min_bound = 2;
  opts.max_bound = 4;
  auto r = synth::synthesize_max(p, opts);
  auto text = synth::run_report(r);
  CHECK(text.find("bound: 2") != std::string::npos);
  CHECK(text.find("result: optimum") != std::string::npos);
  CHECK(text.find("value: 2 0 0") != std::string::npos);

  ltl::SpecProblem bad;
  bad.inputs = {"i"};
  bad.outputs = {"o"};
  bad.hard = ltl::f_false();
  auto rb = synth::synthesize_max(bad, opts);
  auto tb = synth::run_report(rb);
  CHECK(tb.find("hard-unsat") != std::string::npos);
  CHECK(tb.find("result: none") != std::string::npos);
}

TEST_CASE("option validation") {
  auto p = waiter_problem();
  synth::SynthesisOptions opts;
  opts.min_bound = 0;
  CHECK_THROWS(synth::synthesize_max(p, opts));
  opts.min_bound = 4;
  opts.max_bound = 2;
  CHECK_THROWS(synth::synthesize_max(p, opts));

  ltl::SpecProblem dup;
  dup.inputs = {"x"};
  dup.outputs = {"x"};
  dup.hard = ltl::f_true();
  synth::SynthesisOptions ok;
  CHECK_THROWS(synth::synthesize_max(dup, ok));
}
