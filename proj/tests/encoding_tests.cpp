#include <doctest.h>

#include "maxreal/encoding.hpp"
#include "maxreal/maxsat.hpp"
#include "maxreal/sat.hpp"
#include "oracles.hpp"

using namespace maxreal;
using namespace maxreal::enc;

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

bool sat_under(const WcnfInstance& w, const std::vector<int>& assumptions) {
  sat::Solver s;
  while (s.num_vars() < w.num_vars) s.new_var();
  for (const auto& c : w.hard) s.add_clause(c);
  return s.solve(assumptions) == sat::Result::Sat;
}

}  // namespace

TEST_CASE("wdimacs format and round trip") {
  WcnfInstance empty;
  CHECK(to_wdimacs(empty) == "p wcnf 0 0 1\n");

  WcnfInstance w;
  w.num_vars = 2;
  w.add_hard({1, -2});
  w.add_soft(3, {2});
  CHECK(to_wdimacs(w) == "p wcnf 2 2 4\n4 1 -2 0\n3 2 0\n");

  std::mt19937 rng(59);
  for (int iter = 0; iter < 50; ++iter) {
    WcnfInstance r;
    r.num_vars = 8;
    std::uniform_int_distribution<int> lit(1, 8), len(1, 4), weight(1, 9), sign(0, 1);
    for (int c = 0; c < 12; ++c) {
      std::vector<int> lits;
      for (int i = len(rng); i-- > 0;) lits.push_back(lit(rng) * (sign(rng) ? 1 : -1));
      if (c % 3 == 0)
        r.add_soft(weight(rng), lits);
      else
        r.add_hard(lits);
    }
    auto back = parse_wdimacs(to_wdimacs(r));
    CHECK(back.num_vars == r.num_vars);
    CHECK(back.hard == r.hard);
    REQUIRE(back.soft.size() == r.soft.size());
    for (size_t i = 0; i < r.soft.size(); ++i) {
      CHECK(back.soft[i].weight == r.soft[i].weight);
      CHECK(back.soft[i].lits == r.soft[i].lits);
    }
  }
}

TEST_CASE("stats") {
  WcnfInstance w;
  auto st = stats(w);
  CHECK(st.vars == 0);
  CHECK(st.clauses == 0);
  CHECK(st.total_soft_weight == 0);
}

TEST_CASE("comparators agree with integer semantics (exhaustive, width <= 4)") {
  for (int width = 1; width <= 4; ++width) {
    VarTable vt;
    WcnfInstance w;
    std::vector<int> x, y;
    for (int i = 0; i < width; ++i) x.push_back(vt.intern("x" + std::to_string(i)));
    for (int i = 0; i < width; ++i) y.push_back(vt.intern("y" + std::to_string(i)));
    int gt = tseitin(cmp_gt(x, y), Polarity::Both, vt, w);
    int ge = tseitin(cmp_ge(x, y), Polarity::Both, vt, w);
    int eq3 = tseitin(cmp_eq_const(x, 3u & ((1u << width) - 1)), Polarity::Both, vt, w);
    w.num_vars = vt.num_vars();
    for (unsigned a = 0; a < (1u << width); ++a)
      for (unsigned b = 0; b < (1u << width); ++b) {
        std::vector<int> assume;
        for (int i = 0; i < width; ++i) {
          assume.push_back(a >> i & 1 ? x[i] : -x[i]);
          assume.push_back(b >> i & 1 ? y[i] : -y[i]);
        }
        auto with = [&](int lit) {
          auto v = assume;
          v.push_back(lit);
          return sat_under(w, v);
        };
        CHECK(with(gt) == (a > b));
        CHECK(with(-gt) == (a <= b));
        CHECK(with(ge) == (a >= b));
        CHECK(with(-ge) == (a < b));
        CHECK(with(eq3) == (a == (3u & ((1u << width) - 1))));
      }
  }
}

TEST_CASE("annotation widths") {
  CHECK(annotation_width_cobuchi(2, 1) == 2);   // ceil(log2(3))
  CHECK(annotation_width_cobuchi(8, 3) == 5);   // ceil(log2(25))
  CHECK(annotation_width_fg(1) == 1);
  CHECK(annotation_width_fg(8) == 4);           // ceil(log2(9))
}

TEST_CASE("input enabledness clause counts") {
  {
    VarTable vt;
    WcnfInstance w;
    encode_input_enabled(1, 0, vt, w);
    REQUIRE(w.hard.size() == 1);
    CHECK(w.hard[0].size() == 1);
  }
  {
    VarTable vt;
    WcnfInstance w;
    encode_input_enabled(2, 1, vt, w);
    CHECK(w.hard.size() == 4);
    for (const auto& c : w.hard) CHECK(c.size() == 2);
  }
  {
    VarTable vt;
    WcnfInstance w;
    encode_input_enabled(3, 2, vt, w);
    CHECK(w.hard.size() == 12);
  }
}

TEST_CASE("hard annotation: realizable and unrealizable shapes") {
  std::vector<std::string> io = {"i", "o"};
  auto solve_hard = [&](const ltl::Formula& hard, int b) {
    ltl::SpecProblem p;
    p.inputs = {"i"};
    p.outputs = {"o"};
    p.hard = hard;
    auto aut = build_problem_automata(p);
    auto ep = encode_problem(p, aut, b);
    return msat::solve_builtin(ep.wcnf);
  };
  for (int b = 1; b <= 3; ++b) CHECK(solve_hard(ltl::f_true(), b).status == msat::Status::Optimum);
  CHECK(solve_hard(ltl::parse("G o"), 1).status == msat::Status::Optimum);
  for (int b = 1; b <= 2; ++b)
    CHECK(solve_hard(ltl::parse("G o & G !o"), b).status == msat::Status::HardUnsat);
  // Environment-controlled contradiction: no implementation forces inputs.
  CHECK(solve_hard(ltl::parse("G i"), 2).status == msat::Status::HardUnsat);
}

TEST_CASE("extracted systems satisfy the hard specification") {
  std::mt19937 rng(61);
  int solved = 0;
  for (int iter = 0; iter < 40; ++iter) {
    ltl::SpecProblem p;
    p.inputs = {"i"};
    p.outputs = {"o"};
    p.hard = ltl::f_globally(oracle::random_safe(rng, {"i", "o"}, 2));
    auto aut = build_problem_automata(p);
    auto ep = encode_problem(p, aut, 2);
    auto out = msat::solve_builtin(ep.wcnf);
    if (out.status != msat::Status::Optimum) continue;
    auto t = extract_system(p, ep, out.model);
    CHECK_NOTHROW(t.validate());
    CHECK(ts::model_check(t, p.hard));
    ++solved;
  }
  CHECK(solved > 5);
}

TEST_CASE("waiter problem optimum weight is 8 of 14 at bound 3") {
  auto p = waiter_problem();
  auto aut = build_problem_automata(p);
  auto ep = encode_problem(p, aut, 3);
  CHECK(ep.wcnf.total_soft_weight() == 14);  // n + n^2 + n^3 for n = 2
  auto out = msat::solve_builtin(ep.wcnf);
  REQUIRE(out.status == msat::Status::Optimum);
  CHECK(out.satisfied_weight == 8);  // value (2,0,0): both GF levels, weight n^2 each
  auto t = extract_system(p, ep, out.model);
  CHECK(ts::compute_value(t, p.soft) == std::vector<int>{2, 0, 0});
}

TEST_CASE("soft indicators are one-sided: forcing them false keeps hard clauses satisfiable") {
  auto p = waiter_problem();
  auto aut = build_problem_automata(p);
  auto ep = encode_problem(p, aut, 2);
  std::vector<int> force;
  for (const auto& sc : ep.wcnf.soft)
    for (int lit : sc.lits) force.push_back(-lit);
  std::sort(force.begin(), force.end());
  force.erase(std::unique(force.begin(), force.end()), force.end());
  CHECK(sat_under(ep.wcnf, force));
}

TEST_CASE("scheme weights") {
  auto def = scheme_weights(ltl::WeightScheme::Default, 3, 3);
  for (const auto& row : def) CHECK(row == std::vector<long long>{1, 3, 9});
  CHECK_THROWS(scheme_weights(ltl::WeightScheme::Default, 3, 2));

  auto gen = scheme_weights(ltl::WeightScheme::General, 4, 3);
  for (const auto& row : gen) CHECK(row == std::vector<long long>{1, 4, 16});
  CHECK(scheme_weights(ltl::WeightScheme::General, 2, 1)[0] == std::vector<long long>{1});

  auto po = scheme_weights(ltl::WeightScheme::PriorityOrdered, 2, 3);
  CHECK(po[0] == std::vector<long long>{1, 1, 4});
  CHECK(po[1] == std::vector<long long>{1, 1, 1});

  auto ps = scheme_weights(ltl::WeightScheme::PriorityStrict, 2, 2);
  // Priority descends with j; every weight tops the sum of the weaker ones.
  long long below = 0;
  for (int j = 2; j >= 1; --j)
    for (int k = 1; k <= 2; ++k) {
      CHECK(ps[j - 1][k - 1] == below + 1);
      below += ps[j - 1][k - 1];
    }

  auto user = scheme_weights(ltl::WeightScheme::User, 1, 2, {{5, 7}});
  CHECK(user[0] == std::vector<long long>{5, 7});
  CHECK_THROWS(scheme_weights(ltl::WeightScheme::User, 1, 2, {{0, 7}}));
  CHECK_THROWS(scheme_weights(ltl::WeightScheme::User, 2, 2, {{1, 1}}));
}

TEST_CASE("general chain encoding with default chain matches default weights") {
  // Encoding the (G, FG, GF) chain under the general scheme gives weights
  // (1, n, n^2) and the same optimum as the default-shape encoding.
  auto p = waiter_problem();
  auto p2 = p;
  p2.scheme = ltl::WeightScheme::General;
  auto e1 = encode_problem(p, build_problem_automata(p), 2);
  auto e2 = encode_problem(p2, build_problem_automata(p2), 2);
  CHECK(e1.wcnf.total_soft_weight() == e2.wcnf.total_soft_weight());
  auto o1 = msat::solve_builtin(e1.wcnf);
  auto o2 = msat::solve_builtin(e2.wcnf);
  REQUIRE(o1.status == msat::Status::Optimum);
  REQUIRE(o2.status == msat::Status::Optimum);
  CHECK(o1.satisfied_weight == o2.satisfied_weight);
}

TEST_CASE("var table is a bijection") {
  VarTable vt;
  int a = vt.intern("x");
  CHECK(vt.intern("x") == a);
  CHECK(vt.find("x") == a);
  CHECK_FALSE(vt.find("y").has_value());
  int b = vt.fresh_aux();
  CHECK(b != a);
  CHECK(vt.trans(0, 1, 2) == vt.trans(0, 1, 2));
  CHECK(vt.trans(0, 1, 2) != vt.trans(0, 2, 1));
  auto text = vt.map_text();
  CHECK(text.find("x") != std::string::npos);
}
