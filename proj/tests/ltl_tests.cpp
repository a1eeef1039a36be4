#include <doctest.h>

#include "maxreal/ltl.hpp"
#include "oracles.hpp"

using namespace maxreal::ltl;

TEST_CASE("parser shapes and precedence") {
  auto f = parse("G (req1 -> X table1)");
  REQUIRE(f->op == Op::Globally);
  REQUIRE(f->lhs->op == Op::Implies);
  CHECK(f->lhs->lhs->atom == "req1");
  CHECK(f->lhs->rhs->op == Op::Next);
  CHECK(f->lhs->rhs->lhs->atom == "table1");

  CHECK(parse("true")->op == Op::True);
  CHECK(parse("false")->op == Op::False);

  // U is right-associative and binds tighter than &, | and ->.
  auto u = parse("a U b U c");
  REQUIRE(u->op == Op::Until);
  CHECK(u->lhs->atom == "a");
  CHECK(u->rhs->op == Op::Until);
  CHECK(equal(parse("a & b | c"), f_or(f_and(f_atom("a"), f_atom("b")), f_atom("c"))));
  CHECK(equal(parse("a -> b -> c"), f_implies(f_atom("a"), f_implies(f_atom("b"), f_atom("c")))));
  CHECK(equal(parse("!a U b"), f_until(f_not(f_atom("a")), f_atom("b"))));
  CHECK(equal(parse("a U b & c"), f_and(f_until(f_atom("a"), f_atom("b")), f_atom("c"))));
  CHECK(equal(parse("G a R b"), parse("(G a) R b")));

  CHECK_THROWS_AS(parse("a &"), ParseError);
  CHECK_THROWS_AS(parse("(a"), ParseError);
  CHECK_THROWS_AS(parse("a @ b"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("print/parse round trip on random formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    auto f = oracle::random_formula(rng, {"a", "b", "c"}, 4);
    CAPTURE(to_string(f));
    CHECK(equal(parse(to_string(f)), f));
  }
}

TEST_CASE("nnf structure") {
  CHECK(equal(to_nnf(f_not(f_globally(f_atom("p")))), f_finally(f_not(f_atom("p")))));
  CHECK(equal(to_nnf(f_not(f_until(f_atom("a"), f_atom("b")))),
              f_release(f_not(f_atom("a")), f_not(f_atom("b")))));
  CHECK(equal(to_nnf(f_implies(f_atom("a"), f_atom("b"))), f_or(f_not(f_atom("a")), f_atom("b"))));

  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) CHECK(is_nnf(to_nnf(oracle::random_formula(rng, {"a", "b"}, 4))));
}

TEST_CASE("nnf preserves lasso-word satisfaction") {
  std::mt19937 rng(13);
  auto lassos = oracle::all_lassos({"a", "b"}, 2, 2);
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::random_formula(rng, {"a", "b"}, 4);
    auto g = to_nnf(f);
    CAPTURE(to_string(f));
    for (const auto& w : lassos)
      if (oracle::eval_lasso(f, w) != oracle::eval_lasso(g, w)) {
        CHECK(oracle::eval_lasso(f, w) == oracle::eval_lasso(g, w));
        return;
      }
  }
  CHECK(true);
}

TEST_CASE("syntactic safety classification") {
  CHECK(is_syntactically_safe(parse("G (corr1 -> X !office)")));
  CHECK_FALSE(is_syntactically_safe(parse("F p")));
  CHECK_FALSE(is_syntactically_safe(parse("G F p")));
  CHECK_FALSE(is_syntactically_safe(parse("a U b")));
  // Negation flips safety through NNF: !(F p) is a safety formula.
  CHECK(is_syntactically_safe(parse("!(F p)")));
  CHECK(is_syntactically_safe(parse("a R b")));
  CHECK_FALSE(is_syntactically_safe(parse("!(a R b)")));
}

TEST_CASE("relax_vector") {
  auto v = relax_vector(parse("G !office"));
  REQUIRE(v.size() == 3);
  CHECK(equal(v[0], parse("G !office")));
  CHECK(equal(v[1], parse("F G !office")));
  CHECK(equal(v[2], parse("G F !office")));

  CHECK(relax_vector(parse("G true")).size() == 3);
  CHECK(equal(relax_vector(parse("G (a & X b)"))[1], parse("F G (a & X b)")));
  CHECK_THROWS_AS(relax_vector(parse("F p")), NotSafetyShape);
  CHECK_THROWS_AS(relax_vector(parse("G (F p)")), NotSafetyShape);
}

TEST_CASE("subformulas and size") {
  CHECK(size(f_atom("p")) == 0);
  CHECK(size(parse("G p")) == 1);
  CHECK(subformulas(parse("G (a & b)")).size() == 4);  // G(a&b), a&b, a, b
  CHECK(size(parse("a U (b | !c)")) == 3);
}

TEST_CASE("soft spec and problem validation") {
  auto s = SoftSpec::with_default_chain(parse("G (i -> X o)"));
  REQUIRE(s.relax_chain.size() == 3);
  CHECK(equal(s.relax_chain[0], s.formula));

  SpecProblem p;
  p.inputs = {"i"};
  p.outputs = {"o"};
  p.hard = parse("G (i -> X o)");
  p.soft = {s};
  CHECK_NOTHROW(p.validate());

  SpecProblem bad = p;
  bad.hard = parse("G unknown_atom");
  CHECK_THROWS(bad.validate());
  SpecProblem clash = p;
  clash.outputs = {"i"};
  CHECK_THROWS(clash.validate());
}

TEST_CASE("relax chain weakens along the chain") {
  // T satisfying a chain level also satisfies every weaker level.
  std::mt19937 rng(17);
  for (int iter = 0; iter < 60; ++iter) {
    auto psi = oracle::random_safe(rng, {"i", "o"}, 2);
    auto chain = relax_vector(f_globally(psi));
    auto t = oracle::random_system(rng, {"i"}, {"o"}, 1 + iter % 3);
    for (size_t k = 0; k + 1 < chain.size(); ++k)
      if (maxreal::ts::model_check(t, chain[k])) CHECK(maxreal::ts::model_check(t, chain[k + 1]));
  }
}
