#include <doctest.h>

#include <set>

#include "maxreal/bench.hpp"

using namespace maxreal;

namespace {

// n + n^2 + n^3 for n soft specs under the default weights.
long long default_weight_bound(int n) {
  long long nn = n;
  return nn + nn * nn + nn * nn * nn;
}

std::set<std::string> atom_set(const ltl::Formula& f) {
  std::set<std::string> out;
  for (const auto& sub : ltl::subformulas(f))
    if (sub->op == ltl::Op::Atom) out.insert(sub->atom);
  return out;
}

}  // namespace

TEST_CASE("robot benchmark shape") {
  auto p = bench::gen_robot();
  CHECK(p.inputs == std::vector<std::string>{"occupied"});
  CHECK(p.outputs.size() == 8);
  CHECK(p.soft.size() == 3);
  CHECK(default_weight_bound(3) == 39);

  CHECK_NOTHROW(p.validate());

  // Every atom is a declared input or output.
  std::set<std::string> declared(p.inputs.begin(), p.inputs.end());
  declared.insert(p.outputs.begin(), p.outputs.end());
  auto check_atoms = [&](const ltl::Formula& f) {
    for (const auto& a : atom_set(f)) CHECK(declared.count(a) == 1);
  };
  check_atoms(p.hard);
  for (const auto& s : p.soft) {
    check_atoms(s.formula);
    CHECK(s.relax_chain.size() == 3);
  }

  // Formulas survive a print/parse round trip.
  CHECK(ltl::to_string(ltl::parse(ltl::to_string(p.hard))) == ltl::to_string(p.hard));

  // The hard formula mentions the liveness structure of the patrol.
  auto text = ltl::to_string(p.hard);
  CHECK(text.find("exh1") != std::string::npos);
  CHECK(text.find("exh2") != std::string::npos);
  CHECK(text.find("office") != std::string::npos);
}

TEST_CASE("power network parameter validation") {
  bench::PowerParams bad;
  bad.supplies = 2;
  bad.loads = 3;
  bad.capacity = 1;
  bad.critical = 2;
  bad.non_critical = 2;  // 2 + 2 + 0 != 3
  bad.initializing = 0;
  CHECK_THROWS(bench::gen_power(bad));

  bench::PowerParams zero;
  zero.supplies = 0;
  zero.loads = 0;
  CHECK_THROWS(bench::gen_power(zero));
}

TEST_CASE("power instances match their published shapes") {
  // id -> {inputs, outputs, soft count}
  struct Row {
    int id, inputs, outputs, soft;
  };
  const Row rows[] = {
      {1, 2, 9, 2},   {2, 2, 18, 4},  {3, 2, 9, 2},   {4, 2, 18, 4},
      {5, 3, 4, 1},   {6, 3, 8, 3},   {7, 3, 12, 5},  {8, 3, 16, 7},
      {9, 3, 4, 5},   {10, 3, 8, 11}, {11, 3, 12, 17}, {12, 3, 16, 23},
  };
  for (const auto& row : rows) {
    auto p = bench::gen_power(bench::power_instance(row.id));
    CHECK(static_cast<int>(p.inputs.size()) == row.inputs);
    CHECK(static_cast<int>(p.outputs.size()) == row.outputs);
    CHECK(static_cast<int>(p.soft.size()) == row.soft);
    CHECK_NOTHROW(p.validate());
    for (const auto& s : p.soft) CHECK(s.relax_chain.size() == 3);
  }
  CHECK_THROWS(bench::power_instance(0));
  CHECK_THROWS(bench::power_instance(13));
}

TEST_CASE("power weight bounds match the published totals") {
  const std::pair<int, long long> expect[] = {
      {1, 14}, {2, 84}, {3, 14}, {4, 84}, {5, 3}, {6, 39},
      {7, 155}, {8, 399}, {9, 155}, {10, 1463}, {11, 5219}, {12, 12719},
  };
  for (auto [id, bound] : expect)
    CHECK(default_weight_bound(static_cast<int>(bench::gen_power(bench::power_instance(id)).soft.size())) == bound);
}

TEST_CASE("sparse topology connects each load to two supplies") {
  bench::PowerParams sp;
  sp.supplies = 4;
  sp.loads = 4;
  sp.capacity = 1;
  sp.critical = 1;
  sp.non_critical = 3;
  sp.initializing = 0;
  sp.sparse = true;
  for (int l = 0; l < sp.loads; ++l) {
    auto sup = sp.suppliers(l);
    std::vector<int> expect = {l % sp.supplies, (l + 1) % sp.supplies};
    std::sort(expect.begin(), expect.end());
    CHECK(sup == expect);
  }
  // consumers inverts suppliers.
  for (int s = 0; s < sp.supplies; ++s)
    for (int l : sp.consumers(s)) {
      auto sup = sp.suppliers(l);
      CHECK(std::count(sup.begin(), sup.end(), s) == 1);
    }

  bench::PowerParams full = sp;
  full.sparse = false;
  for (int l = 0; l < full.loads; ++l)
    CHECK(full.suppliers(l).size() == static_cast<size_t>(full.supplies));
}

TEST_CASE("power fault atoms encode supply indices in binary") {
  auto p = bench::gen_power(bench::power_instance(5));  // 4 supplies: 3 bits per fault variable
  CHECK(p.inputs.size() == 3);
  for (const auto& name : p.inputs) CHECK(name.rfind("e", 0) == 0);

  auto p1 = bench::gen_power(bench::power_instance(1));  // 3 supplies: 2 bits
  CHECK(p1.inputs.size() == 2);
}

TEST_CASE("switching restriction appears only in restricted instances") {
  // Instances 9-12 add one soft spec per connected (load, supply) pair on
  // top of the non-critical specs; the extras mention X.
  auto plain = bench::gen_power(bench::power_instance(7));
  auto restricted = bench::gen_power(bench::power_instance(11));
  CHECK(restricted.soft.size() == plain.soft.size() + 12);
}
