#include "maxreal/bench.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace maxreal::bench {

using namespace ltl;

ltl::SpecProblem gen_robot() {
  const std::vector<std::string> locs = {"ent",  "corr1",   "corr2",  "exh1",
                                         "exh2", "passage", "office", "library"};
  auto A = [](const std::string& s) { return f_atom(s); };

  std::vector<Formula> hard;
  hard.push_back(A("ent"));

  std::vector<Formula> mutex;
  for (const auto& o1 : locs) {
    std::vector<Formula> rest;
    for (const auto& o2 : locs)
      if (o2 != o1) rest.push_back(f_not(A(o2)));
    mutex.push_back(f_implies(A(o1), f_and_all(rest)));
  }
  hard.push_back(f_globally(f_and_all(mutex)));

  auto adj = [&](const std::string& from, const std::vector<std::string>& to) {
    std::vector<Formula> next;
    for (const auto& t : to) next.push_back(A(t));
    hard.push_back(f_globally(f_implies(A(from), f_next(f_or_all(next)))));
  };
  adj("ent", {"ent", "corr1"});
  adj("corr1", {"corr1", "office", "exh1"});
  adj("office", {"office", "corr1"});
  adj("exh1", {"exh1", "passage", "library"});
  adj("passage", {"passage", "exh2"});
  adj("library", {"library", "exh2"});
  adj("exh2", {"exh2", "corr2"});
  adj("corr2", {"corr2", "ent"});

  hard.push_back(f_globally(f_finally(A("exh1"))));
  hard.push_back(f_globally(f_finally(A("exh2"))));

  auto order = [&](const std::string& from, const std::string& avoid, const std::string& to) {
    hard.push_back(f_globally(f_implies(
        A(from), f_next(f_until(f_and(f_not(A(avoid)), f_not(A(from))), A(to))))));
  };
  order("exh1", "ent", "exh2");
  order("exh2", "exh1", "ent");
  order("ent", "exh2", "exh1");

  hard.push_back(f_until(f_not(A("exh2")), A("office")));

  SpecProblem p;
  p.inputs = {"occupied"};
  p.outputs = locs;
  p.hard = f_and_all(hard);
  p.soft.push_back(SoftSpec::with_default_chain(
      f_globally(f_implies(A("corr1"), f_next(f_not(A("office")))))));
  p.soft.push_back(SoftSpec::with_default_chain(f_globally(
      f_implies(f_or(A("exh1"), A("exh2")), f_next(f_not(A("library")))))));
  p.soft.push_back(SoftSpec::with_default_chain(f_globally(
      f_implies(f_and(f_or(A("exh1"), A("exh2")), f_next(A("occupied"))),
                f_next(f_not(A("passage")))))));
  p.validate();
  return p;
}

std::vector<int> PowerParams::suppliers(int l) const {
  std::vector<int> out;
  if (sparse) {
    out = {l % supplies, (l + 1) % supplies};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    for (int p = 0; p < supplies; ++p) out.push_back(p);
  }
  return out;
}

std::vector<int> PowerParams::consumers(int p) const {
  std::vector<int> out;
  for (int l = 0; l < loads; ++l) {
    auto sup = suppliers(l);
    if (std::find(sup.begin(), sup.end(), p) != sup.end()) out.push_back(l);
  }
  return out;
}

void PowerParams::validate() const {
  if (supplies < 1 || loads < 1) throw std::invalid_argument("need at least one supply and load");
  if (capacity < 1) throw std::invalid_argument("capacity must be positive");
  if (critical < 0 || non_critical < 0 || initializing < 0 ||
      critical + non_critical + initializing != loads)
    throw std::invalid_argument("load characterization must partition the loads");
  if (max_faults < 0) throw std::invalid_argument("max_faults must be nonnegative");
}

namespace {

std::string svar(int l, int p) {
  return "s_l" + std::to_string(l) + "_p" + std::to_string(p);
}

/// All size-k subsets of items, in lexicographic order.
void subsets(const std::vector<int>& items, int k, size_t from, std::vector<int>& cur,
             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = from; i < items.size(); ++i) {
    cur.push_back(items[i]);
    subsets(items, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ltl::SpecProblem gen_power(const PowerParams& params) {
  params.validate();
  int bits = 0;
  while ((1 << bits) < params.supplies + 1) ++bits;

  SpecProblem prob;
  for (int i = 1; i <= params.max_faults; ++i)
    for (int b = 0; b < bits; ++b)
      prob.inputs.push_back("e" + std::to_string(i) + "_" + std::to_string(b));
  for (int l = 0; l < params.loads; ++l)
    for (int p : params.suppliers(l)) prob.outputs.push_back(svar(l, p));

  // Fault variable i carries value p+1 when supply p is faulty, 0 otherwise.
  auto fault_eq = [&](int i, int p) {
    std::vector<Formula> bitf;
    for (int b = 0; b < bits; ++b) {
      auto atom = f_atom("e" + std::to_string(i) + "_" + std::to_string(b));
      bitf.push_back(((p + 1) >> b) & 1 ? atom : f_not(atom));
    }
    return f_and_all(bitf);
  };
  auto powered = [&](int l) {
    std::vector<Formula> opts;
    for (int p : params.suppliers(l)) opts.push_back(f_atom(svar(l, p)));
    return f_or_all(opts);
  };
  // Loads are ordered critical, non-critical, initializing.
  auto is_critical = [&](int l) { return l < params.critical; };
  auto is_initializing = [&](int l) { return l >= params.critical + params.non_critical; };

  std::vector<Formula> hard;
  for (int l = 0; l < params.loads; ++l)
    if (is_critical(l)) hard.push_back(f_globally(powered(l)));
  for (int l = 0; l < params.loads; ++l)
    if (is_initializing(l)) hard.push_back(f_and(powered(l), f_next(powered(l))));
  for (int l = 0; l < params.loads; ++l) {
    auto sup = params.suppliers(l);
    if (sup.size() < 2) continue;
    for (int p1 : sup) {
      std::vector<Formula> others;
      for (int p2 : sup)
        if (p2 != p1) others.push_back(f_not(f_atom(svar(l, p2))));
      hard.push_back(f_globally(f_implies(f_atom(svar(l, p1)), f_and_all(others))));
    }
  }
  for (int p = 0; p < params.supplies; ++p) {
    auto cons = params.consumers(p);
    if (static_cast<int>(cons.size()) <= params.capacity) continue;
    std::vector<std::vector<int>> subs;
    std::vector<int> cur;
    subsets(cons, params.capacity, 0, cur, subs);
    for (const auto& sub : subs) {
      std::vector<Formula> lhs, rhs;
      for (int l : sub) lhs.push_back(f_atom(svar(l, p)));
      for (int l : cons)
        if (std::find(sub.begin(), sub.end(), l) == sub.end())
          rhs.push_back(f_not(f_atom(svar(l, p))));
      hard.push_back(f_globally(f_implies(f_and_all(lhs), f_and_all(rhs))));
    }
  }
  for (int i = 1; i <= params.max_faults; ++i)
    for (int p = 0; p < params.supplies; ++p) {
      std::vector<Formula> off;
      for (int l : params.consumers(p)) off.push_back(f_not(f_atom(svar(l, p))));
      if (off.empty()) continue;
      hard.push_back(f_globally(f_implies(fault_eq(i, p), f_and_all(off))));
    }
  prob.hard = f_and_all(hard);

  for (int l = 0; l < params.loads; ++l)
    if (!is_critical(l) && !is_initializing(l))
      prob.soft.push_back(SoftSpec::with_default_chain(f_globally(powered(l))));
  if (params.switching_restricted)
    for (int l = 0; l < params.loads; ++l)
      for (int p : params.suppliers(l)) {
        std::vector<Formula> faulty;
        for (int i = 1; i <= params.max_faults; ++i) faulty.push_back(fault_eq(i, p));
        auto keep = f_globally(f_implies(
            f_and(f_atom(svar(l, p)), f_next(f_not(f_or_all(faulty)))),
            f_next(f_atom(svar(l, p)))));
        prob.soft.push_back(SoftSpec::with_default_chain(keep));
      }

  prob.validate();
  return prob;
}

PowerParams power_instance(int id) {
  //                 P  L  cap cr nc in  sparse restr
  switch (id) {
    case 1: return {3, 3, 1, 1, 2, 0, 1, false, false};
    case 2: return {3, 6, 2, 2, 4, 0, 1, false, false};
    case 3: return {3, 3, 1, 0, 2, 1, 1, false, false};
    case 4: return {3, 6, 2, 1, 4, 1, 1, false, false};
    case 5: return {4, 2, 1, 1, 1, 0, 1, true, false};
    case 6: return {4, 4, 1, 1, 3, 0, 1, true, false};
    case 7: return {4, 6, 1, 1, 5, 0, 1, true, false};
    case 8: return {4, 8, 1, 1, 7, 0, 1, true, false};
    case 9: return {4, 2, 1, 1, 1, 0, 1, true, true};
    case 10: return {4, 4, 1, 1, 3, 0, 1, true, true};
    case 11: return {4, 6, 1, 1, 5, 0, 1, true, true};
    case 12: return {4, 8, 1, 1, 7, 0, 1, true, true};
    default: throw std::invalid_argument("unknown power instance " + std::to_string(id));
  }
}

}  // namespace maxreal::bench
