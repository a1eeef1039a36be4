#include "maxreal/sat.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace maxreal::sat {

namespace {
// Luby restart sequence (1,1,2,1,1,2,4,...), 0-based index.
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) / 2;
    --seq;
    i %= size;
  }
  return 1ull << seq;
}
}  // namespace

Solver::Solver(int num_vars) { ensure_var(num_vars - 1); }

void Solver::ensure_var(int v) {
  while (static_cast<int>(activity_.size()) <= v) {
    activity_.push_back(0);
    priority_.push_back(0);
    phase_.push_back(false);
    assigns_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
  }
}

int Solver::new_var() {
  ensure_var(num_vars());
  return num_vars();
}

void Solver::add_clause(std::vector<int> lits) {
  if (!ok_) return;
  backtrack(0);  // root-level status of literals is checked below
  for (int l : lits) {
    if (l == 0) throw std::runtime_error("literal 0 in clause");
    ensure_var(std::abs(l) - 1);
  }
  // encode, sort, strip duplicates / satisfied-at-root / tautologies
  std::vector<int> c;
  for (int l : lits) c.push_back(enc(l));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::vector<int> kept;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i + 1 < c.size() && c[i + 1] == neg(c[i])) return;  // tautology (sorted pairs adjacent)
    if (value_true(c[i]) && level_of(c[i]) == 0) return;
    if (value_false(c[i]) && level_of(c[i]) == 0) continue;
    kept.push_back(c[i]);
  }
  if (kept.empty()) {
    ok_ = false;
    return;
  }
  if (kept.size() == 1) {
    if (value_false(kept[0]))
      ok_ = false;
    else if (unassigned(kept[0]))
      enqueue(kept[0], -1);
    return;
  }
  int ci = static_cast<int>(clauses_.size());
  clauses_.push_back({std::move(kept), false, 0});
  watches_[clauses_[ci].lits[0]].push_back(ci);
  watches_[clauses_[ci].lits[1]].push_back(ci);
}

bool Solver::enqueue(int lit, int reason) {
  if (!unassigned(lit)) return value_true(lit);
  assigns_[var(lit)] = lit & 1 ? -1 : 1;
  level_[var(lit)] = trail_lim_.empty() ? 0 : static_cast<int>(trail_lim_.size());
  reason_[var(lit)] = reason;
  trail_.push_back(lit);
  return true;
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];        // p is true
    int fal = neg(p);                // fal is false; visit clauses watching it
    std::vector<int>& ws = watches_[fal];
    size_t keep = 0;
    for (size_t i = 0; i < ws.size(); ++i) {
      int ci = ws[i];
      Clause& c = clauses_[ci];
      if (c.lits[0] == fal) std::swap(c.lits[0], c.lits[1]);
      // now c.lits[1] == fal
      if (value_true(c.lits[0])) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (!value_false(c.lits[k])) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // unit or conflicting
      ws[keep++] = ci;
      if (value_false(c.lits[0])) {
        for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        return ci;
      }
      enqueue(c.lits[0], ci);
    }
    ws.resize(keep);
  }
  return -1;
}

void Solver::heap_sift_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (!heap_before(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_sift_down(int i) {
  int v = heap_[i];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_before(heap_[child + 1], heap_[child])) ++child;
    if (!heap_before(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::set_priority(const std::vector<int>& vars) {
  for (int v : vars) {
    ensure_var(v - 1);
    priority_[v - 1] = 1;
  }
}

void Solver::heap_insert(int v) {
  if (static_cast<int>(heap_pos_.size()) <= v) heap_pos_.resize(v + 1, -1);
  if (heap_pos_[v] != -1) return;
  heap_.push_back(v);
  heap_pos_[v] = static_cast<int>(heap_.size()) - 1;
  heap_sift_up(heap_pos_[v]);
}

int Solver::heap_pop() {
  if (heap_.empty()) return -1;
  int v = heap_[0];
  heap_pos_[v] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_sift_down(0);
  }
  return v;
}

void Solver::bump_var(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    // Uniform rescale preserves the heap order.
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (v < static_cast<int>(heap_pos_.size()) && heap_pos_[v] != -1) heap_sift_up(heap_pos_[v]);
}

void Solver::bump_clause(int ci) {
  clauses_[ci].activity += clause_inc_;
  if (clauses_[ci].activity > 1e20) {
    for (Clause& c : clauses_)
      if (c.learned) c.activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::analyze(int confl, std::vector<int>& learned, int& backtrack_level) {
  learned.assign(1, 0);
  seen_.resize(num_vars(), 0);
  auto& seen = seen_;
  int counter = 0, p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  int current = static_cast<int>(trail_lim_.size());

  for (;;) {
    Clause& c = clauses_[confl];
    if (c.learned) bump_clause(confl);
    for (int q : c.lits) {
      if (p != -1 && q == p) continue;
      int v = var(q);
      if (!seen[v] && level_[v] > 0) {
        seen[v] = true;
        bump_var(v);
        if (level_[v] >= current)
          ++counter;
        else
          learned.push_back(q);
      }
    }
    while (!seen[var(trail_[index])]) --index;
    p = trail_[index--];
    confl = reason_[var(p)];
    seen[var(p)] = false;
    --counter;
    if (counter == 0) break;
  }
  learned[0] = neg(p);

  // clause minimization: drop a literal when its entire reason clause is
  // already subsumed by the rest of the learned clause
  std::vector<int> flagged;
  for (size_t i = 1; i < learned.size(); ++i) flagged.push_back(var(learned[i]));
  size_t keep = 1;
  for (size_t i = 1; i < learned.size(); ++i) {
    int r = reason_[var(learned[i])];
    bool redundant = r != -1;
    if (redundant)
      for (int q : clauses_[r].lits)
        if (var(q) != var(learned[i]) && !seen[var(q)] && level_[var(q)] > 0) {
          redundant = false;
          break;
        }
    if (!redundant) learned[keep++] = learned[i];
  }
  learned.resize(keep);
  for (int v : flagged) seen[v] = 0;

  backtrack_level = 0;
  if (learned.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learned.size(); ++i)
      if (level_of(learned[i]) > level_of(learned[max_i])) max_i = i;
    std::swap(learned[1], learned[max_i]);
    backtrack_level = level_of(learned[1]);
  }
}

void Solver::backtrack(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  int bound = trail_lim_[level];
  for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
    int v = var(trail_[i]);
    phase_[v] = assigns_[v] == 1;
    assigns_[v] = 0;
    reason_[v] = -1;
    freed_.push_back(v);
  }
  trail_.resize(bound);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

bool Solver::locked(int ci) const {
  const Clause& c = clauses_[ci];
  return !c.lits.empty() && value_true(c.lits[0]) && reason_[var(c.lits[0])] == ci;
}

void Solver::reduce_learned() {
  std::vector<int> learned;
  for (int ci = first_learned_; ci < static_cast<int>(clauses_.size()); ++ci)
    if (clauses_[ci].learned && !clauses_[ci].lits.empty()) learned.push_back(ci);
  std::sort(learned.begin(), learned.end(), [&](int a, int b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  size_t target = learned.size() / 2;
  for (size_t i = 0; i < target; ++i) {
    int ci = learned[i];
    Clause& c = clauses_[ci];
    if (locked(ci) || c.lits.size() <= 2) continue;
    for (int k = 0; k < 2; ++k) {
      auto& ws = watches_[c.lits[k]];
      ws.erase(std::find(ws.begin(), ws.end(), ci));
    }
    c.lits.clear();
    c.lits.shrink_to_fit();
  }
}

int Solver::pick_branch() {
  int best = -1;
  double best_act = -1;
  for (int v = 0; v < num_vars(); ++v)
    if (assigns_[v] == 0 && activity_[v] > best_act) {
      best = v;
      best_act = activity_[v];
    }
  return best;
}

Result Solver::solve(const std::vector<int>& assumptions, double timeout_s) {
  if (!ok_) return Result::Unsat;
  backtrack(0);
  qhead_ = 0;
  for (int l : assumptions) ensure_var(std::abs(l) - 1);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s > 0 ? timeout_s : 1e9));

  heap_.clear();
  heap_pos_.assign(num_vars(), -1);
  for (int v = 0; v < num_vars(); ++v) heap_insert(v);

  std::uint64_t restart_round = 0, conflicts_since_restart = 0;
  std::uint64_t restart_limit = luby(0) * 256;
  std::uint64_t next_reduce = 4000 + clauses_.size() / 2;
  if (first_learned_ == 0) first_learned_ = static_cast<int>(clauses_.size());

  std::vector<int> learned;
  for (;;) {
    int confl = propagate();
    if (confl != -1) {
      ++conflicts_;
      ++conflicts_since_restart;
      if (trail_lim_.empty()) return Result::Unsat;
      int blevel;
      analyze(confl, learned, blevel);
      backtrack(blevel);
      for (int v : freed_) heap_insert(v);
      freed_.clear();
      if (learned.size() == 1) {
        enqueue(learned[0], -1);
      } else {
        int ci = static_cast<int>(clauses_.size());
        clauses_.push_back({learned, true, 0});
        watches_[learned[0]].push_back(ci);
        watches_[learned[1]].push_back(ci);
        bump_clause(ci);
        enqueue(learned[0], ci);
      }
      var_inc_ /= 0.95;
      clause_inc_ /= 0.999;
      if ((conflicts_ & 1023) == 0 && timeout_s > 0 &&
          std::chrono::steady_clock::now() > deadline)
        return Result::Unknown;
      if (conflicts_ >= next_reduce) {
        reduce_learned();
        next_reduce = conflicts_ + 4000 + conflicts_ / 4;
      }
      continue;
    }

    if (conflicts_since_restart >= restart_limit) {
      conflicts_since_restart = 0;
      restart_limit = luby(++restart_round) * 256;
      backtrack(0);
      continue;
    }

    // decisions: assumptions first, then VSIDS
    int decision = 0;
    if (trail_lim_.size() < assumptions.size()) {
      int a = enc(assumptions[trail_lim_.size()]);
      if (value_false(a)) return Result::Unsat;
      decision = a;
      if (value_true(a)) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        continue;
      }
    } else {
      for (int u : freed_) heap_insert(u);
      freed_.clear();
      int v = -1;
      while (!heap_.empty()) {
        int cand = heap_pop();
        if (assigns_[cand] == 0) {
          v = cand;
          break;
        }
      }
      if (v == -1) v = pick_branch();
      if (v == -1) {
        model_.assign(num_vars() + 1, false);
        for (int u = 0; u < num_vars(); ++u) model_[u + 1] = assigns_[u] == 1;
        return Result::Sat;
      }
      decision = 2 * v + (phase_[v] ? 0 : 1);
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(decision, -1);
  }
}

}  // namespace maxreal::sat
