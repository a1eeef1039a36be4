#include "maxreal/maxsat.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "maxreal/sat.hpp"

namespace maxreal::msat {

using enc::WcnfInstance;

long long eval_cost(const WcnfInstance& w, const std::vector<bool>& model) {
  auto lit_true = [&](int l) {
    int v = std::abs(l);
    bool b = v < static_cast<int>(model.size()) && model[v];
    return l > 0 ? b : !b;
  };
  long long cost = 0;
  for (const auto& c : w.soft) {
    bool sat = false;
    for (int l : c.lits) sat = sat || lit_true(l);
    if (!sat) cost += c.weight;
  }
  return cost;
}

// --------------------------------------------------------------- built-in

namespace {

// Generalized totalizer over weighted indicator literals: out[σ] is forced
// true whenever the sum of the true indicators' weights reaches σ.
std::map<long long, int> build_totalizer(sat::Solver& s,
                                         const std::vector<std::pair<int, long long>>& items,
                                         size_t lo, size_t hi) {
  std::map<long long, int> outs;
  if (hi - lo == 1) {
    outs[items[lo].second] = items[lo].first;
    return outs;
  }
  size_t mid = lo + (hi - lo) / 2;
  auto left = build_totalizer(s, items, lo, mid);
  auto right = build_totalizer(s, items, mid, hi);
  std::map<long long, int> sums;  // attainable positive sums -> fresh var
  auto var_for = [&](long long w) {
    auto it = sums.find(w);
    if (it != sums.end()) return it->second;
    int v = s.new_var();
    sums.emplace(w, v);
    return v;
  };
  for (const auto& [wa, va] : left) var_for(wa);
  for (const auto& [wb, vb] : right) var_for(wb);
  for (const auto& [wa, va] : left)
    for (const auto& [wb, vb] : right) var_for(wa + wb);
  for (const auto& [wa, va] : left) s.add_clause({-va, sums[wa]});
  for (const auto& [wb, vb] : right) s.add_clause({-vb, sums[wb]});
  for (const auto& [wa, va] : left)
    for (const auto& [wb, vb] : right) s.add_clause({-va, -vb, sums[wa + wb]});
  return sums;
}

double remaining(const std::chrono::steady_clock::time_point& deadline, bool has_deadline) {
  if (!has_deadline) return 0;
  return std::chrono::duration<double>(deadline - std::chrono::steady_clock::now()).count();
}

}  // namespace

MaxSatOutcome solve_builtin(const WcnfInstance& w, double timeout_s) {
  bool has_deadline = timeout_s > 0;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(has_deadline ? timeout_s : 0));
  MaxSatOutcome out;
  long long total = w.total_soft_weight();

  sat::Solver s(w.num_vars);
  s.set_priority(w.branch_priority);
  for (const auto& c : w.hard) s.add_clause(c);
  std::vector<std::pair<int, long long>> items;  // (relax var, weight)
  for (const auto& c : w.soft) {
    int r = s.new_var();
    std::vector<int> cl = c.lits;
    cl.push_back(r);
    s.add_clause(cl);
    items.push_back({r, c.weight});
  }

  double budget = remaining(deadline, has_deadline);
  if (has_deadline && budget <= 0) return out;
  sat::Result first = s.solve({}, budget);
  if (first == sat::Result::Unknown) return out;
  if (first == sat::Result::Unsat) {
    out.status = Status::HardUnsat;
    return out;
  }
  out.model = s.model();
  out.cost = eval_cost(w, out.model);
  out.satisfied_weight = total - out.cost;
  if (w.soft.empty() || out.cost == 0) {
    out.status = Status::Optimum;
    return out;
  }

  auto sums = build_totalizer(s, items, 0, items.size());
  // binary search the minimal falsifiable weight; `hi` always has a model
  long long lo = 0, hi = out.cost;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    // forbid every attainable relax-weight sum above mid (the outputs are
    // exact subset sums, not cumulative thresholds)
    std::vector<int> assumptions;
    for (auto it = sums.upper_bound(mid); it != sums.end(); ++it)
      assumptions.push_back(-it->second);
    budget = remaining(deadline, has_deadline);
    if (has_deadline && budget <= 0) {
      out.status = Status::Unknown;
      return out;
    }
    sat::Result r = s.solve(assumptions, budget);
    if (r == sat::Result::Unknown) {
      out.status = Status::Unknown;
      return out;
    }
    if (r == sat::Result::Sat) {
      out.model = s.model();
      long long c = eval_cost(w, out.model);
      out.cost = std::min(out.cost, c);
      hi = out.cost;
    } else {
      lo = mid + 1;
    }
  }
  out.cost = hi;
  out.satisfied_weight = total - out.cost;
  out.status = Status::Optimum;
  out.model.resize(w.num_vars + 1);  // drop relaxation/totalizer variables
  return out;
}

// --------------------------------------------------------------- external

MaxSatOutcome parse_solver_output(const std::string& text, const WcnfInstance& w) {
  MaxSatOutcome out;
  std::string status_line;
  long long reported_cost = -1;
  std::vector<bool> model(w.num_vars + 1, false);
  bool saw_values = false;

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == 's' && (line.size() == 1 || line[1] == ' ')) {
      status_line = line.size() > 2 ? line.substr(2) : "";
      while (!status_line.empty() && isspace(static_cast<unsigned char>(status_line.back())))
        status_line.pop_back();
    } else if (line[0] == 'o' && line.size() > 2) {
      reported_cost = std::stoll(line.substr(2));
    } else if (line[0] == 'v' && (line.size() == 1 || line[1] == ' ')) {
      saw_values = true;
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        bool binary = tok.find_first_not_of("01") == std::string::npos;
        if (binary && tok.size() > 1) {
          // contiguous 0/1 style: character i is variable i+1
          for (size_t i = 0; i < tok.size() && i < static_cast<size_t>(w.num_vars); ++i)
            model[i + 1] = tok[i] == '1';
        } else {
          int lit = std::stoi(tok);
          if (lit == 0) continue;
          int v = std::abs(lit);
          if (v <= w.num_vars) model[v] = lit > 0;
        }
      }
    }
  }

  if (status_line == "UNSATISFIABLE") {
    out.status = Status::HardUnsat;
    return out;
  }
  if (status_line != "OPTIMUM FOUND") {
    if (status_line.empty() || status_line == "UNKNOWN" || status_line == "SATISFIABLE") {
      out.status = Status::Unknown;
      if (reported_cost >= 0) out.cost = reported_cost;
      return out;
    }
    throw OutputParseError("unrecognized solver status: " + status_line);
  }
  if (!saw_values) throw OutputParseError("OPTIMUM FOUND without a model line");
  out.model = std::move(model);
  out.cost = eval_cost(w, out.model);
  if (reported_cost >= 0 && reported_cost != out.cost)
    throw OutputParseError("solver cost " + std::to_string(reported_cost) +
                           " disagrees with its model (cost " + std::to_string(out.cost) + ")");
  out.satisfied_weight = w.total_soft_weight() - out.cost;
  out.status = Status::Optimum;
  return out;
}

MaxSatOutcome solve_external(const WcnfInstance& w, const std::string& command,
                             double timeout_s) {
  char path[] = "/tmp/maxreal_XXXXXX.wcnf";
  int fd = mkstemps(path, 5);
  if (fd < 0) throw std::runtime_error("cannot create temp wcnf file");
  {
    std::string text = enc::to_wdimacs(w);
    size_t off = 0;
    while (off < text.size()) {
      ssize_t n = write(fd, text.data() + off, text.size() - off);
      if (n <= 0) {
        close(fd);
        unlink(path);
        throw std::runtime_error("cannot write temp wcnf file");
      }
      off += static_cast<size_t>(n);
    }
    close(fd);
  }

  std::vector<std::string> args;
  std::istringstream cs(command);
  std::string tok;
  while (cs >> tok) args.push_back(tok);
  if (args.empty()) {
    unlink(path);
    throw std::runtime_error("empty solver command");
  }
  args.push_back(path);

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    unlink(path);
    throw std::runtime_error("pipe failed");
  }
  pid_t pid = fork();
  if (pid < 0) {
    unlink(path);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(pipefd[1]);

  std::string output;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s > 0 ? timeout_s : 86400.0));
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    struct pollfd pfd{pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (pr < 0) break;
    if (pr == 0) continue;
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<size_t>(n));
  }
  close(pipefd[0]);
  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    unlink(path);
    MaxSatOutcome out;
    out.status = Status::Unknown;
    return out;
  }
  int wstatus = 0;
  waitpid(pid, &wstatus, 0);
  unlink(path);

  bool has_status = output.find("\ns ") != std::string::npos || output.rfind("s ", 0) == 0;
  if (!has_status) {
    if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127)
      throw SolverCrash("solver command not found: " + args[0]);
    if (!WIFEXITED(wstatus) || WEXITSTATUS(wstatus) != 0)
      throw SolverCrash("solver exited abnormally without a status line");
    throw OutputParseError("solver produced no status line");
  }
  return parse_solver_output(output, w);
}

}  // namespace maxreal::msat
