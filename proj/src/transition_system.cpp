#include "maxreal/transition_system.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace maxreal::ts {

using automata::RelaxedAutomaton;
using automata::SymbolicAutomaton;
using ltl::Formula;

std::set<std::string> TransitionSystem::letter_of(std::uint32_t iv, std::uint32_t ov) const {
  std::set<std::string> letter;
  for (size_t i = 0; i < inputs.size(); ++i)
    if (iv >> i & 1) letter.insert(inputs[i]);
  for (size_t i = 0; i < outputs.size(); ++i)
    if (ov >> i & 1) letter.insert(outputs[i]);
  return letter;
}

std::set<std::string> TransitionSystem::letter(int s, int iv) const {
  return letter_of(iv, tr[s][iv].out);
}

void TransitionSystem::validate() const {
  if (num_states <= 0) throw std::runtime_error("transition system has no states");
  if (static_cast<int>(tr.size()) != num_states)
    throw std::runtime_error("transition table size mismatch");
  for (const auto& row : tr) {
    if (static_cast<int>(row.size()) != num_input_valuations())
      throw std::runtime_error("transition system is not input-enabled");
    for (const Step& st : row)
      if (st.succ < 0 || st.succ >= num_states)
        throw std::runtime_error("successor index out of range");
  }
}

std::vector<std::vector<int>> RunGraph::edges_from() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (size_t i = 0; i < edges.size(); ++i) out[edges[i].src].push_back(static_cast<int>(i));
  return out;
}

namespace {

RunGraph product(const SymbolicAutomaton& a, const TransitionSystem& t,
                 const std::set<int>& rej_edges) {
  std::set<std::string> declared(t.inputs.begin(), t.inputs.end());
  declared.insert(t.outputs.begin(), t.outputs.end());
  for (const auto& e : a.edges)
    for (const auto& p : ltl::atoms(e.guard))
      if (!declared.count(p))
        throw std::runtime_error("automaton guard mentions undeclared proposition: " + p);

  RunGraph g;
  auto from = a.edges_from();
  std::map<std::pair<int, int>, int> index;
  auto intern = [&](int s, int q) {
    auto [it, fresh] = index.try_emplace({s, q}, static_cast<int>(g.nodes.size()));
    if (fresh) g.nodes.emplace_back(s, q);
    return std::pair<int, bool>(it->second, fresh);
  };
  std::deque<int> work;
  g.initial = intern(t.initial, a.initial).first;
  work.push_back(g.initial);
  std::set<int> done;
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    if (!done.insert(v).second) continue;
    auto [s, q] = g.nodes[v];
    for (int iv = 0; iv < t.num_input_valuations(); ++iv) {
      const auto& step = t.tr[s][iv];
      std::set<std::string> letter = t.letter(s, iv);
      for (int ei : from[q]) {
        const auto& e = a.edges[ei];
        if (!automata::eval_prop(e.guard, letter)) continue;
        auto [w, fresh] = intern(step.succ, e.dst);
        if (fresh || !done.count(w)) work.push_back(w);
        g.edges.push_back({v, iv, w, ei, a.marked[e.dst], rej_edges.count(ei) > 0});
      }
    }
  }
  return g;
}

// Tarjan SCC, iterative. Returns component id per node; ids are in reverse
// topological order (successors have smaller ids).
std::vector<int> scc_of(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> comp(n, -1), low(n), num(n, -1), stk;
  std::vector<bool> on(n, false);
  int counter = 0, comps = 0;
  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    num[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = true;
          frames.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          int c = comps++;
          int w;
          do {
            w = stk.back();
            stk.pop_back();
            on[w] = false;
            comp[w] = c;
          } while (w != f.v);
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

RunGraph run_graph(const SymbolicAutomaton& a, const TransitionSystem& t) {
  return product(a, t, {});
}

RunGraph run_graph(const RelaxedAutomaton& a, const TransitionSystem& t) {
  return product(a.base, t, a.rej_edges);
}

namespace {

// Searches the product of t and an NBA for an accepting lasso; returns the
// witness trace if one exists.
std::optional<TraceWitness> accepting_lasso(const SymbolicAutomaton& nba,
                                            const TransitionSystem& t) {
  RunGraph g = product(nba, t, {});
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  std::vector<int> comp = scc_of(n, adj);

  std::vector<bool> nontrivial(n, false);  // indexed by component id
  for (const auto& e : g.edges)
    if (comp[e.src] == comp[e.dst]) nontrivial[comp[e.src]] = true;
  int target = -1;
  for (int v = 0; v < n; ++v) {
    auto [s, q] = g.nodes[v];
    if (nba.marked[q] && nontrivial[comp[v]]) {
      target = v;
      break;
    }
  }
  if (target == -1) return std::nullopt;

  auto edges_from = g.edges_from();
  // BFS by run-graph edges; pred stores the incoming edge index.
  auto bfs = [&](int src, auto&& admit) {
    std::vector<int> pred(n, -1);
    std::deque<int> work{src};
    std::vector<bool> seen(n, false);
    seen[src] = true;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int ei : edges_from[v]) {
        const auto& e = g.edges[ei];
        if (!admit(e) || seen[e.dst]) continue;
        seen[e.dst] = true;
        pred[e.dst] = ei;
        work.push_back(e.dst);
      }
    }
    return pred;
  };

  auto letters_of_path = [&](const std::vector<int>& pred, int from, int to) {
    std::vector<std::set<std::string>> letters;
    for (int v = to; v != from;) {
      const auto& e = g.edges[pred[v]];
      letters.push_back(t.letter(g.nodes[e.src].first, e.input));
      v = e.src;
    }
    std::reverse(letters.begin(), letters.end());
    return letters;
  };

  TraceWitness w;
  if (target != g.initial) {
    auto pred = bfs(g.initial, [](const RunGraphEdge&) { return true; });
    w.prefix = letters_of_path(pred, g.initial, target);
  }
  // Cycle within the SCC through the accepting node: one step out, path back.
  int c = comp[target];
  auto in_scc = [&](const RunGraphEdge& e) { return comp[e.src] == c && comp[e.dst] == c; };
  for (int ei : edges_from[target]) {
    const auto& e = g.edges[ei];
    if (!in_scc(e)) continue;
    std::vector<std::set<std::string>> loop;
    loop.push_back(t.letter(g.nodes[target].first, e.input));
    if (e.dst != target) {
      auto pred = bfs(e.dst, in_scc);
      if (pred[target] == -1) continue;
      auto rest = letters_of_path(pred, e.dst, target);
      loop.insert(loop.end(), rest.begin(), rest.end());
    }
    w.loop = std::move(loop);
    return w;
  }
  throw std::logic_error("accepting SCC without a cycle through the accepting node");
}

}  // namespace

std::optional<TraceWitness> model_check_witness(const TransitionSystem& t, const ltl::Formula& f) {
  std::vector<std::string> props = t.inputs;
  props.insert(props.end(), t.outputs.begin(), t.outputs.end());
  SymbolicAutomaton nba = automata::ltl_to_nba(ltl::to_nnf(ltl::f_not(f)), props);
  return accepting_lasso(nba, t);
}

bool model_check(const TransitionSystem& t, const ltl::Formula& f) {
  return !model_check_witness(t, f).has_value();
}

std::vector<int> compute_value(const TransitionSystem& t,
                               const std::vector<ltl::SoftSpec>& soft) {
  size_t m = 0;
  for (const auto& s : soft) m = std::max(m, s.relax_chain.size());
  std::vector<int> value(m, 0);
  for (const auto& s : soft) {
    size_t mj = s.relax_chain.size();
    for (size_t k = 1; k <= mj; ++k) {
      // column k (1-based, weakest first) corresponds to chain[mj - k]
      if (model_check(t, s.relax_chain[mj - k])) value[k - 1] += 1;
    }
  }
  return value;
}

std::optional<FgAnnotation> compute_fg_annotation(const RelaxedAutomaton& a,
                                                  const TransitionSystem& t) {
  RunGraph g = run_graph(a, t);
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  std::vector<int> comp = scc_of(n, adj);
  for (const auto& e : g.edges)
    if (e.rej && comp[e.src] == comp[e.dst]) return std::nullopt;

  // Longest rej-count over the SCC condensation; component ids from the
  // Tarjan pass are in reverse topological order.
  int num_comps = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> comp_val(num_comps, 0);
  std::vector<std::vector<std::pair<int, int>>> comp_edges(num_comps);  // (dst comp, rej weight)
  for (const auto& e : g.edges)
    if (comp[e.src] != comp[e.dst])
      comp_edges[comp[e.src]].push_back({comp[e.dst], e.rej ? 1 : 0});
  for (int c = num_comps - 1; c >= 0; --c)
    for (auto [d, wgt] : comp_edges[c]) comp_val[d] = std::max(comp_val[d], comp_val[c] + wgt);

  FgAnnotation out;
  for (int v = 0; v < n; ++v) {
    out.value[g.nodes[v]] = comp_val[comp[v]];
    out.max_value = std::max(out.max_value, comp_val[comp[v]]);
  }
  return out;
}

bool run_graph_accepting(const SymbolicAutomaton& ucw, const TransitionSystem& t) {
  RunGraph g = run_graph(ucw, t);
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  if (ucw.acceptance == automata::Acceptance::CoBuchi) {
    std::vector<int> comp = scc_of(n, adj);
    std::vector<bool> cyclic(n, false);
    for (const auto& e : g.edges)
      if (comp[e.src] == comp[e.dst]) cyclic[comp[e.src]] = true;
    // A rejecting automaton state inside a cycle means some run visits it
    // infinitely often, so the universal co-Buchi condition fails.
    for (const auto& e : g.edges)
      if (e.dst_marked && cyclic[comp[e.dst]]) return false;
    return true;
  }
  // Universal Buchi: every branch must visit accepting states infinitely
  // often, which fails exactly when the unmarked nodes contain a cycle.
  std::vector<std::vector<int>> sub(n);
  for (const auto& e : g.edges)
    if (!ucw.marked[g.nodes[e.src].second] && !ucw.marked[g.nodes[e.dst].second])
      sub[e.src].push_back(e.dst);
  std::vector<int> comp = scc_of(n, sub);
  for (int v = 0; v < n; ++v)
    for (int w : sub[v])
      if (comp[v] == comp[w]) return false;
  return true;
}

namespace {

std::string literal_list(const std::vector<std::string>& props, std::uint32_t bits) {
  std::string out;
  for (size_t i = 0; i < props.size(); ++i) {
    if (!out.empty()) out += ' ';
    if (!(bits >> i & 1)) out += '!';
    out += props[i];
  }
  return out;
}

}  // namespace

std::string to_dot(const TransitionSystem& t) {
  std::ostringstream os;
  os << "digraph implementation {\n  rankdir=LR;\n  init [shape=point];\n  init -> s"
     << t.initial << ";\n";
  for (int s = 0; s < t.num_states; ++s) os << "  s" << s << " [shape=circle];\n";
  for (int s = 0; s < t.num_states; ++s)
    for (int iv = 0; iv < t.num_input_valuations(); ++iv) {
      const auto& step = t.tr[s][iv];
      os << "  s" << s << " -> s" << step.succ << " [label=\""
         << literal_list(t.inputs, static_cast<std::uint32_t>(iv)) << " / "
         << literal_list(t.outputs, step.out) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

TransitionSystem from_dot(const std::string& text, const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs) {
  TransitionSystem t;
  t.inputs = inputs;
  t.outputs = outputs;

  auto parse_valuation = [](const std::string& part, const std::vector<std::string>& props,
                            std::uint32_t& bits) {
    bits = 0;
    std::istringstream is(part);
    std::string lit;
    std::set<std::string> seen;
    while (is >> lit) {
      bool pos = true;
      if (!lit.empty() && lit[0] == '!') {
        pos = false;
        lit = lit.substr(1);
      }
      auto it = std::find(props.begin(), props.end(), lit);
      if (it == props.end()) throw std::runtime_error("unknown proposition in DOT label: " + lit);
      if (pos) bits |= 1u << (it - props.begin());
      seen.insert(lit);
    }
    if (seen.size() != props.size())
      throw std::runtime_error("DOT label does not mention every proposition");
  };

  std::map<int, std::map<int, TransitionSystem::Step>> table;
  int max_state = -1, initial = -1;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto arrow = line.find("->");
    if (arrow == std::string::npos) continue;
    auto src_pos = line.find('s');
    if (line.find("init") != std::string::npos) {
      auto spos = line.find('s', line.find("->"));
      if (spos != std::string::npos) initial = std::stoi(line.substr(spos + 1));
      continue;
    }
    if (src_pos == std::string::npos || src_pos > arrow) continue;
    int src = std::stoi(line.substr(src_pos + 1));
    auto dst_pos = line.find('s', arrow);
    if (dst_pos == std::string::npos) continue;
    int dst = std::stoi(line.substr(dst_pos + 1));
    auto lq = line.find("label=\"");
    if (lq == std::string::npos) continue;
    auto rq = line.find('"', lq + 7);
    std::string label = line.substr(lq + 7, rq - lq - 7);
    auto slash = label.find('/');
    if (slash == std::string::npos) throw std::runtime_error("DOT edge label without '/'");
    std::uint32_t iv = 0, ov = 0;
    parse_valuation(label.substr(0, slash), inputs, iv);
    parse_valuation(label.substr(slash + 1), outputs, ov);
    table[src][static_cast<int>(iv)] = {dst, ov};
    max_state = std::max({max_state, src, dst});
  }
  if (max_state < 0) throw std::runtime_error("no transitions found in DOT input");
  t.num_states = max_state + 1;
  t.initial = initial < 0 ? 0 : initial;
  t.tr.assign(t.num_states, std::vector<TransitionSystem::Step>(t.num_input_valuations()));
  for (int s = 0; s < t.num_states; ++s)
    for (int iv = 0; iv < t.num_input_valuations(); ++iv) {
      auto it = table.find(s);
      if (it == table.end() || !it->second.count(iv))
        throw std::runtime_error("DOT implementation is not input-enabled");
      t.tr[s][iv] = it->second[iv];
    }
  t.validate();
  return t;
}

std::string format_witness(const TraceWitness& w) {
  auto fmt = [](const std::vector<std::set<std::string>>& letters) {
    std::string out;
    for (const auto& l : letters) {
      out += '{';
      bool first = true;
      for (const auto& p : l) {
        if (!first) out += ',';
        first = false;
        out += p;
      }
      out += '}';
    }
    return out;
  };
  return fmt(w.prefix) + " (" + fmt(w.loop) + ")^w";
}

}  // namespace maxreal::ts
