#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dtl/base.hpp"
#include "dtl/word.hpp"

namespace dtl {

// shared automaton core: opaque letters with order+equality, dense transition
// table, deterministic iteration everywhere
template <typename Sym>
struct AutomatonCore {
  std::vector<Sym> alphabet;
  std::vector<std::string> state_names;
  std::vector<std::vector<std::vector<int>>> delta;  // [state][letter] -> sorted targets
  std::vector<int> initial;                          // sorted

  int num_states() const { return (int)delta.size(); }
  int num_letters() const { return (int)alphabet.size(); }

  int add_state(std::string name = "") {
    delta.emplace_back(alphabet.size());
    int q = (int)delta.size() - 1;
    state_names.push_back(name.empty() ? "s" + std::to_string(q) : std::move(name));
    return q;
  }
  int add_letter(const Sym& s) {
    auto it = letter_index_.find(s);
    if (it != letter_index_.end()) return it->second;
    alphabet.push_back(s);
    int a = (int)alphabet.size() - 1;
    letter_index_.emplace(s, a);
    for (auto& row : delta) row.emplace_back();
    return a;
  }
  int letter_index(const Sym& s) const {
    auto it = letter_index_.find(s);
    return it == letter_index_.end() ? -1 : it->second;
  }
  void add_edge_idx(int q, int a, int r) {
    auto& v = delta.at(q).at(a);
    auto it = std::lower_bound(v.begin(), v.end(), r);
    if (it == v.end() || *it != r) v.insert(it, r);
  }
  void add_edge(int q, const Sym& s, int r) { add_edge_idx(q, add_letter(s), r); }
  void mark_initial(int q) {
    auto it = std::lower_bound(initial.begin(), initial.end(), q);
    if (it == initial.end() || *it != q) initial.insert(it, q);
  }
  const std::vector<int>& succ(int q, int a) const { return delta.at(q).at(a); }

 private:
  std::map<Sym, int> letter_index_;
};

template <typename Sym>
struct Nba : AutomatonCore<Sym> {
  std::vector<bool> accepting;
  int add_state(std::string name = "", bool acc = false) {
    int q = AutomatonCore<Sym>::add_state(std::move(name));
    accepting.resize(q + 1, false);
    accepting[q] = acc;
    return q;
  }
};

template <typename Sym>
struct Gnba : AutomatonCore<Sym> {
  std::vector<std::vector<bool>> families;  // each sized num_states
  int add_state(std::string name = "") {
    int q = AutomatonCore<Sym>::add_state(std::move(name));
    for (auto& f : families) f.resize(q + 1, false);
    return q;
  }
  int add_family() {
    families.emplace_back(this->num_states(), false);
    return (int)families.size() - 1;
  }
  void mark_accepting(int family, int q) { families.at(family).at(q) = true; }
};

// states aligned with a lasso word's letters: prefix[k] consumes letter k,
// then the loop repeats forever (its length is a multiple of the word's loop)
struct LassoRun {
  std::vector<int> prefix;
  std::vector<int> loop;

  int state_at(long long k) const {
    long long p = (long long)prefix.size();
    if (k < p) return prefix[(std::size_t)k];
    return loop[(std::size_t)((k - p) % loop.size())];
  }
};

namespace detail {

// strongly connected components, iterative Tarjan; returns component id per
// node (-1 for nodes with no adjacency entry) and the component count;
// components are numbered in completion order (reverse topological)
inline int scc_decompose(const std::vector<std::vector<int>>& adj, std::vector<int>& comp) {
  int n = (int)adj.size();
  comp.assign(n, -1);
  std::vector<int> low(n, -1), num(n, -1), stack_mem;
  std::vector<bool> on_stack(n, false);
  int counter = 0, comps = 0;
  struct Frame { int v; std::size_t edge; };
  std::vector<Frame> frames;
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    frames.push_back({root, 0});
    num[root] = low[root] = counter++;
    stack_mem.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        int w = adj[f.v][f.edge++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack_mem.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == num[v]) {
          while (true) {
            int w = stack_mem.back();
            stack_mem.pop_back();
            on_stack[w] = false;
            comp[w] = comps;
            if (w == v) break;
          }
          ++comps;
        }
      }
    }
  }
  return comps;
}

// shortest path from -> target set inside an allowed-node filter, via BFS
// over adj; returns the node sequence including both ends, or empty when
// absent; target hits are detected on edge arrival so a path may legitimately
// come back to its start
inline std::vector<int> bfs_path(const std::vector<std::vector<int>>& adj, int from,
                                 const std::function<bool(int)>& target,
                                 const std::function<bool(int)>& allowed,
                                 bool at_least_one_edge) {
  if (!at_least_one_edge && target(from)) return {from};
  int n = (int)adj.size();
  std::vector<int> parent(n, -2);
  parent[from] = -1;
  std::queue<int> q;
  q.push(from);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (!allowed(w)) continue;
      if (target(w)) {
        std::vector<int> path;
        for (int x = v; x != -1; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        path.push_back(w);
        return path;
      }
      if (parent[w] != -2) continue;
      parent[w] = v;
      q.push(w);
    }
  }
  return {};
}

}  // namespace detail

// search for an accepting lasso run over the position-unfolded graph of an
// automaton against a fixed lasso word; obligations are state masks that must
// all be visited inside the loop
inline std::optional<LassoRun> lasso_run_search(
    int num_states, const std::vector<int>& initial,
    const std::function<const std::vector<int>&(int state, int pos)>& succ,
    int prefix_len, int loop_len,
    const std::vector<const std::vector<bool>*>& obligations) {
  if (loop_len <= 0) return std::nullopt;
  int positions = prefix_len + loop_len;
  auto node_of = [&](int pos, int q) { return pos * num_states + q; };
  auto pos_of = [&](int node) { return node / num_states; };
  auto state_of = [&](int node) { return node % num_states; };
  auto next_pos = [&](int pos) { return pos + 1 < positions ? pos + 1 : prefix_len; };

  // reachable node set and adjacency
  std::vector<std::vector<int>> adj((std::size_t)positions * num_states);
  std::vector<bool> reached(adj.size(), false);
  std::vector<int> order;
  std::queue<int> bfs;
  for (int q : initial) {
    int v = node_of(0, q);
    if (!reached[v]) { reached[v] = true; bfs.push(v); }
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    order.push_back(v);
    int p = pos_of(v), np = next_pos(p);
    for (int r : succ(state_of(v), p)) {
      int w = node_of(np, r);
      adj[v].push_back(w);
      if (!reached[w]) { reached[w] = true; bfs.push(w); }
    }
  }

  std::vector<int> comp;
  int comps = detail::scc_decompose(adj, comp);
  if (comps == 0) return std::nullopt;
  std::vector<bool> nontrivial(comps, false);
  std::vector<int> comp_size(comps, 0);
  for (int v : order) comp_size[comp[v]]++;
  for (int v : order)
    for (int w : adj[v])
      if (comp[w] == comp[v] && (comp_size[comp[v]] > 1 || w == v)) nontrivial[comp[v]] = true;
  std::vector<std::vector<bool>> comp_ok(comps, std::vector<bool>(obligations.size(), false));
  for (int v : order)
    for (std::size_t t = 0; t < obligations.size(); ++t)
      if ((*obligations[t])[state_of(v)]) comp_ok[comp[v]][t] = true;

  int chosen = -1;
  for (int v : order) {  // first suitable component in reach order
    int c = comp[v];
    if (!nontrivial[c]) continue;
    bool ok = true;
    for (std::size_t t = 0; t < obligations.size() && ok; ++t) ok = comp_ok[c][t];
    if (ok) { chosen = c; break; }
  }
  if (chosen < 0) return std::nullopt;

  auto in_chosen = [&](int v) { return reached[v] && comp[v] == chosen; };
  // entry path from an initial node into the component
  std::vector<int> path;
  for (int q : initial) {
    int v = node_of(0, q);
    if (in_chosen(v)) { path = {v}; break; }
  }
  if (path.empty()) {
    for (int q : initial) {
      int v = node_of(0, q);
      path = detail::bfs_path(adj, v, in_chosen, [&](int) { return true; }, false);
      if (!path.empty()) break;
    }
  }
  if (path.empty()) throw InternalError("accepting component unreachable after selection");

  // cycle through every obligation and back, inside the component
  int u = path.back();
  std::vector<int> cycle = {u};
  int cur = u;
  for (std::size_t t = 0; t < obligations.size(); ++t) {
    const auto& mask = *obligations[t];
    auto seg = detail::bfs_path(
        adj, cur, [&](int v) { return mask[state_of(v)]; }, in_chosen, false);
    if (seg.empty()) throw InternalError("obligation vanished inside component");
    cycle.insert(cycle.end(), seg.begin() + 1, seg.end());
    cur = cycle.back();
  }
  auto back = detail::bfs_path(
      adj, cur, [&](int v) { return v == u; }, in_chosen, true);
  if (back.empty()) throw InternalError("cannot close cycle inside component");
  cycle.insert(cycle.end(), back.begin() + 1, back.end());

  LassoRun run;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) run.prefix.push_back(state_of(path[k]));
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) run.loop.push_back(state_of(cycle[k]));
  return run;
}

namespace detail {

template <typename Sym>
std::optional<std::vector<int>> word_letter_indices(const AutomatonCore<Sym>& A,
                                                    const BasicLasso<Sym>& w) {
  std::vector<int> out;
  for (const auto& s : w.prefix) {
    int a = A.letter_index(s);
    if (a < 0) return std::nullopt;
    out.push_back(a);
  }
  for (const auto& s : w.loop) {
    int a = A.letter_index(s);
    if (a < 0) return std::nullopt;
    out.push_back(a);
  }
  return out;
}

// structural run check shared by acceptance validators
template <typename Sym>
bool run_steps_ok(const AutomatonCore<Sym>& A, const BasicLasso<Sym>& w, const LassoRun& run) {
  long long P = w.prefix_len(), L = w.loop_len();
  long long T1 = (long long)run.prefix.size(), T2 = (long long)run.loop.size();
  if (T2 <= 0 || L <= 0) return false;
  if (T1 < P || T2 % L != 0) return false;
  if (!std::binary_search(A.initial.begin(), A.initial.end(), run.state_at(0))) return false;
  for (long long k = 0; k < T1 + T2; ++k) {
    int a = A.letter_index(w.letter_at(k));
    if (a < 0) return false;
    const auto& ss = A.succ(run.state_at(k), a);
    if (!std::binary_search(ss.begin(), ss.end(), run.state_at(k + 1))) return false;
  }
  return true;
}

}  // namespace detail

template <typename Sym>
bool run_fits(const Nba<Sym>& A, const BasicLasso<Sym>& w, const LassoRun& run) {
  if (!detail::run_steps_ok(A, w, run)) return false;
  for (int q : run.loop)
    if (A.accepting[q]) return true;
  return false;
}

template <typename Sym>
bool run_fits(const Gnba<Sym>& G, const BasicLasso<Sym>& w, const LassoRun& run) {
  if (!detail::run_steps_ok(G, w, run)) return false;
  for (const auto& fam : G.families) {
    bool hit = false;
    for (int q : run.loop)
      if (fam[q]) { hit = true; break; }
    if (!hit) return false;
  }
  return true;
}

// acceptance of an ultimately periodic word, with a witness run when accepted
template <typename Sym>
std::optional<LassoRun> nba_lasso_accepts(const Nba<Sym>& A, const BasicLasso<Sym>& w) {
  auto letters = detail::word_letter_indices(A, w);
  if (!letters || w.loop.empty()) return std::nullopt;
  auto succ = [&](int q, int pos) -> const std::vector<int>& {
    return A.succ(q, (*letters)[pos]);
  };
  std::vector<const std::vector<bool>*> obligations = {&A.accepting};
  auto run = lasso_run_search(A.num_states(), A.initial, succ, w.prefix_len(), w.loop_len(),
                              obligations);
  if (run && !run_fits(A, w, *run)) throw InternalError("extracted run fails validation");
  return run;
}

template <typename Sym>
std::optional<LassoRun> gnba_lasso_accepts(const Gnba<Sym>& G, const BasicLasso<Sym>& w) {
  auto letters = detail::word_letter_indices(G, w);
  if (!letters || w.loop.empty()) return std::nullopt;
  auto succ = [&](int q, int pos) -> const std::vector<int>& {
    return G.succ(q, (*letters)[pos]);
  };
  std::vector<const std::vector<bool>*> obligations;
  for (const auto& fam : G.families) obligations.push_back(&fam);
  auto run = lasso_run_search(G.num_states(), G.initial, succ, w.prefix_len(), w.loop_len(),
                              obligations);
  if (run && !run_fits(G, w, *run)) throw InternalError("extracted run fails validation");
  return run;
}

// counter construction; the full (state x counter) set is materialized and
// each output state remembers where it came from
template <typename Sym>
struct DegeneralizedNba {
  Nba<Sym> nba;
  std::vector<int> origin_state;    // per output state
  std::vector<int> origin_counter;  // per output state
};

template <typename Sym>
DegeneralizedNba<Sym> degeneralize(const Gnba<Sym>& G) {
  int K = std::max<int>(1, (int)G.families.size());
  int n = G.num_states();
  DegeneralizedNba<Sym> out;
  for (const auto& s : G.alphabet) out.nba.add_letter(s);
  for (int c = 0; c < K; ++c)
    for (int q = 0; q < n; ++q) {
      bool acc = G.families.empty() ? true : (c == 0 && G.families[0][q]);
      out.nba.add_state(G.state_names[q] + "." + std::to_string(c), acc);
      out.origin_state.push_back(q);
      out.origin_counter.push_back(c);
    }
  auto id_of = [&](int q, int c) { return c * n + q; };
  for (int c = 0; c < K; ++c)
    for (int q = 0; q < n; ++q) {
      // the counter advances when the source state discharges obligation c
      int c2 = (!G.families.empty() && G.families[c][q]) ? (c + 1) % K : c;
      for (int a = 0; a < G.num_letters(); ++a)
        for (int r : G.succ(q, a)) out.nba.add_edge_idx(id_of(q, c), a, id_of(r, c2));
    }
  for (int q0 : G.initial) out.nba.mark_initial(id_of(q0, 0));
  return out;
}

// emptiness with verified witness extraction
template <typename Sym>
std::optional<std::pair<BasicLasso<Sym>, LassoRun>> find_accepting_lasso(const Nba<Sym>& A) {
  int n = A.num_states();
  if (n == 0) return std::nullopt;
  // reachable subgraph, remembering one letter per edge (first in order)
  std::vector<std::vector<int>> adj(n);
  std::vector<std::map<int, int>> edge_letter(n);  // target -> letter index
  std::vector<bool> reached(n, false);
  std::queue<int> bfs;
  std::vector<int> order;
  for (int q : A.initial)
    if (!reached[q]) { reached[q] = true; bfs.push(q); }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    order.push_back(v);
    for (int a = 0; a < A.num_letters(); ++a)
      for (int r : A.succ(v, a)) {
        if (edge_letter[v].emplace(r, a).second) adj[v].push_back(r);
        if (!reached[r]) { reached[r] = true; bfs.push(r); }
      }
  }
  std::vector<int> comp;
  int comps = detail::scc_decompose(adj, comp);
  if (comps == 0) return std::nullopt;
  std::vector<int> comp_size(comps, 0);
  std::vector<bool> nontrivial(comps, false), has_acc(comps, false);
  for (int v : order) comp_size[comp[v]]++;
  for (int v : order) {
    if (A.accepting[v]) has_acc[comp[v]] = true;
    for (int w : adj[v])
      if (comp[w] == comp[v] && (comp_size[comp[v]] > 1 || w == v)) nontrivial[comp[v]] = true;
  }
  int chosen = -1;
  for (int v : order)
    if (nontrivial[comp[v]] && has_acc[comp[v]]) { chosen = comp[v]; break; }
  if (chosen < 0) return std::nullopt;

  auto in_chosen = [&](int v) { return reached[v] && comp[v] == chosen; };
  std::vector<int> path;
  for (int q : A.initial) {
    if (in_chosen(q)) { path = {q}; break; }
  }
  if (path.empty())
    for (int q : A.initial) {
      path = detail::bfs_path(adj, q, in_chosen, [&](int) { return true; }, false);
      if (!path.empty()) break;
    }
  if (path.empty()) throw InternalError("accepting component unreachable after selection");
  int u = path.back();
  auto to_acc = detail::bfs_path(
      adj, u, [&](int v) { return (bool)A.accepting[v]; }, in_chosen, false);
  if (to_acc.empty()) throw InternalError("accepting state vanished inside component");
  auto back = detail::bfs_path(
      adj, to_acc.back(), [&](int v) { return v == u; }, in_chosen, true);
  if (back.empty()) throw InternalError("cannot close cycle inside component");
  std::vector<int> cycle = to_acc;
  cycle.insert(cycle.end(), back.begin() + 1, back.end());

  BasicLasso<Sym> word;
  LassoRun run;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    run.prefix.push_back(path[k]);
    word.prefix.push_back(A.alphabet[edge_letter[path[k]].at(path[k + 1])]);
  }
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
    run.loop.push_back(cycle[k]);
    word.loop.push_back(A.alphabet[edge_letter[cycle[k]].at(cycle[k + 1])]);
  }
  if (!run_fits(A, word, run) || !nba_lasso_accepts(A, word))
    throw InternalError("extracted emptiness witness fails validation");
  return std::make_pair(std::move(word), std::move(run));
}

}  // namespace dtl
