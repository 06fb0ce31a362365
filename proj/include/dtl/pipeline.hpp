#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtl/product.hpp"
#include "dtl/structure.hpp"
#include "dtl/tableau.hpp"

namespace dtl {

// per-agent tableau automata sharing one closure table, each degeneralized,
// with every automaton state mapped back to its closure bit assignment
struct TableauProduct {
  std::shared_ptr<ClosureTable> table;
  std::vector<TableauAutomaton> tableaux;
  std::vector<DegeneralizedNba<Valuation>> comps;
  std::vector<std::vector<SmallBitset>> comp_bits;  // per agent, per component state
};

inline TableauProduct build_tableau_product(const DistributedSignature& sig,
                                            const GlobalFormula& alpha) {
  TableauProduct tp;
  tp.table = std::make_shared<ClosureTable>(sig, alpha, true);
  for (int i = 0; i < sig.num_agents(); ++i) {
    tp.tableaux.push_back(build_tableau_gnba(*tp.table, i));
    tp.comps.push_back(degeneralize(tp.tableaux.back().gnba));
    std::vector<SmallBitset> bits;
    for (int s = 0; s < tp.comps.back().nba.num_states(); ++s)
      bits.push_back(tp.tableaux.back().state_bits[tp.comps.back().origin_state[s]]);
    tp.comp_bits.push_back(std::move(bits));
  }
  return tp;
}

// where the communication coherence condition is enforced: on every product
// state, or only as an agent enters a state by participating
enum class CommScope { StateLevel, EntryLevel };

namespace detail {

// shared constraint tests over a tuple's per-agent closure bits
struct CommRules {
  const ClosureTable* tab = nullptr;

  // coherence: a communication formula held by the speaker forces its body
  // at the listed peer
  bool coherent(int i, const SmallBitset& bi,
                const std::vector<const SmallBitset*>& all) const {
    for (int c : tab->comm_ids(i)) {
      if (!bi.test(c)) continue;
      const ClosureTable::Item& it = tab->item(c);
      if (!tab->holds(*all[it.peer], it.a)) return false;
    }
    return true;
  }

  // joint-move target checks; dom is the participating-agent mask of the
  // letter, bits are the target tuple's per-agent assignments
  bool move_ok(unsigned dom, const std::vector<const SmallBitset*>& bits,
               bool entry_coherence) const {
    int n = tab->num_agents();
    for (int i = 0; i < n; ++i) {
      if (!(dom & (1u << i))) continue;
      for (int c : tab->comm_ids(i)) {
        const ClosureTable::Item& it = tab->item(c);
        bool speaks = bits[i]->test(c);
        // a participating agent may claim a communication only when the
        // peer took part in the same move
        if (speaks && !(dom & (1u << it.peer))) return false;
        // when both sides participate the claim must match the peer's body
        if (dom & (1u << it.peer)) {
          bool body = tab->holds(*bits[it.peer], it.a);
          if (body && !speaks) return false;
          if (entry_coherence && speaks && !body) return false;
        }
      }
    }
    return true;
  }
};

}  // namespace detail

// product of the tableau automata with the communication semantics imposed,
// trimmed to states that are reachable and can still continue forever
struct ConstrainedDnba {
  Dnba<Valuation> dnba;
  std::shared_ptr<ClosureTable> table;
  std::vector<std::vector<SmallBitset>> state_bits;  // per state, per agent
  CommScope scope = CommScope::StateLevel;
};

inline ConstrainedDnba constrain_dtl(const DistributedSignature& sig, const GlobalFormula& alpha,
                                     CommScope scope = CommScope::StateLevel,
                                     const Budget& budget = {}) {
  TableauProduct tp = build_tableau_product(sig, alpha);
  const ClosureTable& tab = *tp.table;
  int n = sig.num_agents();
  std::vector<Nba<Valuation>> comps;
  for (auto& d : tp.comps) comps.push_back(d.nba);
  Dnba<Valuation> full = build_product(comps, std::vector<std::string>(sig.agents()), budget);

  auto bits_of = [&](const std::vector<int>& t) {
    std::vector<const SmallBitset*> b(n);
    for (int i = 0; i < n; ++i) b[i] = &tp.comp_bits[i][t[i]];
    return b;
  };
  detail::CommRules rules{&tab};

  int nq = full.num_states();
  std::vector<bool> keep(nq, true);
  if (scope == CommScope::StateLevel) {
    for (int q = 0; q < nq; ++q) {
      auto b = bits_of(full.tuples[q]);
      for (int i = 0; i < n && keep[q]; ++i)
        if (!rules.coherent(i, *b[i], b)) keep[q] = false;
    }
  }

  // initial states must agree on the truth of every global formula
  std::vector<int> init;
  for (int q : full.initial) {
    if (!keep[q]) continue;
    auto b = bits_of(full.tuples[q]);
    bool agree = true;
    SmallBitset g0 = *b[0] & tab.globals_mask();
    for (int i = 1; i < n && agree; ++i)
      if (!((*b[i] & tab.globals_mask()) == g0)) agree = false;
    if (agree) init.push_back(q);
  }

  // surviving edges: sources and targets kept, joint-move checks pass
  std::vector<std::vector<std::vector<int>>> delta(nq);
  for (int q = 0; q < nq; ++q) {
    delta[q].resize(full.num_letters());
    if (!keep[q]) continue;
    for (int a = 0; a < full.num_letters(); ++a) {
      unsigned dom = (unsigned)full.alphabet[a].domain_mask();
      for (int r : full.succ(q, a)) {
        if (!keep[r]) continue;
        auto b = bits_of(full.tuples[r]);
        if (rules.move_ok(dom, b, scope == CommScope::EntryLevel)) delta[q][a].push_back(r);
      }
    }
  }

  // reachable from the initial states
  std::vector<bool> reach(nq, false);
  std::deque<int> bfs(init.begin(), init.end());
  for (int q : init) reach[q] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    for (int a = 0; a < full.num_letters(); ++a)
      for (int r : delta[q][a])
        if (!reach[r]) { reach[r] = true; bfs.push_back(r); }
  }

  // productive: some infinite path remains, i.e. a cycle is still reachable
  std::vector<std::vector<int>> adj(nq);
  for (int q = 0; q < nq; ++q) {
    if (!reach[q]) continue;
    for (int a = 0; a < full.num_letters(); ++a)
      for (int r : delta[q][a])
        if (reach[r]) adj[q].push_back(r);
  }
  std::vector<int> comp;
  detail::scc_decompose(adj, comp);
  std::vector<bool> in_cycle(nq, false);
  {
    std::map<int, int> size;
    for (int q = 0; q < nq; ++q)
      if (reach[q]) ++size[comp[q]];
    for (int q = 0; q < nq; ++q) {
      if (!reach[q]) continue;
      if (size[comp[q]] > 1) in_cycle[q] = true;
      for (int r : adj[q])
        if (r == q) in_cycle[q] = true;
    }
  }
  std::vector<bool> productive(nq, false);
  {
    // walk edges backwards from cycle members
    std::vector<std::vector<int>> radj(nq);
    for (int q = 0; q < nq; ++q)
      for (int r : adj[q]) radj[r].push_back(q);
    std::deque<int> owork;
    for (int q = 0; q < nq; ++q)
      if (in_cycle[q]) { productive[q] = true; owork.push_back(q); }
    while (!owork.empty()) {
      int q = owork.front();
      owork.pop_front();
      for (int p : radj[q])
        if (!productive[p]) { productive[p] = true; owork.push_back(p); }
    }
  }

  ConstrainedDnba out;
  out.table = tp.table;
  out.scope = scope;
  out.dnba.agent_names = std::vector<std::string>(sig.agents());
  out.dnba.components = comps;
  std::vector<int> newid(nq, -1);
  for (int q = 0; q < nq; ++q) {
    if (!(reach[q] && productive[q])) continue;
    newid[q] = out.dnba.add_state(full.state_names[q]);
    out.dnba.tuples.push_back(full.tuples[q]);
    std::vector<SmallBitset> sb;
    for (int i = 0; i < n; ++i) sb.push_back(tp.comp_bits[i][full.tuples[q][i]]);
    out.state_bits.push_back(std::move(sb));
  }
  for (const auto& a : full.alphabet) out.dnba.add_letter(a);
  for (int i = 0; i < n; ++i) {
    int fam = out.dnba.add_family();
    for (int q = 0; q < nq; ++q)
      if (newid[q] >= 0 && full.families[i][q]) out.dnba.mark_accepting(fam, newid[q]);
  }
  for (int q = 0; q < nq; ++q) {
    if (newid[q] < 0) continue;
    for (int a = 0; a < full.num_letters(); ++a)
      for (int r : delta[q][a])
        if (newid[r] >= 0) out.dnba.add_edge_idx(newid[q], a, newid[r]);
  }
  for (int q : init)
    if (newid[q] >= 0) out.dnba.mark_initial(newid[q]);
  return out;
}

namespace detail {

// reachable constrained product, built on the fly; entry-scope coherence,
// since that is what the soundness argument needs at participation points
struct ReachableProduct {
  Dnba<Valuation> dnba;
  std::vector<std::vector<SmallBitset>> state_bits;
};

inline ReachableProduct explore_constrained(const TableauProduct& tp, const Budget& budget) {
  const ClosureTable& tab = *tp.table;
  const DistributedSignature& sig = tab.sig();
  int n = sig.num_agents();
  CommRules rules{&tab};

  ReachableProduct out;
  out.dnba.agent_names = std::vector<std::string>(sig.agents());
  for (const auto& d : tp.comps) out.dnba.components.push_back(d.nba);
  for (int i = 0; i < n; ++i) out.dnba.add_family();

  std::map<std::vector<int>, int> index;
  auto intern = [&](const std::vector<int>& t) {
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    int q = out.dnba.add_state(tuple_name(out.dnba.components, t));
    budget.charge(q + 1);
    index.emplace(t, q);
    out.dnba.tuples.push_back(t);
    std::vector<SmallBitset> sb;
    for (int i = 0; i < n; ++i) sb.push_back(tp.comp_bits[i][t[i]]);
    out.state_bits.push_back(std::move(sb));
    for (int i = 0; i < n; ++i)
      if (tp.comps[i].nba.accepting[t[i]]) out.dnba.mark_accepting(i, q);
    return q;
  };

  // per agent, the letters its component can read from a given state: they
  // agree with the state's closure propositions and are free elsewhere
  auto agreeing_letters = [&](int i, int s) {
    std::vector<int> ls;
    const Nba<Valuation>& c = tp.comps[i].nba;
    for (int a = 0; a < c.num_letters(); ++a)
      if (!c.succ(s, a).empty()) ls.push_back(a);
    return ls;
  };

  // initial tuples: all initial combinations agreeing on global formulas
  {
    std::vector<size_t> pick(n, 0);
    bool more = true;
    for (int i = 0; i < n; ++i)
      if (tp.comps[i].nba.initial.empty()) more = false;
    while (more) {
      std::vector<int> t(n);
      for (int i = 0; i < n; ++i) t[i] = tp.comps[i].nba.initial[pick[i]];
      SmallBitset g0 = tp.comp_bits[0][t[0]] & tab.globals_mask();
      bool agree = true;
      for (int i = 1; i < n && agree; ++i)
        if (!((tp.comp_bits[i][t[i]] & tab.globals_mask()) == g0)) agree = false;
      if (agree) out.dnba.mark_initial(intern(t));
      more = false;
      for (int i = n - 1; i >= 0; --i) {
        if (++pick[i] < tp.comps[i].nba.initial.size()) { more = true; break; }
        pick[i] = 0;
      }
    }
  }

  std::deque<int> work(out.dnba.initial.begin(), out.dnba.initial.end());
  std::vector<const SmallBitset*> tb(n);
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    std::vector<int> src = out.dnba.tuples[q];  // copy: tuples vector grows
    for (unsigned dom = 1; dom < (1u << n); ++dom) {
      // letter choices and successor sets per participating agent
      std::vector<int> who;
      for (int i = 0; i < n; ++i)
        if (dom & (1u << i)) who.push_back(i);
      std::vector<std::vector<int>> letters(who.size());
      bool dead = false;
      for (size_t k = 0; k < who.size() && !dead; ++k) {
        letters[k] = agreeing_letters(who[k], src[who[k]]);
        if (letters[k].empty()) dead = true;
      }
      if (dead) continue;
      std::vector<size_t> lp(who.size(), 0);
      bool lmore = true;
      while (lmore) {
        BasicLetter<Valuation> letter;
        for (size_t k = 0; k < who.size(); ++k)
          letter.add(who[k], tp.comps[who[k]].nba.alphabet[letters[k][lp[k]]]);
        int a = out.dnba.add_letter(letter);

        std::vector<std::vector<int>> choice(n);
        for (int i = 0; i < n; ++i) choice[i] = {src[i]};
        for (size_t k = 0; k < who.size(); ++k)
          choice[who[k]] = tp.comps[who[k]].nba.succ(src[who[k]], letters[k][lp[k]]);
        std::vector<size_t> pick(n, 0);
        bool more = true;
        for (int i = 0; i < n; ++i)
          if (choice[i].empty()) more = false;
        while (more) {
          std::vector<int> t(n);
          for (int i = 0; i < n; ++i) t[i] = choice[i][pick[i]];
          for (int i = 0; i < n; ++i) tb[i] = &tp.comp_bits[i][t[i]];
          if (rules.move_ok(dom, tb, true)) {
            int before = out.dnba.num_states();
            int r = intern(t);
            out.dnba.add_edge_idx(q, a, r);
            if (r == before) work.push_back(r);
          }
          more = false;
          for (int i = n - 1; i >= 0; --i) {
            if (++pick[i] < choice[i].size()) { more = true; break; }
            pick[i] = 0;
          }
        }
        lmore = false;
        for (int k = (int)who.size() - 1; k >= 0; --k) {
          if (++lp[k] < letters[k].size()) { lmore = true; break; }
          lp[k] = 0;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// emptiness of the constrained product under fairness: a lasso word whose
// loop lets every agent move infinitely often and satisfies every agent's
// acceptance family, together with the product run witnessing it
inline std::optional<std::pair<LassoWord, LassoRun>> satisfiable(const DistributedSignature& sig,
                                                                 const GlobalFormula& alpha,
                                                                 const Budget& budget = {}) {
  TableauProduct tp = build_tableau_product(sig, alpha);
  detail::ReachableProduct rp = detail::explore_constrained(tp, budget);
  const Dnba<Valuation>& D = rp.dnba;
  int n = D.num_agents();
  int obligations = 2 * n;  // n acceptance families, then n participation duties

  // fairness-aware layer: track the last letter's participants and a rotating
  // obligation counter; accepting means obligation 0 is due and met
  Nba<GlobalLetter> fair;
  for (int a = 0; a < D.num_letters(); ++a) fair.add_letter(D.alphabet[a]);

  struct Node { int q; unsigned dom; int c; };
  std::map<std::tuple<int, unsigned, int>, int> index;
  std::vector<Node> nodes;
  auto met = [&](const Node& nd) {
    if (nd.c < n) return (bool)D.families[nd.c][nd.q];
    return (nd.dom & (1u << (nd.c - n))) != 0;
  };
  auto intern = [&](int q, unsigned dom, int c) {
    auto key = std::make_tuple(q, dom, c);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    Node nd{q, dom, c};
    int id = fair.add_state(D.state_names[q] + "#" + std::to_string(dom) + "." + std::to_string(c),
                            c == 0 && met(nd));
    budget.charge(id + 1);
    index.emplace(key, id);
    nodes.push_back(nd);
    return id;
  };

  std::deque<int> work;
  for (int q : D.initial) {
    int id = intern(q, 0u, 0);
    fair.mark_initial(id);
    work.push_back(id);
  }
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    Node nd = nodes[v];
    int c2 = met(nd) ? (nd.c + 1) % obligations : nd.c;
    for (int a = 0; a < D.num_letters(); ++a)
      for (int r : D.succ(nd.q, a)) {
        unsigned dom2 = (unsigned)D.alphabet[a].domain_mask();
        int before = fair.num_states();
        int w = intern(r, dom2, c2);
        fair.add_edge_idx(v, a, w);
        if (w == before) work.push_back(w);
      }
  }

  auto hit = find_accepting_lasso(fair);
  if (!hit) return std::nullopt;
  const LassoWord& word = hit->first;

  // fold the layered run back onto the product
  LassoRun prun;
  for (int s : hit->second.prefix) prun.prefix.push_back(nodes[s].q);
  for (int s : hit->second.loop) prun.loop.push_back(nodes[s].q);

  // the witness must pass both the automaton route and the trace semantics
  DnbaVerdict v = dnba_lasso_accepts(D, word);
  if (!v.accepted) throw InternalError("extracted witness rejected by the constrained product");
  LassoStructure mu = derive_structure(sig, word);
  if (!sat_global(mu, alpha))
    throw InternalError("extracted witness fails the trace semantics");
  return std::make_pair(word, prun);
}

}  // namespace dtl
