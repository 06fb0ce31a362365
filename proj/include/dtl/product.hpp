#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtl/automaton.hpp"
#include "dtl/structure.hpp"
#include "dtl/tableau.hpp"
#include "dtl/word.hpp"

namespace dtl {

// product of per-agent Buchi automata over joint letters; one acceptance
// family per agent, so plain generalized acceptance is "every agent accepts"
template <typename Sym>
struct Dnba : Gnba<BasicLetter<Sym>> {
  std::vector<std::string> agent_names;
  std::vector<Nba<Sym>> components;
  std::vector<std::vector<int>> tuples;  // per product state, component states

  int num_agents() const { return (int)agent_names.size(); }
  int component_state(int q, int i) const { return tuples[q][i]; }
};

namespace detail {

template <typename Sym>
std::string tuple_name(const std::vector<Nba<Sym>>& comps, const std::vector<int>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += comps[i].state_names[t[i]];
  }
  return s + ")";
}

}  // namespace detail

// full synchronous product: joint letters are nonempty partial assignments of
// one symbol per participating agent, participants move, the rest hold still
template <typename Sym>
Dnba<Sym> build_product(const std::vector<Nba<Sym>>& components,
                        const std::vector<std::string>& agent_names,
                        const Budget& budget = {}) {
  int n = (int)components.size();
  if (n == 0 || n != (int)agent_names.size())
    throw PreconditionFailed("product needs one named automaton per agent");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (const Sym& s : components[i].alphabet)
        if (std::find(components[j].alphabet.begin(), components[j].alphabet.end(), s) !=
            components[j].alphabet.end())
          throw PreconditionFailed("component alphabets overlap between agents " +
                                   agent_names[i] + " and " + agent_names[j]);

  Dnba<Sym> D;
  D.agent_names = agent_names;
  D.components = components;

  long long total = 1;
  for (const auto& c : components) {
    total *= std::max(1, c.num_states());
    budget.charge(total);
  }
  // states: all tuples, first component slowest
  std::vector<int> t(n, 0);
  for (long long k = 0; k < total; ++k) {
    D.tuples.push_back(t);
    D.add_state(detail::tuple_name(components, t));
    for (int i = n - 1; i >= 0; --i) {
      if (++t[i] < components[i].num_states()) break;
      t[i] = 0;
    }
  }
  std::map<std::vector<int>, int> index;
  for (int q = 0; q < (int)D.tuples.size(); ++q) index[D.tuples[q]] = q;

  // letters: every nonempty set of participants with one symbol each
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> who;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) who.push_back(i);
    std::vector<int> pick(who.size(), 0);
    bool more = true;
    while (more) {
      BasicLetter<Sym> a;
      for (size_t k = 0; k < who.size(); ++k)
        a.add(who[k], components[who[k]].alphabet[pick[k]]);
      D.add_letter(a);
      more = false;
      for (int k = (int)who.size() - 1; k >= 0; --k) {
        if (++pick[k] < (int)components[who[k]].alphabet.size()) { more = true; break; }
        pick[k] = 0;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    int fam = D.add_family();
    for (int q = 0; q < (int)D.tuples.size(); ++q)
      if (components[i].accepting[D.tuples[q][i]]) D.mark_accepting(fam, q);
  }

  for (int q = 0; q < (int)D.tuples.size(); ++q) {
    for (int a = 0; a < D.num_letters(); ++a) {
      const BasicLetter<Sym>& letter = D.alphabet[a];
      std::vector<std::vector<int>> choices(n);
      bool dead = false;
      for (int i = 0; i < n && !dead; ++i) {
        if (letter.has(i)) {
          int li = components[i].letter_index(letter.sym(i));
          choices[i] = components[i].succ(D.tuples[q][i], li);
          if (choices[i].empty()) dead = true;
        } else {
          choices[i] = {D.tuples[q][i]};
        }
      }
      if (dead) continue;
      std::vector<size_t> pick(n, 0);
      bool more = true;
      while (more) {
        std::vector<int> r(n);
        for (int i = 0; i < n; ++i) r[i] = choices[i][pick[i]];
        D.add_edge_idx(q, a, index.at(r));
        more = false;
        for (int i = n - 1; i >= 0; --i) {
          if (++pick[i] < choices[i].size()) { more = true; break; }
          pick[i] = 0;
        }
      }
    }
  }

  bool any_init = true;
  for (int i = 0; i < n; ++i)
    if (components[i].initial.empty()) any_init = false;
  if (any_init) {
    std::vector<std::vector<int>> inits(n);
    for (int i = 0; i < n; ++i) inits[i] = components[i].initial;
    std::vector<size_t> pick(n, 0);
    bool more = true;
    while (more) {
      std::vector<int> r(n);
      for (int i = 0; i < n; ++i) r[i] = inits[i][pick[i]];
      D.mark_initial(index.at(r));
      more = false;
      for (int i = n - 1; i >= 0; --i) {
        if (++pick[i] < inits[i].size()) { more = true; break; }
        pick[i] = 0;
      }
    }
  }
  return D;
}

// component i's run extracted from a product run: keep a step exactly when
// agent i participates in its letter; non-participants hold still, so the
// folded loop closes
template <typename Sym>
LassoRun project_run(const Dnba<Sym>& D, const LassoRun& run,
                     const BasicLasso<BasicLetter<Sym>>& w, int agent) {
  if (agent < 0 || agent >= D.num_agents()) throw PreconditionFailed("no such agent");
  if (!detail::run_steps_ok(D, w, run))
    throw PreconditionFailed("run does not fit the word on this product");
  long long T1 = (long long)run.prefix.size();
  long long T2 = (long long)run.loop.size();
  std::vector<int> kept;
  kept.push_back(D.tuples[run.state_at(0)][agent]);
  long long local_prefix = 0;
  for (long long k = 0; k < T1 + T2; ++k) {
    if (!w.letter_at(k).has(agent)) continue;
    kept.push_back(D.tuples[run.state_at(k + 1)][agent]);
    if (k < T1) ++local_prefix;
  }
  long long local_total = (long long)kept.size() - 1;
  if (local_total == local_prefix)
    throw PreconditionFailed("agent never participates in the loop; projection is finite");
  if (kept[local_prefix] != kept[local_total])
    throw InternalError("projected run does not fold");
  LassoRun out;
  out.prefix.assign(kept.begin(), kept.begin() + local_prefix);
  out.loop.assign(kept.begin() + local_prefix, kept.begin() + local_total);
  return out;
}

// verdict for joint-word membership: fairness is checked first and reported
// as the reason when it is the obstacle
struct DnbaVerdict {
  enum class Reason { Accepted, NoAcceptingRun, UnfairWord };
  bool accepted = false;
  Reason reason = Reason::NoAcceptingRun;
  std::vector<std::string> starved;  // agent names absent from the loop
  std::optional<LassoRun> run;
  explicit operator bool() const { return accepted; }
};

template <typename Sym>
DnbaVerdict dnba_lasso_accepts(const Dnba<Sym>& D, const BasicLasso<BasicLetter<Sym>>& w) {
  DnbaVerdict v;
  // an empty loop starves every agent
  std::vector<int> starved = starved_agents(w, D.num_agents());
  if (w.loop.empty() || !starved.empty()) {
    v.reason = DnbaVerdict::Reason::UnfairWord;
    for (int i : starved) v.starved.push_back(D.agent_names[i]);
    return v;
  }
  std::optional<LassoRun> run = gnba_lasso_accepts(D, w);
  if (run) {
    v.accepted = true;
    v.reason = DnbaVerdict::Reason::Accepted;
    v.run = std::move(run);
  }
  return v;
}

}  // namespace dtl
