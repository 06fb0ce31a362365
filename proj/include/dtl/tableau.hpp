#pragma once

#include <string>
#include <vector>

#include "dtl/automaton.hpp"
#include "dtl/closure.hpp"
#include "dtl/print.hpp"
#include "dtl/word.hpp"

namespace dtl {

// one agent's view of a maximal consistent closure subset: global formulas
// plus that agent's local formulas, every member listed with its sign
struct ElementarySet {
  int agent = -1;
  FormulaSet members;
  bool operator==(const ElementarySet&) const = default;
};

// all projections B|agent of sets B that are maximal, propositionally
// consistent, consistent for "always", and anchored-consistent for the given
// agent's global atoms; deterministic order
inline std::vector<ElementarySet> enumerate_elementary(const DistributedSignature& sig,
                                                       const GlobalFormula& alpha, int agent) {
  ClosureTable tab(sig, alpha, false);
  SmallBitset dom = tab.domain_mask(agent);
  std::vector<ElementarySet> out;
  for (const auto& bits : tab.enumerate(agent, dom))
    out.push_back({agent, tab.to_formula_set(bits, dom)});
  return out;
}

// tableau automaton of one agent, with each state's bit assignment exposed
// for the product constraints
struct TableauAutomaton {
  int agent = -1;
  Gnba<Valuation> gnba;
  std::vector<SmallBitset> state_bits;   // per state, over the table's ids
  std::vector<int> family_always_ids;    // table id behind each acceptance family
};

inline TableauAutomaton build_tableau_gnba(const ClosureTable& tab, int agent) {
  const DistributedSignature& sig = tab.sig();
  TableauAutomaton out;
  out.agent = agent;
  for (const auto& v : valuations(sig, agent)) out.gnba.add_letter(v);

  SmallBitset dom = tab.domain_mask(agent);
  out.state_bits = tab.enumerate(agent, dom);
  for (const auto& bits : out.state_bits) {
    std::string name;
    for (const auto& f : tab.to_formula_set(bits, dom)) {
      if (!name.empty()) name += ", ";
      name += to_string(f, sig);
    }
    out.gnba.add_state("{" + name + "}");
  }

  // initial: the root formula holds and no communication formula does
  ClosureTable::Ref aref = tab.alpha_ref();
  for (int q = 0; q < (int)out.state_bits.size(); ++q) {
    const SmallBitset& b = out.state_bits[q];
    if (!tab.holds(b, aref)) continue;
    bool comm_free = true;
    for (int c : tab.comm_ids(agent))
      if (b.test(c)) { comm_free = false; break; }
    if (comm_free) out.gnba.mark_initial(q);
  }

  // one acceptance family per "always" formula of this agent:
  // the obligation is discharged where the formula holds or its body fails
  for (int g : tab.always_ids(agent)) {
    int fam = out.gnba.add_family();
    out.family_always_ids.push_back(g);
    for (int q = 0; q < (int)out.state_bits.size(); ++q) {
      const SmallBitset& b = out.state_bits[q];
      if (b.test(g) || !tab.holds(b, tab.item(g).a)) out.gnba.mark_accepting(fam, q);
    }
  }

  // a letter is enabled only when it agrees with the state on the closure
  // propositions; undetermined propositions are free
  auto agrees = [&](const SmallBitset& b, const Valuation& v) {
    for (int p : tab.prop_ids(agent))
      if (b.test(p) != v.test(tab.item(p).prop)) return false;
    return true;
  };
  // successor conditions: "next phi" now iff phi next, and
  // "always phi" now iff (phi now and "always phi" next)
  auto step_ok = [&](const SmallBitset& b, const SmallBitset& b2) {
    for (int x : tab.next_ids(agent))
      if (b.test(x) != tab.holds(b2, tab.item(x).a)) return false;
    for (int g : tab.always_ids(agent))
      if (b.test(g) != (tab.holds(b, tab.item(g).a) && b2.test(g))) return false;
    return true;
  };
  int nq = (int)out.state_bits.size();
  for (int q = 0; q < nq; ++q)
    for (int a = 0; a < out.gnba.num_letters(); ++a) {
      if (!agrees(out.state_bits[q], out.gnba.alphabet[a])) continue;
      for (int r = 0; r < nq; ++r)
        if (step_ok(out.state_bits[q], out.state_bits[r])) out.gnba.add_edge_idx(q, a, r);
    }
  return out;
}

inline TableauAutomaton build_local_gnba(const DistributedSignature& sig,
                                         const GlobalFormula& alpha, int agent) {
  ClosureTable tab(sig, alpha, false);
  return build_tableau_gnba(tab, agent);
}

inline bool local_language_check(const DistributedSignature& sig, const GlobalFormula& alpha,
                                 int agent, const LocalWord& w) {
  TableauAutomaton t = build_local_gnba(sig, alpha, agent);
  return gnba_lasso_accepts(t.gnba, w).has_value();
}

}  // namespace dtl
