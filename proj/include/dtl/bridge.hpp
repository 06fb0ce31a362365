#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "dtl/pipeline.hpp"
#include "dtl/structure.hpp"

namespace dtl {

inline LassoStructure word_to_structure(const DistributedSignature& sig, const LassoWord& w) {
  return derive_structure(sig, w);
}

// variant that also replays a product run and checks that every state the
// run sits on while an agent reads a letter carries exactly that letter's
// values on the closure propositions
inline LassoStructure word_to_structure(const DistributedSignature& sig, const LassoWord& w,
                                        const ConstrainedDnba& C, const LassoRun& run) {
  LassoStructure mu = derive_structure(sig, w);
  if (!detail::run_steps_ok(C.dnba, w, run))
    throw PreconditionFailed("run does not fit the word on this product");
  const ClosureTable& tab = *C.table;
  long long T = (long long)run.prefix.size() + (long long)run.loop.size();
  for (long long k = 0; k < T; ++k) {
    const GlobalLetter& a = w.letter_at(k);
    int s = run.state_at(k);
    for (const auto& [i, v] : a.parts)
      for (int p : tab.prop_ids(i))
        if (C.state_bits[s][i].test(p) != v.test(tab.item(p).prop))
          throw LabelMismatch("run state disagrees with letter on proposition " +
                              tab.sig().props(i)[tab.item(p).prop] + " of agent " +
                              tab.sig().agent_name(i));
  }
  return mu;
}

// the only order-preserving enumeration of a lasso structure's events is the
// index order, so a linearization just records the shape it was taken from
struct Linearization {
  long long prefix_len = 0;
  long long loop_len = 0;
  bool operator==(const Linearization&) const = default;
};

inline Linearization default_linearization(const LassoStructure& mu) {
  return {mu.prefix_len(), mu.loop_len()};
}

// serialize a structure back into a word: letter k carries, per participant
// of event k+1, that agent's labeling at its local state just before the
// event; computed over two loop turns and folded
inline LassoWord structure_to_word(const LassoStructure& mu, const Linearization& lin) {
  if (lin.prefix_len != mu.prefix_len() || lin.loop_len != mu.loop_len())
    throw PreconditionFailed("linearization does not match the structure");
  long long P = mu.prefix_len(), L = mu.loop_len();
  std::vector<GlobalLetter> letters;
  for (long long k = 0; k < P + 2 * L; ++k) {
    GlobalLetter a;
    for (int i : mu.word().letter_at(k).agents())
      a.add(i, mu.label(i, mu.local_pos_at_global(i, k)));
    letters.push_back(a);
  }
  for (long long t = 0; t < L; ++t)
    if (!(letters[P + t] == letters[P + L + t]))
      throw InternalError("serialized letters do not close into the loop");
  LassoWord w;
  w.prefix.assign(letters.begin(), letters.begin() + P);
  w.loop.assign(letters.begin() + P, letters.begin() + P + L);
  return w;
}

// the explicit accepting configuration sequence for a model: per position and
// agent, the signed closure subset that is true there; global formulas of
// other owners stay at their anchored truth
struct CanonicalRun {
  std::vector<std::vector<FormulaSet>> prefix;  // per position, per agent
  std::vector<std::vector<FormulaSet>> loop;
};

inline CanonicalRun build_canonical_run(const LassoStructure& mu, const GlobalFormula& alpha,
                                        const Linearization& lin) {
  const DistributedSignature& sig = mu.sig();
  if (lin.prefix_len != mu.prefix_len() || lin.loop_len != mu.loop_len())
    throw PreconditionFailed("linearization does not match the structure");
  if (!sat_global(mu, alpha)) throw PreconditionFailed("structure does not satisfy the formula");
  ClosureTable tab(sig, alpha, false);
  int n = sig.num_agents();
  long long P = mu.prefix_len(), L = mu.loop_len();

  auto column = [&](int i, long long k) {
    long long m = mu.local_pos_at_global(i, k);
    SmallBitset bits;
    SmallBitset dom = tab.domain_mask(i);
    for (int id = 0; id < tab.size(); ++id) {
      if (!dom.test(id)) continue;
      const ClosureTable::Item& it = tab.item(id);
      bool t = false;
      switch (it.kind) {
        case ItemKind::GlobalImp:
          t = !tab.holds(bits, it.a) || tab.holds(bits, it.b);
          break;
        case ItemKind::GlobalAt:
          t = it.owner == i ? sat_local(mu, i, m, tab.base(id).global().local())
                            : sat_global(mu, tab.base(id).global());
          break;
        default:
          t = sat_local(mu, i, m, tab.base(id).local());
          break;
      }
      bits.set(id, t);
    }
    return tab.to_formula_set(bits, dom);
  };

  // positions 0..P+L-1 form the stem and P+L..P+2L-1 the loop; every agent
  // has moved at least once within one loop turn, so truths are periodic
  // from position P+L on and the fold closes
  CanonicalRun out;
  for (long long k = 0; k < P + L; ++k) {
    std::vector<FormulaSet> tup;
    for (int i = 0; i < n; ++i) tup.push_back(column(i, k));
    out.prefix.push_back(std::move(tup));
  }
  for (long long k = P + L; k < P + 2 * L; ++k) {
    std::vector<FormulaSet> tup;
    for (int i = 0; i < n; ++i) tup.push_back(column(i, k));
    out.loop.push_back(std::move(tup));
  }
  for (int i = 0; i < n; ++i)
    if (!(column(i, P + 2 * L) == out.loop.front()[i]))
      throw InternalError("canonical run does not fold at the loop boundary");
  return out;
}

// event bijection between two structures; for lassos the only
// order-preserving candidate is the identity on event indices, verified up
// to the point where both sequences are jointly periodic
struct IsomorphismWitness {
  long long checked_window = 0;
};

inline std::optional<IsomorphismWitness> iso_check(const LassoStructure& mu1,
                                                   const LassoStructure& mu2) {
  if (!(mu1.sig() == mu2.sig())) return std::nullopt;
  long long P = std::max(mu1.prefix_len(), mu2.prefix_len());
  long long L = std::lcm((long long)mu1.loop_len(), (long long)mu2.loop_len());
  long long W = P + 2 * L;
  for (long long k = 0; k < W; ++k) {
    const GlobalLetter& a = mu1.word().letter_at(k);
    const GlobalLetter& b = mu2.word().letter_at(k);
    if (a.agents() != b.agents()) return std::nullopt;
    for (int i : a.agents()) {
      long long m1 = mu1.local_pos_at_global(i, k);
      long long m2 = mu2.local_pos_at_global(i, k);
      if (!(mu1.label(i, m1) == mu2.label(i, m2))) return std::nullopt;
    }
  }
  return IsomorphismWitness{W};
}

}  // namespace dtl
