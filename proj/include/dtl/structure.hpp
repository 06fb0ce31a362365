#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "dtl/base.hpp"
#include "dtl/formula.hpp"
#include "dtl/signature.hpp"
#include "dtl/word.hpp"

namespace dtl {

// interpretation structure induced by a fair lasso word: per-agent event
// sequences, the labeling, and position arithmetic
//
// agent i's m-th local state (m >= 0, the state of cardinality m) is labeled
// by the i-valuation of i's (m+1)-th participating letter; local components
// stutter until their first participation, so the empty state already carries
// the first letter's valuation
class LassoStructure {
 public:
  LassoStructure(const DistributedSignature& sig, LassoWord w)
      : sig_(&sig), w_(std::move(w)) {
    check_word(w_, sig);
    require_fair(w_, sig);
    P_ = w_.prefix_len();
    L_ = w_.loop_len();
    int n = sig.num_agents();
    gpos_prefix_.resize(n);
    loop_offsets_.resize(n);
    for (int k = 0; k < P_; ++k)
      for (int i : w_.prefix[k].agents()) gpos_prefix_[i].push_back(k);
    for (int o = 0; o < L_; ++o)
      for (int i : w_.loop[o].agents()) loop_offsets_[i].push_back(o);
  }

  const DistributedSignature& sig() const { return *sig_; }
  const LassoWord& word() const { return w_; }
  int num_agents() const { return sig_->num_agents(); }
  int prefix_len() const { return P_; }
  int loop_len() const { return L_; }
  const GlobalLetter& letter(long long k) const { return w_.letter_at(k); }

  // participation counts: prefix part and loop part (loop count >= 1)
  int agent_prefix_count(int i) const { return (int)gpos_prefix_[i].size(); }
  int agent_loop_count(int i) const { return (int)loop_offsets_[i].size(); }

  // global letter index (0-based) of agent i's m-th participating letter
  long long letter_index_of(int i, long long m) const {
    int Pi = agent_prefix_count(i), ci = agent_loop_count(i);
    if (m < Pi) return gpos_prefix_[i][m];
    long long r = (m - Pi) % ci, cyc = (m - Pi) / ci;
    return P_ + cyc * L_ + loop_offsets_[i][r];
  }
  // 1-based index of the global event that is agent i's (m+1)-th event
  long long nth_event_of(int i, long long m) const { return letter_index_of(i, m) + 1; }

  const Valuation& label(int i, long long m) const {
    return w_.letter_at(letter_index_of(i, m)).sym(i);
  }

  // truth of local formulas at position m depends only on canonical(i, m):
  // positions up to the agent's prefix count are kept apart, later ones repeat
  // with the agent's loop participation period
  int canonical(int i, long long m) const {
    int Pi = agent_prefix_count(i), ci = agent_loop_count(i);
    if (m <= Pi) return (int)m;
    return Pi + 1 + (int)((m - Pi - 1) % ci);
  }
  int canonical_next(int i, int s) const {
    int Pi = agent_prefix_count(i), ci = agent_loop_count(i);
    return s == Pi + ci ? Pi + 1 : s + 1;
  }

  // agent i's local state cardinality at global state k (events e_1..e_k)
  long long local_pos_at_global(int i, long long k) const {
    const auto& gp = gpos_prefix_[i];
    if (k <= P_)
      return std::upper_bound(gp.begin(), gp.end(), k - 1) - gp.begin();
    const auto& lo = loop_offsets_[i];
    long long cyc = (k - P_) / L_, rem = (k - P_) % L_;
    long long part = std::upper_bound(lo.begin(), lo.end(), rem - 1) - lo.begin();
    return (long long)gp.size() + cyc * lo.size() + part;
  }

 private:
  const DistributedSignature* sig_;
  LassoWord w_;
  int P_ = 0, L_ = 0;
  std::vector<std::vector<int>> gpos_prefix_;   // per agent: prefix letter indices
  std::vector<std::vector<int>> loop_offsets_;  // per agent: loop offsets
};

inline LassoStructure derive_structure(const DistributedSignature& sig, const LassoWord& w) {
  return LassoStructure(sig, w);
}

namespace detail {

// memoizing evaluator over canonical positions
class Evaluator {
 public:
  explicit Evaluator(const LassoStructure& mu) : mu_(&mu) {}

  bool eval(const LocalFormula& f, int s) {
    auto key = std::make_pair(f.id(), s);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = false;
    int i = f.owner();
    switch (f.kind()) {
      case LKind::Prop:
        v = mu_->label(i, s).test(mu_->sig().prop_index(i, f.prop_name()));
        break;
      case LKind::Neg: v = !eval(f.child(), s); break;
      case LKind::Imp: v = !eval(f.lhs(), s) || eval(f.rhs(), s); break;
      case LKind::Next: v = eval(f.child(), mu_->canonical_next(i, s)); break;
      case LKind::Always: return eval_always(f, s);
      case LKind::Comm: v = eval_comm(f, s); break;
    }
    memo_.emplace(key, v);
    return v;
  }

  bool eval_global(const GlobalFormula& f, long long k) {
    switch (f.kind()) {
      case GKind::At: {
        int i = f.agent();
        return eval(f.local(), mu_->canonical(i, mu_->local_pos_at_global(i, k)));
      }
      case GKind::Neg: return !eval_global(f.child(), k);
      case GKind::Imp: return !eval_global(f.lhs(), k) || eval_global(f.rhs(), k);
    }
    return false;
  }

 private:
  // all canonical positions at once: the steady zone shares one value (the
  // loop keeps revisiting every steady class), earlier positions fold right
  // to left through "now and next"
  bool eval_always(const LocalFormula& f, int s) {
    int i = f.owner();
    int Pi = mu_->agent_prefix_count(i), ci = mu_->agent_loop_count(i);
    LocalFormula body = f.child();
    bool steady = true;
    for (int t = Pi + 1; t <= Pi + ci; ++t) steady = eval(body, t) && steady;
    for (int t = Pi + 1; t <= Pi + ci; ++t) memo_.emplace(std::make_pair(f.id(), t), steady);
    bool v = steady;
    for (int t = Pi; t >= 0; --t) {
      v = eval(body, t) && v;
      memo_.emplace(std::make_pair(f.id(), t), v);
    }
    return memo_.at(std::make_pair(f.id(), s));
  }

  // the hop target: the letter of i's s-th event; shared iff the peer
  // participates in that letter, and the body is read at the peer's local
  // state right after it (the shared event included)
  bool eval_comm(const LocalFormula& f, int s) {
    if (s == 0) return false;
    int i = f.owner(), j = f.peer();
    long long g = mu_->letter_index_of(i, s - 1);
    if (!mu_->letter(g).has(j)) return false;
    long long mj = mu_->local_pos_at_global(j, g + 1);
    return eval(f.child(), mu_->canonical(j, mj));
  }

  const LassoStructure* mu_;
  std::map<std::pair<const void*, int>, bool> memo_;
};

}  // namespace detail

inline bool sat_local(const LassoStructure& mu, int i, long long m, const LocalFormula& phi) {
  if (phi.owner() != i)
    throw PreconditionFailed("formula does not belong to the evaluating agent");
  detail::Evaluator ev(mu);
  return ev.eval(phi, mu.canonical(i, m));
}

// anchored satisfaction: truth at the empty global state
inline bool sat_global(const LassoStructure& mu, const GlobalFormula& alpha) {
  detail::Evaluator ev(mu);
  return ev.eval_global(alpha, 0);
}

// truth at the global state holding the first k events
inline bool sat_global_at(const LassoStructure& mu, long long k, const GlobalFormula& alpha) {
  detail::Evaluator ev(mu);
  return ev.eval_global(alpha, k);
}

// "always phi" == "phi now and always phi next"; returns whether both sides agree
inline bool always_fixpoint_check(const LassoStructure& mu, int i, long long m,
                                  const LocalFormula& phi) {
  LocalFormula alw = LocalFormula::always(phi);
  bool lhs = sat_local(mu, i, m, alw);
  bool rhs = sat_local(mu, i, m, phi) && sat_local(mu, i, m + 1, alw);
  return lhs == rhs;
}

}  // namespace dtl
