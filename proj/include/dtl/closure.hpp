#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "dtl/base.hpp"
#include "dtl/formula.hpp"
#include "dtl/signature.hpp"

namespace dtl {

inline Formula negated(const Formula& f) {
  if (f.is_global()) return Formula(GlobalFormula::neg(f.global()));
  return Formula(LocalFormula::neg(f.local()));
}

namespace detail {

inline void collect_local(const LocalFormula& f, FormulaSet& out) {
  out.insert(Formula(f));
  switch (f.kind()) {
    case LKind::Prop:
    case LKind::Comm:  // communication bodies are atomic at this level
      return;
    case LKind::Neg:
    case LKind::Next:
    case LKind::Always:
      collect_local(f.child(), out);
      return;
    case LKind::Imp:
      collect_local(f.lhs(), out);
      collect_local(f.rhs(), out);
      return;
  }
}

inline void collect_global(const GlobalFormula& f, FormulaSet& out) {
  out.insert(Formula(f));
  switch (f.kind()) {
    case GKind::At: collect_local(f.local(), out); return;
    case GKind::Neg: collect_global(f.child(), out); return;
    case GKind::Imp:
      collect_global(f.lhs(), out);
      collect_global(f.rhs(), out);
      return;
  }
}

}  // namespace detail

inline FormulaSet subformulas_local(const LocalFormula& f) {
  FormulaSet s;
  detail::collect_local(f, s);
  return s;
}

inline FormulaSet subformulas_global(const GlobalFormula& f) {
  FormulaSet s;
  detail::collect_global(f, s);
  return s;
}

// subformulas plus single negations; double negation never appears
inline FormulaSet closure(const GlobalFormula& f) {
  FormulaSet s = subformulas_global(f);
  FormulaSet out = s;
  for (const auto& g : s) out.insert(negated(g));
  return out;
}

// B restricted to global formulas and agent i's local formulas
inline FormulaSet project_down(const FormulaSet& B, int i) {
  FormulaSet out;
  for (const auto& f : B)
    if (f.is_global() || f.owner() == i) out.insert(f);
  return out;
}

enum class ItemKind { GlobalAt, GlobalImp, LocalProp, LocalImp, LocalNext, LocalAlways, LocalComm };

// indexes the positive (non-negation) members of the closure in ascending
// (size, structural) order, so every item's children index below it; a set of
// closure members is then one bit per item (set bit = positive member in,
// clear bit = its negation in)
//
// extended mode additionally indexes, for every communication subformula
// C j[phi], the subformulas of phi on the target agent's side (recursively);
// the cross-agent constraints need phi's truth readable from the peer state
class ClosureTable {
 public:
  struct Ref {
    int id = -1;
    bool pos = true;
    bool valid() const { return id >= 0; }
  };
  struct Item {
    Formula formula;
    ItemKind kind;
    int owner = -1;  // agent of a local item, anchor agent of a GlobalAt
    int peer = -1;   // LocalComm target agent
    int prop = -1;   // LocalProp index into sig.props(owner)
    Ref a, b;        // children (Imp: a,b; At/Next/Always/Comm: a)
  };

  ClosureTable(const DistributedSignature& sig, const GlobalFormula& alpha, bool extended)
      : sig_(&sig), alpha_(alpha), extended_(extended) {
    FormulaSet members = closure(alpha);
    if (extended) {
      // pull in communication bodies (and their nested bodies) on the peer side
      FormulaSet pending = members;
      while (true) {
        FormulaSet fresh;
        for (const auto& f : pending) {
          if (!f.is_local() || f.local().kind() != LKind::Comm) continue;
          FormulaSet body = subformulas_local(f.local().child());
          for (const auto& g : body) {
            if (!members.contains(g) && !members.contains(negated(g))) fresh.insert(g);
            Formula ng = negated(g);
            if (!members.contains(g)) members.insert(g);
            if (!members.contains(ng)) members.insert(ng);
          }
        }
        if (fresh.empty()) break;
        pending = fresh;
      }
    }

    for (const auto& f : members)
      if (!is_negation(f)) base_.push_back(f);
    std::sort(base_.begin(), base_.end(), [](const Formula& x, const Formula& y) {
      return x < y;
    });
    if ((int)base_.size() > SmallBitset::capacity)
      throw ResourceCapExceeded("closure too large to index");
    for (int id = 0; id < (int)base_.size(); ++id) index_.emplace(base_[id], id);

    int n = num_agents();
    locals_mask_.resize(n);
    comm_ids_.resize(n);
    always_ids_.resize(n);
    next_ids_.resize(n);
    prop_ids_.resize(n);
    items_.reserve(base_.size());
    for (int id = 0; id < (int)base_.size(); ++id) items_.push_back(make_item(base_[id], id));
  }

  const DistributedSignature& sig() const { return *sig_; }
  const GlobalFormula& root() const { return alpha_; }
  bool extended() const { return extended_; }
  int size() const { return (int)base_.size(); }
  int num_agents() const { return sig_->num_agents(); }
  const Item& item(int id) const { return items_.at(id); }
  const Formula& base(int id) const { return base_.at(id); }

  // positive forms only; -1 when absent
  int id_of(const Formula& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? -1 : it->second;
  }
  // strips one negation; membership of f in a set B is bits[ref.id] == ref.pos
  Ref ref_of(const Formula& f) const {
    if (is_negation(f)) {
      Formula pos = negated(f);
      return {id_of(pos), false};
    }
    return {id_of(f), true};
  }
  Ref alpha_ref() const { return ref_of(Formula(alpha_)); }

  const SmallBitset& globals_mask() const { return globals_mask_; }
  const SmallBitset& locals_mask(int agent) const { return locals_mask_.at(agent); }
  SmallBitset domain_mask(int agent) const { return globals_mask_ | locals_mask_.at(agent); }
  SmallBitset full_mask() const {
    SmallBitset m;
    for (int id = 0; id < size(); ++id) m.set(id);
    return m;
  }

  const std::vector<int>& comm_ids(int owner) const { return comm_ids_.at(owner); }
  const std::vector<int>& always_ids(int owner) const { return always_ids_.at(owner); }
  const std::vector<int>& next_ids(int owner) const { return next_ids_.at(owner); }
  const std::vector<int>& prop_ids(int owner) const { return prop_ids_.at(owner); }

  bool holds(const SmallBitset& bits, Ref r) const { return bits.test(r.id) == r.pos; }

  // all sign assignments over `domain` that are propositionally consistent,
  // respect "always implies now", and agree with the given agent's anchored
  // global formulas; out-of-domain bits are left clear
  std::vector<SmallBitset> enumerate(int agent, const SmallBitset& domain) const {
    std::vector<SmallBitset> out;
    SmallBitset cur;
    enumerate_rec(agent, domain, 0, cur, out);
    return out;
  }

  std::vector<SmallBitset> enumerate_projected(int agent) const {
    return enumerate(agent, domain_mask(agent));
  }

  // signed listing of the members selected by bits over domain
  FormulaSet to_formula_set(const SmallBitset& bits, const SmallBitset& domain) const {
    FormulaSet out;
    for (int id = 0; id < size(); ++id) {
      if (!domain.test(id)) continue;
      out.insert(bits.test(id) ? base_[id] : negated(base_[id]));
    }
    return out;
  }

  static bool is_negation(const Formula& f) {
    return f.is_global() ? f.global().kind() == GKind::Neg
                         : f.local().kind() == LKind::Neg;
  }

 private:
  Item make_item(const Formula& f, int id) {
    Item it;
    it.formula = f;
    if (f.is_global()) {
      globals_mask_.set(id);
      const GlobalFormula& g = f.global();
      if (g.kind() == GKind::At) {
        it.kind = ItemKind::GlobalAt;
        it.owner = g.agent();
        it.a = ref_of(Formula(g.local()));
      } else {
        it.kind = ItemKind::GlobalImp;
        it.a = ref_of(Formula(g.lhs()));
        it.b = ref_of(Formula(g.rhs()));
      }
      return it;
    }
    const LocalFormula& l = f.local();
    it.owner = l.owner();
    locals_mask_[l.owner()].set(id);
    switch (l.kind()) {
      case LKind::Prop:
        it.kind = ItemKind::LocalProp;
        it.prop = sig_->prop_index(l.owner(), l.prop_name());
        prop_ids_[l.owner()].push_back(id);
        break;
      case LKind::Imp:
        it.kind = ItemKind::LocalImp;
        it.a = ref_of(Formula(l.lhs()));
        it.b = ref_of(Formula(l.rhs()));
        break;
      case LKind::Next:
        it.kind = ItemKind::LocalNext;
        it.a = ref_of(Formula(l.child()));
        next_ids_[l.owner()].push_back(id);
        break;
      case LKind::Always:
        it.kind = ItemKind::LocalAlways;
        it.a = ref_of(Formula(l.child()));
        always_ids_[l.owner()].push_back(id);
        break;
      case LKind::Comm:
        it.kind = ItemKind::LocalComm;
        it.peer = l.peer();
        it.a = ref_of(Formula(l.child()));  // body; indexed only in extended mode
        comm_ids_[l.owner()].push_back(id);
        break;
      case LKind::Neg:
        throw InternalError("negation stored as a base item");
    }
    return it;
  }

  // 0 = forced clear, 1 = forced set, 2 = free
  int constraint_on(int agent, const SmallBitset& cur, int id) const {
    const Item& it = items_[id];
    auto val = [&](Ref r) { return cur.test(r.id) == r.pos; };
    switch (it.kind) {
      case ItemKind::GlobalImp:
      case ItemKind::LocalImp:
        return (!val(it.a) || val(it.b)) ? 1 : 0;
      case ItemKind::GlobalAt:
        return it.owner == agent ? (val(it.a) ? 1 : 0) : 2;
      case ItemKind::LocalAlways:
        return val(it.a) ? 2 : 0;
      default:
        return 2;
    }
  }

  void enumerate_rec(int agent, const SmallBitset& domain, int id, SmallBitset& cur,
                     std::vector<SmallBitset>& out) const {
    if (id == size()) {
      out.push_back(cur);
      return;
    }
    if (!domain.test(id)) {
      enumerate_rec(agent, domain, id + 1, cur, out);
      return;
    }
    int c = constraint_on(agent, cur, id);
    if (c != 1) enumerate_rec(agent, domain, id + 1, cur, out);
    if (c != 0) {
      cur.set(id);
      enumerate_rec(agent, domain, id + 1, cur, out);
      cur.set(id, false);
    }
  }

  const DistributedSignature* sig_;
  GlobalFormula alpha_;
  bool extended_;
  std::vector<Formula> base_;
  std::map<Formula, int> index_;
  std::vector<Item> items_;
  SmallBitset globals_mask_;
  std::vector<SmallBitset> locals_mask_;
  std::vector<std::vector<int>> comm_ids_, always_ids_, next_ids_, prop_ids_;
};

}  // namespace dtl
