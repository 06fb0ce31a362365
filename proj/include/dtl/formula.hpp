#pragma once

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtl/base.hpp"

namespace dtl {

enum class LKind { Prop, Neg, Imp, Next, Always, Comm };

// immutable local formula over one agent's language; double negation is
// collapsed at construction so set membership is purely structural
class LocalFormula {
  struct Node {
    LKind kind;
    int owner;
    int peer = -1;          // Comm target agent
    std::string name;       // Prop only
    std::shared_ptr<const Node> a, b;
    int size = 1;           // node count, drives canonical ordering
    std::size_t hash = 0;
  };
  std::shared_ptr<const Node> n_;
  explicit LocalFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Node n) {
    n.size = 1 + (n.a ? n.a->size : 0) + (n.b ? n.b->size : 0);
    std::size_t h = hash_mix((std::size_t)n.kind * 1315423911u, n.owner);
    h = hash_mix(h, n.peer + 7);
    h = hash_mix(h, std::hash<std::string>{}(n.name));
    if (n.a) h = hash_mix(h, n.a->hash);
    if (n.b) h = hash_mix(h, n.b->hash);
    n.hash = h;
    return std::make_shared<const Node>(std::move(n));
  }

  static std::strong_ordering cmp(const Node* x, const Node* y) {
    if (x == y) return std::strong_ordering::equal;
    if (auto c = x->size <=> y->size; c != 0) return c;
    if (auto c = (int)x->kind <=> (int)y->kind; c != 0) return c;
    if (auto c = x->owner <=> y->owner; c != 0) return c;
    if (auto c = x->peer <=> y->peer; c != 0) return c;
    if (auto c = x->name.compare(y->name) <=> 0; c != 0) return c;
    if (x->a) if (auto c = cmp(x->a.get(), y->a.get()); c != 0) return c;
    if (x->b) if (auto c = cmp(x->b.get(), y->b.get()); c != 0) return c;
    return std::strong_ordering::equal;
  }

 public:
  LocalFormula() = default;
  bool valid() const { return n_ != nullptr; }

  static LocalFormula prop(int owner, std::string name) {
    Node n; n.kind = LKind::Prop; n.owner = owner; n.name = std::move(name);
    return LocalFormula(make(std::move(n)));
  }
  static LocalFormula neg(LocalFormula f) {
    if (f.kind() == LKind::Neg) return f.child();
    Node n; n.kind = LKind::Neg; n.owner = f.owner(); n.a = f.n_;
    return LocalFormula(make(std::move(n)));
  }
  static LocalFormula imp(LocalFormula lhs, LocalFormula rhs) {
    if (lhs.owner() != rhs.owner())
      throw ParseError("implication mixes formulas of two agents");
    Node n; n.kind = LKind::Imp; n.owner = lhs.owner(); n.a = lhs.n_; n.b = rhs.n_;
    return LocalFormula(make(std::move(n)));
  }
  static LocalFormula next(LocalFormula f) {
    Node n; n.kind = LKind::Next; n.owner = f.owner(); n.a = f.n_;
    return LocalFormula(make(std::move(n)));
  }
  static LocalFormula always(LocalFormula f) {
    Node n; n.kind = LKind::Always; n.owner = f.owner(); n.a = f.n_;
    return LocalFormula(make(std::move(n)));
  }
  static LocalFormula comm(int owner, int peer, LocalFormula body) {
    if (body.owner() != peer)
      throw ParseError("communication body must belong to the target agent");
    Node n; n.kind = LKind::Comm; n.owner = owner; n.peer = peer; n.a = body.n_;
    return LocalFormula(make(std::move(n)));
  }

  LKind kind() const { return n_->kind; }
  int owner() const { return n_->owner; }
  int peer() const { return n_->peer; }
  const std::string& prop_name() const { return n_->name; }
  LocalFormula child() const { return LocalFormula(n_->a); }
  LocalFormula lhs() const { return LocalFormula(n_->a); }
  LocalFormula rhs() const { return LocalFormula(n_->b); }
  int size() const { return n_->size; }
  std::size_t hash() const { return n_->hash; }
  const void* id() const { return n_.get(); }

  bool operator==(const LocalFormula& o) const {
    if (n_ == o.n_) return true;
    if (!n_ || !o.n_) return false;
    if (n_->hash != o.n_->hash) return false;
    return cmp(n_.get(), o.n_.get()) == 0;
  }
  std::strong_ordering operator<=>(const LocalFormula& o) const {
    if (n_ == o.n_) return std::strong_ordering::equal;
    return cmp(n_.get(), o.n_.get());
  }
};

enum class GKind { At, Neg, Imp };

class GlobalFormula {
  struct Node {
    GKind kind;
    int agent = -1;  // At only
    LocalFormula local;
    std::shared_ptr<const Node> a, b;
    int size = 1;
    std::size_t hash = 0;
  };
  std::shared_ptr<const Node> n_;
  explicit GlobalFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Node n) {
    n.size = 1 + (n.local.valid() ? n.local.size() : 0) +
             (n.a ? n.a->size : 0) + (n.b ? n.b->size : 0);
    std::size_t h = hash_mix((std::size_t)n.kind * 2654435761u, n.agent + 3);
    if (n.local.valid()) h = hash_mix(h, n.local.hash());
    if (n.a) h = hash_mix(h, n.a->hash);
    if (n.b) h = hash_mix(h, n.b->hash);
    n.hash = h;
    return std::make_shared<const Node>(std::move(n));
  }

  static std::strong_ordering cmp(const Node* x, const Node* y) {
    if (x == y) return std::strong_ordering::equal;
    if (auto c = x->size <=> y->size; c != 0) return c;
    if (auto c = (int)x->kind <=> (int)y->kind; c != 0) return c;
    if (auto c = x->agent <=> y->agent; c != 0) return c;
    if (x->local.valid())
      if (auto c = x->local <=> y->local; c != 0) return c;
    if (x->a) if (auto c = cmp(x->a.get(), y->a.get()); c != 0) return c;
    if (x->b) if (auto c = cmp(x->b.get(), y->b.get()); c != 0) return c;
    return std::strong_ordering::equal;
  }

 public:
  GlobalFormula() = default;
  bool valid() const { return n_ != nullptr; }

  static GlobalFormula at(int agent, LocalFormula f) {
    if (f.owner() != agent)
      throw ParseError("agent anchor does not own the local formula");
    Node n; n.kind = GKind::At; n.agent = agent; n.local = std::move(f);
    return GlobalFormula(make(std::move(n)));
  }
  static GlobalFormula neg(GlobalFormula f) {
    if (f.kind() == GKind::Neg) return f.child();
    Node n; n.kind = GKind::Neg; n.a = f.n_;
    return GlobalFormula(make(std::move(n)));
  }
  static GlobalFormula imp(GlobalFormula lhs, GlobalFormula rhs) {
    Node n; n.kind = GKind::Imp; n.a = lhs.n_; n.b = rhs.n_;
    return GlobalFormula(make(std::move(n)));
  }

  GKind kind() const { return n_->kind; }
  int agent() const { return n_->agent; }
  LocalFormula local() const { return n_->local; }
  GlobalFormula child() const { return GlobalFormula(n_->a); }
  GlobalFormula lhs() const { return GlobalFormula(n_->a); }
  GlobalFormula rhs() const { return GlobalFormula(n_->b); }
  int size() const { return n_->size; }
  std::size_t hash() const { return n_->hash; }
  const void* id() const { return n_.get(); }

  bool operator==(const GlobalFormula& o) const {
    if (n_ == o.n_) return true;
    if (!n_ || !o.n_) return false;
    if (n_->hash != o.n_->hash) return false;
    return cmp(n_.get(), o.n_.get()) == 0;
  }
  std::strong_ordering operator<=>(const GlobalFormula& o) const {
    if (n_ == o.n_) return std::strong_ordering::equal;
    return cmp(n_.get(), o.n_.get());
  }
};

// a closure member is either global or local; globals order before locals of
// equal size so iteration order is reproducible
class Formula {
  int tag_ = -1;  // 0 global, 1 local
  GlobalFormula g_;
  LocalFormula l_;

 public:
  Formula() = default;
  Formula(GlobalFormula g) : tag_(0), g_(std::move(g)) {}
  Formula(LocalFormula l) : tag_(1), l_(std::move(l)) {}

  bool is_global() const { return tag_ == 0; }
  bool is_local() const { return tag_ == 1; }
  const GlobalFormula& global() const { return g_; }
  const LocalFormula& local() const { return l_; }
  int size() const { return tag_ == 0 ? g_.size() : l_.size(); }
  // owner agent for locals, -1 for globals
  int owner() const { return tag_ == 0 ? -1 : l_.owner(); }

  bool operator==(const Formula& o) const {
    if (tag_ != o.tag_) return false;
    return tag_ == 0 ? g_ == o.g_ : l_ == o.l_;
  }
  std::strong_ordering operator<=>(const Formula& o) const {
    if (auto c = size() <=> o.size(); c != 0) return c;
    if (auto c = tag_ <=> o.tag_; c != 0) return c;
    return tag_ == 0 ? g_ <=> o.g_ : l_ <=> o.l_;
  }
};

// ordered finite set of closure members
class FormulaSet {
  std::set<Formula> items_;

 public:
  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> xs) : items_(xs) {}

  void insert(Formula f) { items_.insert(std::move(f)); }
  bool contains(const Formula& f) const { return items_.count(f) != 0; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  bool operator==(const FormulaSet&) const = default;

  bool subset_of(const FormulaSet& o) const {
    for (const auto& f : items_) if (!o.contains(f)) return false;
    return true;
  }
  FormulaSet unioned(const FormulaSet& o) const {
    FormulaSet r = *this;
    for (const auto& f : o.items_) r.insert(f);
    return r;
  }
};

}  // namespace dtl
