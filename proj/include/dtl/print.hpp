#pragma once

#include <string>

#include "dtl/formula.hpp"
#include "dtl/signature.hpp"

namespace dtl {

// renders to the concrete syntax accepted by the parser; parentheses are
// emitted only around implications nested under a tighter operator
inline std::string to_string(const LocalFormula& f, const DistributedSignature& sig) {
  auto wrap = [&](const LocalFormula& g) {
    std::string s = to_string(g, sig);
    if (g.kind() == LKind::Imp) return "(" + s + ")";
    return s;
  };
  switch (f.kind()) {
    case LKind::Prop: return f.prop_name();
    case LKind::Neg: return "!" + wrap(f.child());
    case LKind::Next: return "X " + wrap(f.child());
    case LKind::Always: return "G " + wrap(f.child());
    case LKind::Comm:
      return "C " + sig.agent_name(f.peer()) + "[" + to_string(f.child(), sig) + "]";
    case LKind::Imp:
      return wrap(f.lhs()) + " -> " + to_string(f.rhs(), sig);
  }
  return "?";
}

inline std::string to_string(const GlobalFormula& f, const DistributedSignature& sig) {
  auto wrap = [&](const GlobalFormula& g) {
    std::string s = to_string(g, sig);
    if (g.kind() == GKind::Imp) return "(" + s + ")";
    return s;
  };
  switch (f.kind()) {
    case GKind::At:
      return "@" + sig.agent_name(f.agent()) + "[" + to_string(f.local(), sig) + "]";
    case GKind::Neg: return "!" + wrap(f.child());
    case GKind::Imp: return wrap(f.lhs()) + " -> " + to_string(f.rhs(), sig);
  }
  return "?";
}

inline std::string to_string(const Formula& f, const DistributedSignature& sig) {
  return f.is_global() ? to_string(f.global(), sig) : to_string(f.local(), sig);
}

}  // namespace dtl
