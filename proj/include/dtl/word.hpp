#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dtl/base.hpp"
#include "dtl/signature.hpp"

namespace dtl {

// total truth assignment over one agent's propositions, packed as bits in
// declaration order
struct Valuation {
  int agent = -1;
  std::uint32_t bits = 0;

  bool test(int prop) const { return ((bits >> prop) & 1u) != 0; }
  void set(int prop, bool v = true) {
    std::uint32_t m = std::uint32_t(1) << prop;
    if (v) bits |= m; else bits &= ~m;
  }
  auto operator<=>(const Valuation&) const = default;
};

inline std::vector<Valuation> valuations(const DistributedSignature& sig, int i) {
  int n = (int)sig.props(i).size();
  std::vector<Valuation> out;
  out.reserve(std::size_t(1) << n);
  for (std::uint32_t b = 0; b < (std::uint32_t(1) << n); ++b)
    out.push_back(Valuation{i, b});
  return out;
}

inline std::string to_string(const Valuation& v, const DistributedSignature& sig) {
  std::string s = "{";
  const auto& ps = sig.props(v.agent);
  for (int k = 0; k < (int)ps.size(); ++k) {
    if (k) s += ",";
    if (!v.test(k)) s += "!";
    s += ps[k];
  }
  return s + "}";
}

// one step of a distributed word: the participating agents and, per
// participant, its symbol (at most one per agent)
template <typename Sym>
struct BasicLetter {
  std::vector<std::pair<int, Sym>> parts;  // sorted by agent, unique

  void add(int agent, Sym s) {
    auto it = std::lower_bound(parts.begin(), parts.end(), agent,
                               [](const auto& p, int a) { return p.first < a; });
    if (it != parts.end() && it->first == agent)
      throw ParseError("two symbols for one agent in a letter");
    parts.insert(it, {agent, std::move(s)});
  }
  bool has(int agent) const {
    for (const auto& [a, s] : parts) if (a == agent) return true;
    return false;
  }
  const Sym& sym(int agent) const {
    for (const auto& [a, s] : parts) if (a == agent) return s;
    throw InternalError("agent not in letter");
  }
  std::vector<int> agents() const {
    std::vector<int> out;
    for (const auto& [a, s] : parts) out.push_back(a);
    return out;
  }
  std::uint32_t domain_mask() const {
    std::uint32_t m = 0;
    for (const auto& [a, s] : parts) m |= std::uint32_t(1) << a;
    return m;
  }
  bool empty() const { return parts.empty(); }
  int size() const { return (int)parts.size(); }
  auto operator<=>(const BasicLetter&) const = default;
};

// ultimately periodic sequence prefix . loop^omega
template <typename Letter>
struct BasicLasso {
  std::vector<Letter> prefix;
  std::vector<Letter> loop;

  int prefix_len() const { return (int)prefix.size(); }
  int loop_len() const { return (int)loop.size(); }
  // position folded into [0, prefix+loop)
  int fold(long long k) const {
    long long p = prefix_len(), l = loop_len();
    return k < p ? (int)k : (int)(p + (k - p) % l);
  }
  const Letter& letter_at(long long k) const {
    int f = fold(k);
    return f < prefix_len() ? prefix[f] : loop[f - prefix_len()];
  }
  bool operator==(const BasicLasso&) const = default;
};

using GlobalLetter = BasicLetter<Valuation>;
using LassoWord = BasicLasso<GlobalLetter>;
using LocalWord = BasicLasso<Valuation>;

template <typename Sym>
std::vector<int> starved_agents(const BasicLasso<BasicLetter<Sym>>& w, int num_agents) {
  std::vector<bool> seen(num_agents, false);
  for (const auto& a : w.loop)
    for (const auto& [agent, s] : a.parts)
      if (agent >= 0 && agent < num_agents) seen[agent] = true;
  std::vector<int> out;
  for (int i = 0; i < num_agents; ++i)
    if (!seen[i]) out.push_back(i);
  return out;
}

template <typename Sym>
bool is_fair(const BasicLasso<BasicLetter<Sym>>& w, int num_agents) {
  return w.loop_len() > 0 && starved_agents(w, num_agents).empty();
}

inline void require_fair(const LassoWord& w, const DistributedSignature& sig) {
  if (w.loop.empty()) throw ParseError("lasso loop must be nonempty");
  std::vector<int> starved = starved_agents(w, sig.num_agents());
  if (starved.empty()) return;
  std::vector<std::string> names;
  for (int i : starved) names.push_back(sig.agent_name(i));
  throw UnfairWord(std::move(names));
}

// drop letters without agent i and strip the rest to i's symbol
template <typename Sym>
BasicLasso<Sym> project_word(const BasicLasso<BasicLetter<Sym>>& w, int i) {
  BasicLasso<Sym> out;
  for (const auto& a : w.prefix)
    if (a.has(i)) out.prefix.push_back(a.sym(i));
  for (const auto& a : w.loop)
    if (a.has(i)) out.loop.push_back(a.sym(i));
  if (out.loop.empty()) throw UnfairWord({std::to_string(i)});
  return out;
}

// letters must name declared agents with matching valuations, each total
inline void check_word(const LassoWord& w, const DistributedSignature& sig) {
  auto check = [&](const GlobalLetter& a) {
    if (a.empty()) throw ParseError("empty letter in word");
    for (const auto& [agent, v] : a.parts) {
      if (agent < 0 || agent >= sig.num_agents())
        throw ParseError("letter names an undeclared agent");
      if (v.agent != agent) throw ParseError("valuation tagged with wrong agent");
      std::uint32_t over = v.bits >> sig.props(agent).size();
      if (over != 0) throw ParseError("valuation uses undeclared propositions");
    }
  };
  for (const auto& a : w.prefix) check(a);
  for (const auto& a : w.loop) check(a);
}

}  // namespace dtl
