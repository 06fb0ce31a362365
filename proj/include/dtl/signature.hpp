#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dtl/base.hpp"

namespace dtl {

// agent identifiers and per-agent proposition sets; agent order is fixed at
// construction and drives every deterministic ordering downstream
class DistributedSignature {
 public:
  DistributedSignature(std::vector<std::string> agents,
                       std::vector<std::vector<std::string>> props)
      : agents_(std::move(agents)), props_(std::move(props)) {
    if (agents_.empty()) throw ParseError("signature needs at least one agent");
    if (props_.size() != agents_.size())
      throw ParseError("one proposition list per agent required");
    std::set<std::string> seen_agents;
    for (const auto& a : agents_) {
      check_name(a, "agent");
      if (!seen_agents.insert(a).second)
        throw ParseError("duplicate agent identifier: " + a);
    }
    std::map<std::string, int> owner;
    for (int i = 0; i < (int)agents_.size(); ++i) {
      std::set<std::string> seen;
      for (const auto& p : props_[i]) {
        check_name(p, "proposition");
        if (!seen.insert(p).second)
          throw ParseError("duplicate proposition " + p + " for agent " + agents_[i]);
        auto [it, fresh] = owner.emplace(p, i);
        if (!fresh)
          throw ParseError("proposition " + p + " declared for two agents (" +
                           agents_[it->second] + ", " + agents_[i] + ")");
      }
      if (props_[i].size() > 30)
        throw ResourceCapExceeded("more than 30 propositions for one agent");
    }
    for (const auto& [p, i] : owner) prop_owner_.emplace(p, i);
  }

  int num_agents() const { return (int)agents_.size(); }
  const std::vector<std::string>& agents() const { return agents_; }
  const std::string& agent_name(int i) const { return agents_.at(i); }
  const std::vector<std::string>& props(int i) const { return props_.at(i); }

  int agent_index(const std::string& name) const {
    auto it = std::find(agents_.begin(), agents_.end(), name);
    if (it == agents_.end()) throw ParseError("undeclared agent: " + name);
    return (int)(it - agents_.begin());
  }
  bool has_agent(const std::string& name) const {
    return std::find(agents_.begin(), agents_.end(), name) != agents_.end();
  }
  // owner agent of a proposition, or -1 when undeclared
  int owner_of(const std::string& prop) const {
    auto it = prop_owner_.find(prop);
    return it == prop_owner_.end() ? -1 : it->second;
  }
  int prop_index(int agent, const std::string& prop) const {
    const auto& ps = props_.at(agent);
    auto it = std::find(ps.begin(), ps.end(), prop);
    if (it == ps.end())
      throw ParseError("proposition " + prop + " not declared for agent " +
                       agents_.at(agent));
    return (int)(it - ps.begin());
  }

  bool operator==(const DistributedSignature&) const = default;

 private:
  // names must lex as identifiers and avoid the operator keywords
  static void check_name(const std::string& s, const char* what) {
    auto bad = [&] { throw ParseError(std::string("invalid ") + what + " name: " + s); };
    if (s.empty()) bad();
    if (!std::isalpha((unsigned char)s[0]) && s[0] != '_') bad();
    for (char c : s)
      if (!std::isalnum((unsigned char)c) && c != '_') bad();
    static const std::set<std::string> reserved = {"X", "G", "F", "C", "true", "false"};
    if (reserved.count(s)) bad();
  }

  std::vector<std::string> agents_;
  std::vector<std::vector<std::string>> props_;
  std::map<std::string, int> prop_owner_;
};

}  // namespace dtl
