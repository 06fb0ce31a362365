#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtl/parse.hpp"
#include "dtl/word.hpp"

namespace dtl {

// problem statement as a text file: one signature plus one global formula
//   agents: i, j
//   props i: p, q
//   props j: r
//   formula: @i[ G p ] -> @j[ F r ]
// '#' starts a comment, blank lines are ignored
struct SpecFile {
  DistributedSignature sig;
  GlobalFormula formula;
  std::string formula_text;
};

namespace detail {

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& s, int line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t c = s.find(',', pos);
    std::string part = strip(c == std::string::npos ? s.substr(pos) : s.substr(pos, c - pos));
    if (part.empty()) throw ParseError("empty name in list", line, 1);
    out.push_back(part);
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

}  // namespace detail

inline SpecFile parse_spec_file(const std::string& text) {
  std::vector<std::string> agents;
  std::map<std::string, std::vector<std::string>> props;
  std::optional<std::string> formula_text;
  int formula_line = 0;

  int line = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string raw = nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string s = detail::strip(raw);
    if (s.empty()) continue;
    size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'key: value' line", line, 1);
    std::string key = detail::strip(s.substr(0, colon));
    std::string val = detail::strip(s.substr(colon + 1));
    if (key == "agents") {
      if (!agents.empty()) throw ParseError("duplicate agents line", line, 1);
      agents = detail::split_commas(val, line);
    } else if (key.rfind("props", 0) == 0) {
      std::string who = detail::strip(key.substr(5));
      if (who.empty()) throw ParseError("props line needs an agent name", line, 1);
      if (props.count(who)) throw ParseError("duplicate props line for agent " + who, line, 1);
      props[who] = detail::split_commas(val, line);
    } else if (key == "formula") {
      if (formula_text) throw ParseError("duplicate formula line", line, 1);
      if (val.empty()) throw ParseError("empty formula", line, 1);
      formula_text = val;
      formula_line = line;
    } else {
      throw ParseError("unknown key '" + key + "'", line, 1);
    }
  }
  if (agents.empty()) throw ParseError("missing agents line");
  for (const auto& [who, ps] : props) {
    (void)ps;
    bool known = false;
    for (const auto& a : agents) known = known || a == who;
    if (!known) throw ParseError("props line for undeclared agent " + who);
  }
  std::vector<std::vector<std::string>> plist;
  for (const auto& a : agents) {
    auto it = props.find(a);
    plist.push_back(it == props.end() ? std::vector<std::string>{} : it->second);
  }
  DistributedSignature sig(agents, plist);
  if (!formula_text) throw ParseError("missing formula line");
  try {
    GlobalFormula f = parse_global(*formula_text, sig);
    return SpecFile{sig, f, *formula_text};
  } catch (const ParseError& e) {
    // re-anchor the position at the formula line of the file
    throw ParseError(std::string(e.what()), formula_line, 0);
  }
}

// lasso word as JSON: {"prefix": [letter...], "loop": [letter...]} where a
// letter maps participating agent names to complete prop->bool valuations
inline LassoWord parse_word_file(const std::string& text, const DistributedSignature& sig) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad word JSON: ") + e.what());
  }
  auto letter_of = [&](const nlohmann::json& jl, const std::string& where) {
    if (!jl.is_object() || jl.empty())
      throw ParseError("letter in " + where + " must be a nonempty agent->valuation object");
    GlobalLetter a;
    for (auto it = jl.begin(); it != jl.end(); ++it) {
      if (!sig.has_agent(it.key())) throw ParseError("unknown agent '" + it.key() + "'");
      int i = sig.agent_index(it.key());
      const auto& jv = *it;
      if (!jv.is_object()) throw ParseError("valuation of agent " + it.key() + " must be an object");
      Valuation v;
      v.agent = i;
      const auto& declared = sig.props(i);
      for (auto pit = jv.begin(); pit != jv.end(); ++pit) {
        int p = sig.prop_index(i, pit.key());
        if (p < 0)
          throw ParseError("agent " + it.key() + " has no proposition '" + pit.key() + "'");
        if (!pit->is_boolean())
          throw ParseError("proposition " + pit.key() + " must map to a boolean");
        v.set(p, pit->get<bool>());
      }
      if (jv.size() != declared.size())
        throw ParseError("valuation of agent " + it.key() + " must assign every proposition");
      a.add(i, v);
    }
    return a;
  };
  LassoWord w;
  try {
    for (const auto& jl : j.at("prefix")) w.prefix.push_back(letter_of(jl, "prefix"));
    for (const auto& jl : j.at("loop")) w.loop.push_back(letter_of(jl, "loop"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad word JSON: ") + e.what());
  }
  if (w.loop.empty()) throw ParseError("word loop must be nonempty");
  check_word(w, sig);
  return w;
}

inline nlohmann::ordered_json word_to_json(const LassoWord& w, const DistributedSignature& sig) {
  auto jletter = [&](const GlobalLetter& a) {
    nlohmann::ordered_json jl = nlohmann::ordered_json::object();
    for (const auto& [i, v] : a.parts) {
      nlohmann::ordered_json jv = nlohmann::ordered_json::object();
      for (size_t p = 0; p < sig.props(i).size(); ++p) jv[sig.props(i)[p]] = v.test((int)p);
      jl[sig.agent_name(i)] = std::move(jv);
    }
    return jl;
  };
  nlohmann::ordered_json j;
  j["prefix"] = nlohmann::ordered_json::array();
  for (const auto& a : w.prefix) j["prefix"].push_back(jletter(a));
  j["loop"] = nlohmann::ordered_json::array();
  for (const auto& a : w.loop) j["loop"].push_back(jletter(a));
  return j;
}

inline std::string word_to_json_text(const LassoWord& w, const DistributedSignature& sig) {
  return word_to_json(w, sig).dump(2) + "\n";
}

}  // namespace dtl
