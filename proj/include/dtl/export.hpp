#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtl/print.hpp"
#include "dtl/product.hpp"
#include "dtl/tableau.hpp"

namespace dtl {

// format-neutral automaton snapshot: states with labels and acceptance-set
// names, edges in a fixed order, alphabet as rendered strings
struct ExportAutomaton {
  struct State {
    int id = 0;
    std::string label;
    bool initial = false;
    std::vector<std::string> accepting;
    bool operator==(const State&) const = default;
  };
  struct Edge {
    int from = 0;
    std::string letter;
    int to = 0;
    bool operator==(const Edge&) const = default;
  };
  std::vector<std::string> alphabet;
  std::vector<State> states;
  std::vector<Edge> edges;
  bool operator==(const ExportAutomaton&) const = default;
};

inline std::string letter_text(const Valuation& v, const DistributedSignature& sig) {
  return to_string(v, sig);
}

inline std::string letter_text(const GlobalLetter& a, const DistributedSignature& sig) {
  std::string s = "[";
  bool first = true;
  for (const auto& [i, v] : a.parts) {
    if (!first) s += " ";
    first = false;
    s += sig.agent_name(i) + ":" + to_string(v, sig);
  }
  return s + "]";
}

inline std::string letter_text(const std::string& s, const DistributedSignature&) { return s; }

inline std::string letter_text(const BasicLetter<std::string>& a, const DistributedSignature& sig) {
  std::string s = "[";
  bool first = true;
  for (const auto& [i, sym] : a.parts) {
    if (!first) s += " ";
    first = false;
    s += sig.agent_name(i) + ":" + sym;
  }
  return s + "]";
}

namespace detail {

template <typename Sym>
void export_core(const AutomatonCore<Sym>& A, const DistributedSignature& sig,
                 ExportAutomaton& out) {
  for (const Sym& a : A.alphabet) out.alphabet.push_back(letter_text(a, sig));
  for (int q = 0; q < A.num_states(); ++q) {
    ExportAutomaton::State s;
    s.id = q;
    s.label = A.state_names[q];
    s.initial = std::binary_search(A.initial.begin(), A.initial.end(), q);
    out.states.push_back(std::move(s));
  }
  for (int q = 0; q < A.num_states(); ++q)
    for (int a = 0; a < A.num_letters(); ++a)
      for (int r : A.succ(q, a)) out.edges.push_back({q, out.alphabet[a], r});
}

}  // namespace detail

template <typename Sym>
ExportAutomaton to_export(const Nba<Sym>& A, const DistributedSignature& sig) {
  ExportAutomaton out;
  detail::export_core(A, sig, out);
  for (int q = 0; q < A.num_states(); ++q)
    if (A.accepting[q]) out.states[q].accepting.push_back("acc");
  return out;
}

template <typename Sym>
ExportAutomaton to_export(const Gnba<Sym>& G, const DistributedSignature& sig,
                          const std::vector<std::string>& family_names) {
  if ((int)family_names.size() != (int)G.families.size())
    throw PreconditionFailed("one name per acceptance family required");
  ExportAutomaton out;
  detail::export_core(G, sig, out);
  for (size_t f = 0; f < G.families.size(); ++f)
    for (int q = 0; q < G.num_states(); ++q)
      if (G.families[f][q]) out.states[q].accepting.push_back(family_names[f]);
  return out;
}

template <typename Sym>
ExportAutomaton to_export(const Dnba<Sym>& D, const DistributedSignature& sig) {
  return to_export(static_cast<const Gnba<BasicLetter<Sym>>&>(D), sig, D.agent_names);
}

// acceptance families of a tableau automaton are named after the obligation
// they discharge
inline ExportAutomaton to_export(const TableauAutomaton& T, const ClosureTable& tab) {
  std::vector<std::string> names;
  for (int g : T.family_always_ids) names.push_back(to_string(tab.base(g), tab.sig()));
  return to_export(T.gnba, tab.sig(), names);
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// layout-free structural DOT: one node per state, doubled border for states
// in at least one acceptance set, entry arrows for initial states
inline std::string to_dot(const ExportAutomaton& A, const std::string& name = "automaton") {
  std::string s = "digraph \"" + detail::dot_escape(name) + "\" {\n";
  s += "  rankdir=LR;\n  node [shape=ellipse];\n";
  for (const auto& st : A.states) {
    std::string label = st.label;
    if (!st.accepting.empty()) {
      label += "\\n";
      for (size_t k = 0; k < st.accepting.size(); ++k)
        label += (k ? "," : "") + st.accepting[k];
    }
    s += "  q" + std::to_string(st.id) + " [label=\"" + detail::dot_escape(label) + "\"";
    if (!st.accepting.empty()) s += ", peripheries=2";
    s += "];\n";
    if (st.initial) {
      s += "  init" + std::to_string(st.id) + " [shape=point, style=invis];\n";
      s += "  init" + std::to_string(st.id) + " -> q" + std::to_string(st.id) + ";\n";
    }
  }
  for (const auto& e : A.edges)
    s += "  q" + std::to_string(e.from) + " -> q" + std::to_string(e.to) + " [label=\"" +
         detail::dot_escape(e.letter) + "\"];\n";
  s += "}\n";
  return s;
}

inline nlohmann::ordered_json to_json(const ExportAutomaton& A) {
  nlohmann::ordered_json j;
  j["states"] = nlohmann::ordered_json::array();
  for (const auto& st : A.states) {
    nlohmann::ordered_json s;
    s["id"] = st.id;
    s["label"] = st.label;
    s["initial"] = st.initial;
    s["accepting"] = st.accepting;
    j["states"].push_back(std::move(s));
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : A.edges) {
    nlohmann::ordered_json x;
    x["from"] = e.from;
    x["letter"] = e.letter;
    x["to"] = e.to;
    j["edges"].push_back(std::move(x));
  }
  j["alphabet"] = A.alphabet;
  return j;
}

inline std::string to_json_text(const ExportAutomaton& A) { return to_json(A).dump(2) + "\n"; }

inline ExportAutomaton automaton_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad automaton JSON: ") + e.what());
  }
  ExportAutomaton A;
  try {
    for (const auto& s : j.at("states")) {
      ExportAutomaton::State st;
      st.id = s.at("id").get<int>();
      st.label = s.at("label").get<std::string>();
      st.initial = s.at("initial").get<bool>();
      for (const auto& n : s.at("accepting")) st.accepting.push_back(n.get<std::string>());
      A.states.push_back(std::move(st));
    }
    for (const auto& e : j.at("edges"))
      A.edges.push_back({e.at("from").get<int>(), e.at("letter").get<std::string>(),
                         e.at("to").get<int>()});
    for (const auto& a : j.at("alphabet")) A.alphabet.push_back(a.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad automaton JSON: ") + e.what());
  }
  return A;
}

}  // namespace dtl
