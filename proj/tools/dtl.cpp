// batch front-end: satisfiability, word checking, automaton export
//
// exit codes are the machine contract:
//   0  positive answer (SAT, or both check verdicts hold, or export written)
//   1  negative answer (UNSAT, or at least one check verdict fails)
//   2  usage, parse, or input validation error (incl. unfair words)
//   3  resource cap exceeded
//   4  internal disagreement between the automaton and semantic routes

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dtl/dtl.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dtl::ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dtl::ParseError("cannot write file: " + path);
  out << text;
}

std::string render_word(const dtl::LassoWord& w, const dtl::DistributedSignature& sig) {
  auto letter = [&](const dtl::GlobalLetter& a) {
    std::string s = "[";
    bool first = true;
    for (const auto& [i, v] : a.parts) {
      if (!first) s += " ";
      first = false;
      s += sig.agent_name(i) + ":" + dtl::to_string(v, sig);
    }
    return s + "]";
  };
  std::string s = "prefix:";
  for (const auto& a : w.prefix) s += " " + letter(a);
  s += "\n  loop:";
  for (const auto& a : w.loop) s += " " + letter(a);
  return s;
}

int cmd_sat(const std::string& spec_path, bool negate, const std::string& witness_path,
            bool verify, long long max_states, long long timeout_ms) {
  dtl::SpecFile spec = dtl::parse_spec_file(read_file(spec_path));
  dtl::GlobalFormula alpha = negate ? dtl::GlobalFormula::neg(spec.formula) : spec.formula;
  dtl::Budget budget;
  budget.max_states = max_states;
  if (timeout_ms > 0)
    budget.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  auto hit = dtl::satisfiable(spec.sig, alpha, budget);
  if (!hit) {
    std::cout << "UNSAT\n";
    return 1;
  }
  const dtl::LassoWord& w = hit->first;
  std::cout << "SAT\n" << render_word(w, spec.sig) << "\n";
  if (verify) {
    dtl::LassoStructure mu = dtl::derive_structure(spec.sig, w);
    if (!dtl::sat_global(mu, alpha)) {
      std::cerr << "internal error: witness fails the semantic check\n";
      return 4;
    }
    std::cout << "verified: witness satisfies the formula under the trace semantics\n";
  }
  if (!witness_path.empty()) {
    write_file(witness_path, dtl::word_to_json_text(w, spec.sig));
    std::cout << "witness written to " << witness_path << "\n";
  }
  return 0;
}

int cmd_check(const std::string& spec_path, const std::string& word_path, bool json_out,
              long long max_states) {
  dtl::SpecFile spec = dtl::parse_spec_file(read_file(spec_path));
  dtl::LassoWord w = dtl::parse_word_file(read_file(word_path), spec.sig);
  dtl::require_fair(w, spec.sig);

  dtl::LassoStructure mu = dtl::derive_structure(spec.sig, w);
  bool semantic = dtl::sat_global(mu, spec.formula);

  dtl::Budget budget;
  budget.max_states = max_states;
  dtl::ConstrainedDnba C =
      dtl::constrain_dtl(spec.sig, spec.formula, dtl::CommScope::EntryLevel, budget);
  dtl::DnbaVerdict v = dtl::dnba_lasso_accepts(C.dnba, w);
  bool automaton = v.accepted;

  if (json_out) {
    nlohmann::ordered_json j;
    j["semantic"] = semantic;
    j["automaton"] = automaton;
    j["agree"] = semantic == automaton;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "semantic:  " << (semantic ? "holds" : "fails") << "\n";
    std::cout << "automaton: " << (automaton ? "accepts" : "rejects") << "\n";
  }
  if (semantic != automaton) {
    std::cerr << "internal error: the two verdicts disagree\n";
    return 4;
  }
  return semantic ? 0 : 1;
}

int cmd_export(const std::string& spec_path, const std::string& stage, const std::string& format,
               const std::string& out_path, long long max_states) {
  dtl::SpecFile spec = dtl::parse_spec_file(read_file(spec_path));
  dtl::Budget budget;
  budget.max_states = max_states;

  dtl::ExportAutomaton art;
  std::string name;
  if (stage.rfind("local:", 0) == 0) {
    std::string agent = stage.substr(6);
    if (!spec.sig.has_agent(agent))
      throw dtl::ParseError("unknown agent in --stage: " + agent);
    int i = spec.sig.agent_index(agent);
    dtl::ClosureTable tab(spec.sig, spec.formula, false);
    dtl::TableauAutomaton T = dtl::build_tableau_gnba(tab, i);
    art = dtl::to_export(T, tab);
    name = "local_" + agent;
  } else if (stage == "product") {
    dtl::TableauProduct tp = dtl::build_tableau_product(spec.sig, spec.formula);
    std::vector<dtl::Nba<dtl::Valuation>> comps;
    for (auto& d : tp.comps) comps.push_back(d.nba);
    dtl::Dnba<dtl::Valuation> D =
        dtl::build_product(comps, std::vector<std::string>(spec.sig.agents()), budget);
    art = dtl::to_export(D, spec.sig);
    name = "product";
  } else if (stage == "constrained") {
    dtl::ConstrainedDnba C =
        dtl::constrain_dtl(spec.sig, spec.formula, dtl::CommScope::StateLevel, budget);
    art = dtl::to_export(C.dnba, spec.sig);
    name = "constrained";
  } else {
    throw dtl::ParseError("unknown --stage: " + stage +
                          " (expected local:AGENT, product, or constrained)");
  }

  std::string text;
  if (format == "dot") {
    text = dtl::to_dot(art, name);
  } else if (format == "json") {
    text = dtl::to_json_text(art);
  } else {
    throw dtl::ParseError("unknown --format: " + format + " (expected dot or json)");
  }
  write_file(out_path, text);
  std::cout << "wrote " << out_path << " (" << art.states.size() << " states, "
            << art.alphabet.size() << " letters)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed temporal logic toolkit"};
  app.require_subcommand(1);

  std::string spec_path, word_path, witness_path, stage, format, out_path;
  bool negate = false, verify = false, json_out = false;
  long long max_states = 4'000'000;
  long long timeout_ms = 0;

  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability of the spec formula");
  sat->add_option("spec", spec_path, "spec file")->required();
  sat->add_flag("--negate", negate, "decide the negated formula instead");
  sat->add_option("--witness", witness_path, "write the witness word as JSON here");
  sat->add_flag("--verify", verify, "re-check the witness against the trace semantics");
  sat->add_option("--max-states", max_states, "state cap for the search");
  sat->add_option("--timeout-ms", timeout_ms, "wall-clock cap in milliseconds");

  CLI::App* check = app.add_subcommand("check", "check a lasso word against the spec formula");
  check->add_option("spec", spec_path, "spec file")->required();
  check->add_option("--word", word_path, "word file (JSON)")->required();
  check->add_flag("--json", json_out, "machine-readable report");
  check->add_option("--max-states", max_states, "state cap for the product");

  CLI::App* exp = app.add_subcommand("export", "export an automaton stage");
  exp->add_option("spec", spec_path, "spec file")->required();
  exp->add_option("--stage", stage, "local:AGENT | product | constrained")->required();
  exp->add_option("--format", format, "dot | json")->required();
  exp->add_option("--out", out_path, "output path")->required();
  exp->add_option("--max-states", max_states, "state cap for the construction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sat->parsed()) return cmd_sat(spec_path, negate, witness_path, verify, max_states,
                                      timeout_ms);
    if (check->parsed()) return cmd_check(spec_path, word_path, json_out, max_states);
    if (exp->parsed()) return cmd_export(spec_path, stage, format, out_path, max_states);
  } catch (const dtl::UnfairWord& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dtl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dtl::LabelMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dtl::PreconditionFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dtl::ResourceCapExceeded& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const dtl::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
