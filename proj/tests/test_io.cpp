#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "dtl/dtl.hpp"
#include "support/generators.hpp"
#include "support/reference_fixtures.hpp"

using namespace dtl;

namespace {

// expect a ParseError whose message mentions `needle` and, when `line` is
// nonnegative, that is anchored at that line
template <typename Fn>
void expect_parse_error(Fn&& fn, const std::string& needle, int line = -1) {
  try {
    fn();
    FAIL("expected a ParseError mentioning '" << needle << "'");
  } catch (const ParseError& e) {
    INFO(e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
    if (line >= 0) CHECK(e.line == line);
  }
}

}  // namespace

TEST_CASE("spec files parse into a signature and a formula") {
  std::string text =
      "# toy system\n"
      "agents: i, j\n"
      "\n"
      "props i: p, q\n"
      "formula: @i[ G p ] -> @j[ F r ]   # props j comes later\n"
      "props j: r\n";
  SpecFile sf = parse_spec_file(text);
  CHECK(sf.sig.num_agents() == 2);
  CHECK(sf.sig.agent_name(0) == "i");
  CHECK(sf.sig.props(0) == std::vector<std::string>{"p", "q"});
  CHECK(sf.sig.props(1) == std::vector<std::string>{"r"});
  CHECK(sf.formula_text == "@i[ G p ] -> @j[ F r ]");
  CHECK(to_string(sf.formula, sf.sig) == "@i[G p] -> @j[!G !r]");
}

TEST_CASE("agents without a props line get an empty vocabulary") {
  SpecFile sf = parse_spec_file("agents: i, j\nprops i: p\nformula: @i[p]\n");
  CHECK(sf.sig.props(1).empty());
}

TEST_CASE("spec file structural errors carry line numbers") {
  expect_parse_error([] { parse_spec_file("formula: @i[p]\n"); }, "missing agents");
  expect_parse_error([] { parse_spec_file("agents: i\nprops i: p\n"); },
                     "missing formula");
  expect_parse_error(
      [] { parse_spec_file("agents: i\nagents: j\nformula: @i[p]\n"); },
      "duplicate agents", 2);
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops i: p\nprops i: q\nformula: @i[p]\n"); },
      "duplicate props line for agent i", 3);
  expect_parse_error(
      [] { parse_spec_file("agents: i\nbogus: 3\nformula: @i[p]\n"); },
      "unknown key 'bogus'", 2);
  expect_parse_error(
      [] { parse_spec_file("agents: i\nthis line has no colon-free shape\n"); },
      "key: value");
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops j: p\nformula: @i[p]\n"); },
      "undeclared agent j");
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops: p\nformula: @i[p]\n"); },
      "needs an agent name", 2);
  expect_parse_error(
      [] { parse_spec_file("agents: i, , j\nformula: @i[p]\n"); },
      "empty name", 1);
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops i: p\nformula:\n"); },
      "empty formula", 3);
}

TEST_CASE("formula errors are re-anchored at the formula line") {
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops i: p\n\nformula: @i[ p -> ]\n"); },
      "", 4);
  expect_parse_error(
      [] { parse_spec_file("agents: i\nprops i: p\nformula: @j[ p ]\n"); },
      "", 3);
}

TEST_CASE("word JSON round-trips through text") {
  DistributedSignature sig = fixtures::running_sig();
  gen::Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    LassoWord w = gen::random_fair_word(rng, sig, 3, 3);
    LassoWord back = parse_word_file(word_to_json_text(w, sig), sig);
    INFO("sample " << t);
    CHECK(back == w);
  }
}

TEST_CASE("word JSON parser rejects malformed input") {
  DistributedSignature sig = fixtures::running_sig();
  auto parse = [&](const std::string& s) { return parse_word_file(s, sig); };
  expect_parse_error([&] { parse("not json"); }, "bad word JSON");
  expect_parse_error([&] { parse(R"({"loop": [{"i": {"p": true}}]})"); },
                     "bad word JSON");  // missing prefix
  expect_parse_error([&] { parse(R"({"prefix": [], "loop": []})"); },
                     "loop must be nonempty");
  expect_parse_error([&] { parse(R"({"prefix": [], "loop": [{}]})"); },
                     "nonempty agent->valuation object");
  expect_parse_error([&] { parse(R"({"prefix": [], "loop": [3]})"); },
                     "nonempty agent->valuation object");
  expect_parse_error(
      [&] { parse(R"({"prefix": [], "loop": [{"z": {"p": true}}]})"); },
      "unknown agent 'z'");
  expect_parse_error(
      [&] { parse(R"({"prefix": [], "loop": [{"i": {"q": true}}]})"); },
      "q not declared for agent i");
  expect_parse_error(
      [&] { parse(R"({"prefix": [], "loop": [{"i": {"p": 1}}]})"); },
      "must map to a boolean");
  expect_parse_error([&] { parse(R"({"prefix": [], "loop": [{"i": {}}]})"); },
                     "must assign every proposition");
  expect_parse_error([&] { parse(R"({"prefix": [], "loop": [{"i": true}]})"); },
                     "must be an object");
}

TEST_CASE("word JSON text is stable under reserialization") {
  DistributedSignature sig = fixtures::running_sig();
  LassoWord w;
  GlobalLetter a;
  Valuation v0;
  v0.agent = 0;
  v0.set(0, true);
  a.add(0, v0);
  Valuation v1;
  v1.agent = 1;
  a.add(1, v1);
  w.prefix = {a};
  w.loop = {a};
  std::string once = word_to_json_text(w, sig);
  std::string twice = word_to_json_text(parse_word_file(once, sig), sig);
  CHECK(once == twice);
}

TEST_CASE("automaton export JSON round-trips byte for byte") {
  DistributedSignature sig(fixtures::pair_agent_names(), {{}, {}});
  Budget budget;
  Dnba<std::string> D =
      build_product<std::string>({fixtures::a1(), fixtures::a2()},
                                 fixtures::pair_agent_names(), budget);
  ExportAutomaton E = to_export(D, sig);
  std::string text = to_json_text(E);
  ExportAutomaton back = automaton_from_json(text);
  CHECK(back == E);
  CHECK(to_json_text(back) == text);
  expect_parse_error([] { automaton_from_json("{"); }, "bad automaton JSON");
  expect_parse_error([] { automaton_from_json(R"({"states": []})"); },
                     "bad automaton JSON");
}

TEST_CASE("exported views carry acceptance names") {
  DistributedSignature sig(fixtures::pair_agent_names(), {{}, {}});

  ExportAutomaton e1 = to_export(fixtures::a1(), sig);
  REQUIRE(e1.states.size() == 2);
  CHECK(e1.states[1].accepting == std::vector<std::string>{"acc"});
  CHECK(e1.states[0].accepting.empty());
  CHECK(e1.states[0].initial);
  CHECK_FALSE(e1.states[1].initial);
  CHECK(e1.alphabet == std::vector<std::string>{"0", "1"});

  // one name per family is required, then names land on member states
  Gnba<std::string> G;
  G.add_letter("a");
  int s0 = G.add_state("u");
  int s1 = G.add_state("w");
  G.add_family();
  G.add_family();
  G.mark_accepting(0, s0);
  G.mark_accepting(1, s0);
  G.mark_accepting(1, s1);
  CHECK_THROWS_AS(to_export(G, sig, {"only"}), PreconditionFailed);
  ExportAutomaton eg = to_export(G, sig, {"first", "second"});
  CHECK(eg.states[0].accepting == std::vector<std::string>{"first", "second"});
  CHECK(eg.states[1].accepting == std::vector<std::string>{"second"});

  // product exports name the per-agent fairness sets by agent
  Budget budget;
  Dnba<std::string> D =
      build_product<std::string>({fixtures::a1(), fixtures::a2()},
                                 fixtures::pair_agent_names(), budget);
  ExportAutomaton ed = to_export(D, sig);
  bool saw_one = false, saw_two = false;
  for (const auto& st : ed.states)
    for (const auto& n : st.accepting) {
      saw_one = saw_one || n == "one";
      saw_two = saw_two || n == "two";
    }
  CHECK(saw_one);
  CHECK(saw_two);

  // tableau exports name families after the obligation they discharge
  DistributedSignature gsig = fixtures::gp_sig();
  GlobalFormula alpha = fixtures::gp_alpha(gsig);
  ClosureTable tab(gsig, alpha, false);
  TableauAutomaton T = build_tableau_gnba(tab, 0);
  ExportAutomaton et = to_export(T, tab);
  bool named = false;
  for (const auto& st : et.states)
    for (const auto& n : st.accepting) named = named || n == "G p";
  CHECK(named);
}

TEST_CASE("DOT output shows structure") {
  DistributedSignature sig(fixtures::pair_agent_names(), {{}, {}});
  ExportAutomaton E = to_export(fixtures::a1(), sig);
  std::string dot = to_dot(E, "pair \"one\"");
  CHECK(dot.find("digraph \"pair \\\"one\\\"\"") != std::string::npos);
  CHECK(dot.find("rankdir=LR") != std::string::npos);
  CHECK(dot.find("peripheries=2") != std::string::npos);
  CHECK(dot.find("init0 -> q0") != std::string::npos);
  CHECK(dot.find("init1") == std::string::npos);  // q1 is not initial
  // one line per edge
  size_t edges = 0, pos = 0;
  while ((pos = dot.find("] -> q", pos)) != std::string::npos) ++pos;
  pos = 0;
  while ((pos = dot.find(" -> q", pos)) != std::string::npos) {
    ++edges;
    ++pos;
  }
  CHECK(edges == E.edges.size() + 1);  // +1 for the single entry arrow
}
