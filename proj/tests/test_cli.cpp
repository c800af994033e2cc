#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ci/formats.hpp"

using namespace ci;

namespace {

std::string tool() {
  const char* t = std::getenv("CI_TOOL");
  REQUIRE(t != nullptr);
  return t;
}

std::string data() {
  const char* d = std::getenv("CI_DATA");
  REQUIRE(d != nullptr);
  return d;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_tool(const std::string& args) {
  std::string cmd = tool() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("exit code matrix") {
  std::string d = data();
  CHECK(run_tool("check " + d + "/instances/running.ci").exit_code == 0);
  CHECK(run_tool("check " + d + "/instances/running_rho13.ci").exit_code == 0);
  CHECK(run_tool("check " + d + "/instances/running_tight.ci").exit_code == 1);
  CHECK(run_tool("check /nonexistent.ci").exit_code == 2);
  CHECK(run_tool("check --bogus-flag x").exit_code == 2);
  CHECK(run_tool("").exit_code == 2);

  std::string bad_range = write_temp(
      "ci_cli_bad_range.ci",
      "hard = " + d + "/specs/no11.dfa\nsoft = " + d +
          "/specs/ham001.dfa\nm = 3\nn = 2\nepsilon = 0\nlambda = 0\n"
          "rho = 1\n");
  CHECK(run_tool("check " + bad_range).exit_code == 2);
  std::remove(bad_range.c_str());

  CHECK(run_tool("mci check " + d + "/instances/mci_pair.ci").exit_code == 0);
  CHECK(run_tool("mci check " + d + "/instances/mci_pair_tight.ci").exit_code ==
        1);
  CHECK(run_tool("improvise " + d + "/instances/running_tight.ci --count 1")
            .exit_code == 1);
}

TEST_CASE("check report contents") {
  std::string d = data();
  RunResult r = run_tool("check " + d + "/instances/running.ci");
  CHECK(r.out.find("FEASIBLE") == 0);
  CHECK(r.out.find("size_i: 5") != std::string::npos);
  CHECK(r.out.find("size_a: 3") != std::string::npos);
  CHECK(r.out.find("epsilon_opt: 1/4") != std::string::npos);

  RunResult j = run_tool("check " + d + "/instances/running.ci --format json");
  CHECK(j.out.find("\"status\": \"FEASIBLE\"") != std::string::npos);
  CHECK(j.out.find("\"size_i\": \"5\"") != std::string::npos);
  CHECK(j.out.find("\"epsilon_opt\": \"1/4\"") != std::string::npos);
}

TEST_CASE("counting commands") {
  std::string d = data();
  CHECK(run_tool("count " + d + "/specs/no11.dfa --min 3 --max 3").out ==
        "5\n");
  CHECK(run_tool("count " + d + "/specs/dyck.cfg --min 0 --max 6").out ==
        "9\n");
  CHECK(run_tool("count " + d + "/specs/no11.saut --min 3 --max 3").out ==
        "5\n");
  // Empty language: DFA with no accepting path in range.
  CHECK(run_tool("count " + d + "/specs/dyck.cfg --min 1 --max 1").out ==
        "0\n");
}

TEST_CASE("improvise basics") {
  std::string d = data();
  RunResult none =
      run_tool("improvise " + d + "/instances/running.ci --count 0");
  CHECK(none.exit_code == 0);
  CHECK(none.out.empty());

  RunResult ten = run_tool("improvise " + d +
                           "/instances/running.ci --count 10 --seed 4");
  CHECK(ten.exit_code == 0);
  int lines = 0;
  std::istringstream stream(ten.out);
  std::string line;
  while (std::getline(stream, line)) {
    ++lines;
    // Every improvisation is a length-3 no-11 word.
    CHECK(line.size() == 5);
    CHECK(line.find("1 1") == std::string::npos);
  }
  CHECK(lines == 10);

  // --tau is rejected for explicit instances and required for symbolic.
  CHECK(run_tool("improvise " + d +
                 "/instances/running.ci --count 1 --tau 1/2")
            .exit_code == 2);
  CHECK(run_tool("improvise " + d + "/instances/running_symbolic.ci --count 1")
            .exit_code == 2);
  CHECK(run_tool("improvise " + d +
                 "/instances/running_symbolic.ci --count 3 --tau 1/2 --seed 1")
            .exit_code == 0);
}

TEST_CASE("determinism across runs and jobs") {
  std::string d = data();
  std::string base = "improvise " + d +
                     "/instances/running.ci --count 200 --seed 99";
  RunResult a = run_tool(base);
  RunResult b = run_tool(base);
  RunResult c = run_tool(base + " --jobs 4");
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(!a.out.empty());

  std::string sample = "sample " + d +
                       "/specs/dyck.cfg --min 0 --max 6 --count 100 --seed 7";
  CHECK(run_tool(sample).out == run_tool(sample + " --jobs 3").out);

  std::string mci = "mci improvise " + d +
                    "/instances/mci_pair.ci --count 100 --seed 5";
  CHECK(run_tool(mci).out == run_tool(mci + " --jobs 2").out);

  // Different seeds diverge.
  CHECK(run_tool(base).out !=
        run_tool("improvise " + d +
                 "/instances/running.ci --count 200 --seed 100")
            .out);
}

TEST_CASE("shipped spec files round-trip") {
  std::string d = data();
  auto roundtrip_dfa = [&](const std::string& rel) {
    std::ifstream in(d + rel);
    REQUIRE(in.good());
    Dfa first = parse_dfa(in);
    std::istringstream again(format_dfa(first));
    Dfa second = parse_dfa(again);
    CHECK(format_dfa(second) == format_dfa(first));
    CHECK(second.state_count == first.state_count);
    CHECK(second.delta == first.delta);
    CHECK(second.accepting == first.accepting);
  };
  for (const char* rel :
       {"/specs/no11.dfa", "/specs/ham001.dfa", "/specs/depth1.dfa",
        "/specs/all2.dfa", "/specs/starts0.dfa", "/specs/ends0.dfa"})
    roundtrip_dfa(rel);

  {
    std::ifstream in(d + "/specs/dyck.cfg");
    REQUIRE(in.good());
    Cfg first = parse_cfg(in);
    std::istringstream again(format_cfg(first));
    Cfg second = parse_cfg(again);
    CHECK(format_cfg(second) == format_cfg(first));
    CHECK(second.productions == first.productions);
    CHECK(second.start == first.start);
  }
  {
    std::ifstream in(d + "/specs/ham001.cnf");
    REQUIRE(in.good());
    SymbolicSpec first = parse_symbolic_spec(in);
    std::istringstream again(format_symbolic_spec(first));
    SymbolicSpec second = parse_symbolic_spec(again);
    CHECK(format_symbolic_spec(second) == format_symbolic_spec(first));
    CHECK(second.projected == first.projected);
    CHECK(second.cnf.clauses == first.cnf.clauses);
  }
  {
    std::ifstream in(d + "/specs/no11.saut");
    REQUIRE(in.good());
    SymbolicAutomaton first = parse_symbolic_automaton(in);
    std::istringstream again(format_symbolic_automaton(first));
    SymbolicAutomaton second = parse_symbolic_automaton(again);
    CHECK(format_symbolic_automaton(second) ==
          format_symbolic_automaton(first));
    CHECK(second.delta == first.delta);
  }
}

TEST_CASE("parse errors carry line numbers") {
  std::string bad = write_temp("ci_cli_bad_dfa.dfa",
                               "alphabet: 0 1\nstates: 2\ninitial: 0\n"
                               "accepting: 0\n0 2 1\n");
  std::istringstream in("alphabet: 0 1\nstates: 2\ninitial: 0\n"
                        "accepting: 0\n0 2 1\n");
  try {
    (void)parse_dfa(in);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  CHECK(run_tool("count " + bad + " --min 0 --max 2").exit_code == 2);
  std::remove(bad.c_str());
}

TEST_CASE("nfa specs are determinized with a warning") {
  std::string d = data();
  // no11 as an NFA (same structure, NFA extension).
  std::string nfa = write_temp("ci_cli_no11.nfa",
                               "alphabet: 0 1\nstates: 2\ninitial: 0\n"
                               "accepting: 0 1\n0 0 0\n0 1 1\n1 0 0\n");
  std::string inst = write_temp(
      "ci_cli_nfa.ci", "hard = " + nfa + "\nsoft = " + d +
                           "/specs/ham001.dfa\nm = 3\nn = 3\n"
                           "epsilon = 1/4\nlambda = 0\nrho = 1/4\n");
  RunResult r = run_tool("check " + inst);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("determinized") != std::string::npos);
  CHECK(r.out.find("size_i: 5") != std::string::npos);
  std::remove(nfa.c_str());
  std::remove(inst.c_str());
}

TEST_CASE("unsupported combinations are refused") {
  std::string d = data();
  std::string inst = write_temp(
      "ci_cli_gg.ci", "hard = " + d + "/specs/dyck.cfg\nsoft = " + d +
                          "/specs/dyck.cfg\nm = 0\nn = 4\n"
                          "epsilon = 1/2\nlambda = 0\nrho = 1\n");
  CHECK(run_tool("check " + inst).exit_code == 2);
  std::remove(inst.c_str());
}
