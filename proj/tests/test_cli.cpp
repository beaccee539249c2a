#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(PTV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data(const char* name) { return std::string(PTV_TEST_DATA_DIR) + "/" + name; }
std::string corpus(const char* name) { return std::string(PTV_TEST_CORPUS_DIR) + "/" + name; }

} // namespace

TEST_CASE("cli: entails on the toy systems (golden)") {
  RunResult v = run_cli("entails --system " + data("toy1.sys") + " --assume p --formula 'q|r'");
  CHECK(v.exit_code == 0);
  CHECK(v.out == "config: cmd=entails system=" + data("toy1.sys") +
                     " (explicit, 3 bases) base=0 {} policy=explosion assume=[p] "
                     "formula=q | r\n"
                     "result: valid\n");

  RunResult iv = run_cli("entails --system " + data("toy2.sys") +
                         " --assume p --formula 'q|r' --certificate");
  CHECK(iv.exit_code == 1);
  CHECK(iv.out == "config: cmd=entails system=" + data("toy2.sys") +
                      " (explicit, 4 bases) base=0 {} policy=explosion assume=[p] "
                      "formula=q | r\n"
                      "result: invalid\n"
                      "consequence [p] entails q | r at {} : INVALID\n"
                      "  ext {}: antecedent invalid\n"
                      "  ext {p}: antecedent valid, consequent INVALID\n"
                      "  atom p at {p} : VALID\n"
                      "    | p  [axiom p]\n"
                      "  or q | r at {p} : INVALID\n"
                      "    atom q at {p} : INVALID\n"
                      "      | no derivation of q from {p}\n"
                      "    atom r at {p} : INVALID\n"
                      "      | no derivation of r from {p}\n");
}

TEST_CASE("cli: derive (golden)") {
  RunResult r = run_cli("derive --base " + data("base_pq.rules") + " --goal q --certificate");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "config: cmd=derive base-file=" + data("base_pq.rules") +
                     " base={p, (p => q)} goal=q policy=explosion\n"
                     "result: derivable\n"
                     "  p  [axiom p]\n"
                     "  q  [by (p => q)]\n");
  RunResult miss = run_cli("derive --base " + data("base_pq.rules") + " --goal r");
  CHECK(miss.exit_code == 1);
}

TEST_CASE("cli: translate (golden)") {
  RunResult r1 = run_cli("translate --rule '(p, q => r)'");
  CHECK(r1.exit_code == 0);
  CHECK(r1.out ==
        "config: cmd=translate direction=rule-to-formula rule=(p, q => r)\n"
        "formula: p & q -> r\n");
  RunResult r2 = run_cli("translate --formula '(p -> q) -> r'");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out ==
        "config: cmd=translate direction=formula-to-rules formula=(p -> q) -> r\n"
        "rule: ((p => q) => r)\n");
  RunResult bad = run_cli("translate --formula 'p | q'");
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.find("rule:") == std::string::npos);
}

TEST_CASE("cli: check at a base and over the whole system") {
  RunResult r = run_cli("check --system " + data("toy1.sys") + " --base 0 --formula 'p -> (q|r)'");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("result: valid\n") != std::string::npos);
  RunResult ptv = run_cli("check --system " + data("harrop.sys") +
                          " --ptv --formula '(p -> (q|r)) -> ((p->q) | (p->r))'");
  CHECK(ptv.exit_code == 0);
  RunResult opt = run_cli("check --system " + data("harrop.sys") +
                          " --base 0 --optimized --formula '~~p -> p'");
  RunResult brute = run_cli("check --system " + data("harrop.sys") +
                            " --base 0 --formula '~~p -> p'");
  CHECK(opt.exit_code == brute.exit_code);
}

TEST_CASE("cli: argcheck and normalize") {
  RunResult ok = run_cli("argcheck --system " + data("toy1.sys") + " --arg " + corpus("c02.sx"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("well-formed: yes\nresult: valid\n") != std::string::npos);

  RunResult norm = run_cli("normalize --arg " + corpus("c07.sx"));
  CHECK(norm.exit_code == 0);
  CHECK(norm.out ==
        "config: cmd=normalize arg=" + corpus("c07.sx") +
            " fuel=10000 strategy=leftmost-outermost\n"
            "steps: 2\n"
            "normal-form: reached\n"
            "(assume hp p)\n");
  RunResult fuel = run_cli("normalize --arg " + corpus("c19.sx") + " --fuel 1");
  CHECK(fuel.exit_code == 1);
  CHECK(fuel.out.find("normal-form: fuel-exhausted\n") != std::string::npos);
}

TEST_CASE("cli: ipc oracle") {
  RunResult prov = run_cli("ipc --formula 'p -> p'");
  CHECK(prov.exit_code == 0);
  CHECK(prov.out ==
        "config: cmd=ipc formula=p -> p\n"
        "result: provable\n");
  RunResult unprov = run_cli("ipc --formula '~~p -> p' --countermodel");
  CHECK(unprov.exit_code == 1);
  CHECK(unprov.out ==
        "config: cmd=ipc formula=~~p -> p countermodel=yes max-worlds=4\n"
        "result: unprovable\n"
        "worlds: 2\n"
        "order: 0<=1\n"
        "w0: {}\n"
        "w1: {p}\n");
}

TEST_CASE("cli: search produces stable reports and report re-renders them") {
  std::string args = "search --system " + data("toy1.sys") +
                     " --max-depth 3 --max-atoms 3 --findings-cap 1000 --format csv";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out); // bit-identical
  CHECK(a.out.find("p -> q | r,toy1,true,false,explosion,3\n") != std::string::npos);

  // write a findings file, re-render as text
  std::string csv_path = "/tmp/ptv_findings_test.csv";
  RunResult w = run_cli(args + " --out " + csv_path);
  CHECK(w.exit_code == 0);
  RunResult rep = run_cli("report --in " + csv_path + " --format text");
  CHECK(rep.exit_code == 0);
  CHECK(rep.out.find("p -> q | r") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_cli("check --system " + data("toy1.sys")).exit_code == 2); // missing --formula
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("check --system /nonexistent.sys --formula p").exit_code == 2);
  CHECK(run_cli("check --system " + data("toy1.sys") + " --base 99 --formula p").exit_code ==
        2);
  CHECK(run_cli("entails --system " + data("toy1.sys") + " --assume 'p |' --formula q")
            .exit_code == 2);
}

TEST_CASE("cli: exit codes are the machine contract") {
  CHECK(run_cli("check --system " + data("toy2.sys") + " --ptv --formula 'p -> (q|r)'")
            .exit_code == 1);
  CHECK(run_cli("check --system " + data("toy1.sys") + " --ptv --formula 'p -> (q|r)'")
            .exit_code == 0);
}

TEST_CASE("cli: toy-1 search matches the golden report") {
  RunResult r = run_cli("search --system " + data("toy1.sys") +
                        " --max-depth 2 --max-atoms 3 --findings-cap 1000");
  CHECK(r.exit_code == 0);
  // strip the config echo (it names the file path), keep the report
  std::string body = r.out.substr(r.out.find('\n') + 1);
  std::ifstream in(std::string(PTV_TEST_DATA_DIR) + "/../golden/toy1_search_depth2.txt");
  REQUIRE(in.good());
  std::ostringstream golden;
  golden << in.rdbuf();
  CHECK(body == golden.str());
}
