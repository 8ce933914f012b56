// End-to-end tests of the command line tool, driven through the shell.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "seqrule/dataset_io.hpp"

namespace {

struct CommandResult {
  int status;
  std::string output;
};

CommandResult run(const std::string& args) {
  std::string cmd = std::string(SEQRULE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) output.append(buf, n);
  int rc = pclose(pipe);
  return {WEXITSTATUS(rc), output};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/seqrule_cli_XXXXXX";
    path = mkdtemp(tmpl);
  }
  ~TempDir() {
    if (std::system(("rm -rf " + path).c_str()) != 0) std::perror("TempDir cleanup");
  }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace

TEST_CASE("validate: exit codes and report") {
  TempDir dir;
  std::ofstream(dir.file("good.sqr")) << "VOCAB 5\nRULE a WHEN cur[1] THEN 2 = 1\n";
  auto good = run("validate " + dir.file("good.sqr"));
  CHECK(good.status == 0);
  CHECK(good.output.find("ok") != std::string::npos);

  std::ofstream(dir.file("cycle.sqr"))
      << "VOCAB 5\nRULE a WHEN cur[1] THEN 2 = 1\nRULE b WHEN cur[2] THEN 1 = 1\n";
  auto bad = run("validate " + dir.file("cycle.sqr"));
  CHECK(bad.status == 1);
  CHECK(bad.output.find("cyclic") != std::string::npos);

  std::ofstream(dir.file("syntax.sqr")) << "VOCAB 5\nRULE a THEN 9 = 1\n";
  auto syntax = run("validate " + dir.file("syntax.sqr"));
  CHECK(syntax.status == 1);
  CHECK(syntax.output.find("2:") != std::string::npos);  // line number
}

TEST_CASE("validate --dump writes the compiled program") {
  TempDir dir;
  std::ofstream(dir.file("r.sqr")) << "VOCAB 5\nRULE a WHEN past[-1][0] THEN 0 = 1\n";
  auto res = run("validate " + dir.file("r.sqr") + " --dump " + dir.file("prog.txt"));
  CHECK(res.status == 0);
  auto dump = slurp(dir.file("prog.txt"));
  CHECK(dump.find("groups 1") != std::string::npos);
  CHECK(dump.find("W (") != std::string::npos);
}

TEST_CASE("convert: CNF to rules") {
  TempDir dir;
  std::ofstream(dir.file("in.cnf")) << "VOCAB 4\n"
                                       "VAR a cur 0\n"
                                       "VAR b cur 1\n"
                                       "CLAUSE a b\n"
                                       "CLAUSE -a -b\n";
  auto res = run("convert " + dir.file("in.cnf") + " " + dir.file("out.sqr"));
  CHECK(res.status == 0);
  auto rules = slurp(dir.file("out.sqr"));
  CHECK(rules.find("RULE cnf1 WHEN NOT cur[0] THEN 1 = 1") != std::string::npos);
  CHECK(rules.find("RULE cnf2 WHEN cur[0] THEN 1 = 0") != std::string::npos);
}

TEST_CASE("pipeline: synth, mine, fit, generate, check round trip") {
  TempDir dir;
  auto synth = run("synth -n 800 --seed 5 -o " + dir.file("train.sqd"));
  CHECK(synth.status == 0);

  auto mine = run("mine " + dir.file("train.sqd") + " " + dir.file("rules.sqr") +
                  " --demo-group 0,1 --demo-group 2,3,4");
  CHECK(mine.status == 0);
  CHECK(run("validate " + dir.file("rules.sqr")).status == 0);

  CHECK(run("fit " + dir.file("train.sqd") + " -o " + dir.file("m.sqm")).status == 0);

  auto gen = run("generate --model " + dir.file("m.sqm") + " --rules " + dir.file("rules.sqr") +
                 " -n 300 --seed 9 -o " + dir.file("gen.sqd") + " --threads 2");
  CHECK(gen.status == 0);

  auto chk = run("check " + dir.file("gen.sqd") + " " + dir.file("rules.sqr"));
  CHECK(chk.status == 0);
  CHECK(chk.output.find("static_violations 0") != std::string::npos);
  CHECK(chk.output.find("temporal_violations 0") != std::string::npos);
  CHECK(chk.output.find("percent_valid 100.0000") != std::string::npos);

  auto batch = run("check " + dir.file("gen.sqd") + " " + dir.file("rules.sqr") + " --mode batch");
  CHECK(batch.status == 0);
  CHECK(batch.output.find("changed_cells 0") != std::string::npos);

  // Unconstrained generation must show violations of the mined rules.
  auto raw = run("generate --model " + dir.file("m.sqm") + " -n 300 --seed 9 -o " +
                 dir.file("raw.sqd"));
  CHECK(raw.status == 0);
  auto raw_chk = run("check " + dir.file("raw.sqd") + " " + dir.file("rules.sqr"));
  CHECK(raw_chk.status == 1);
}

TEST_CASE("generate: byte-identical outputs for fixed seed; threads do not change records") {
  TempDir dir;
  run("synth -n 300 --seed 3 -o " + dir.file("t.sqd"));
  run("mine " + dir.file("t.sqd") + " " + dir.file("r.sqr") + " --demo-group 0,1");
  run("fit " + dir.file("t.sqd") + " -o " + dir.file("m.sqm"));

  std::string base = "generate --model " + dir.file("m.sqm") + " --rules " + dir.file("r.sqr") +
                     " -n 120 --seed 77 -o ";
  CHECK(run(base + dir.file("a.sqd") + " --threads 1").status == 0);
  CHECK(run(base + dir.file("b.sqd") + " --threads 1").status == 0);
  CHECK(run(base + dir.file("c.sqd") + " --threads 4").status == 0);
  auto a = slurp(dir.file("a.sqd"));
  CHECK(a == slurp(dir.file("b.sqd")));
  CHECK(a == slurp(dir.file("c.sqd")));
}

TEST_CASE("train prints a loss trace") {
  TempDir dir;
  run("synth -n 200 --seed 2 -o " + dir.file("t.sqd"));
  run("mine " + dir.file("t.sqd") + " " + dir.file("r.sqr") + " --demo-group 0,1");
  auto res = run("train " + dir.file("t.sqd") + " --rules " + dir.file("r.sqr") +
                 " --epochs 3 -o " + dir.file("m.sqm"));
  CHECK(res.status == 0);
  CHECK(res.output.find("epoch 1 constrained_nll") != std::string::npos);
  CHECK(res.output.find("epoch 3 constrained_nll") != std::string::npos);
}

TEST_CASE("bench reports a slowdown line") {
  TempDir dir;
  run("synth -n 150 --seed 4 -o " + dir.file("t.sqd"));
  run("mine " + dir.file("t.sqd") + " " + dir.file("r.sqr") + " --demo-group 0,1");
  run("fit " + dir.file("t.sqd") + " -o " + dir.file("m.sqm"));
  auto res = run("bench --model " + dir.file("m.sqm") + " --rules " + dir.file("r.sqr") +
                 " -n 40 --repeats 3");
  CHECK(res.status == 0);
  CHECK(res.output.find("unconstrained s/record") != std::string::npos);
  CHECK(res.output.find("slowdown") != std::string::npos);
}

TEST_CASE("mine honors thresholds") {
  TempDir dir;
  run("synth -n 800 --seed 5 -o " + dir.file("t.sqd"));
  // Absurd thresholds: only the structural demographic chains remain.
  auto res = run("mine " + dir.file("t.sqd") + " " + dir.file("r.sqr") +
                 " --demo-group 0,1 --min-exclusive 100000 --min-demo 100000"
                 " --min-precede 100000 --min-persist 100000");
  CHECK(res.status == 0);
  auto rules = slurp(dir.file("r.sqr"));
  CHECK(rules.find("ps_") == std::string::npos);
  CHECK(rules.find("pr_") == std::string::npos);
  CHECK(rules.find("co_") == std::string::npos);
  CHECK(rules.find("df_") == std::string::npos);
  CHECK(rules.find("dx_0_1") != std::string::npos);
}
