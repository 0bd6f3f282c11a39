#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "windcheck/dtmc.hpp"
#include "windcheck/gcl/builder.hpp"
#include "windcheck/gcl/model.hpp"

namespace fs = std::filesystem;
using namespace windcheck;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(WINDCHECK_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(WINDCHECK_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kSmall = "[mission]\ngrid_width = 3\ngrid_height = 3\nbase_x = 1\nbase_y = 1\n";

}  // namespace

TEST(Cli, ExitCodes) {
  const std::string small = write("small.ini", kSmall);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("--config " + small + " verify").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("verify --scenario 7").code, 2);
  EXPECT_EQ(run("verify --variant medium").code, 2);
  EXPECT_EQ(run("verify --config /nonexistent.ini").code, 2);
  EXPECT_EQ(run("verify --config " + write("bad.ini", "[mission]\nspeed = 3\n")).code, 2);
  EXPECT_EQ(run("verify --dtmc " + write("bad.dtmc", "dtmc 2 0\n0 1 0.5\n1 1 1\n")).code, 2);
  EXPECT_EQ(run("--config " + small + " verify 'P=? [ F'").code, 3);
  EXPECT_EQ(run("--config " + small + " verify 'P=? [ F \"nowhere\" ]'").code, 3);
  EXPECT_EQ(run("--config " + small + " sweep --lo 3 --hi 4 --property 'R{\"zz\"}=? [ F \"done\" ]'").code, 3);
  EXPECT_EQ(run("--scenario 1 verify --method gauss-seidel --max-iterations 3").code, 4);
}

TEST(Cli, VerifyJsonIsStableAndGlobalFlagsGoAnywhere) {
  const std::string small = write("small.ini", kSmall);
  const Outcome a = run("--json --config " + small + " verify");
  const Outcome b = run("verify --config " + small + " --json");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["formula"], "P=? [ F \"success\" ]");
  EXPECT_GE(j[0]["value"].get<double>(), 0.0);
  EXPECT_LE(j[0]["value"].get<double>(), 1.0);
}

TEST(Cli, SimulateIsDeterministicAcrossThreads) {
  const std::string small = write("small.ini", kSmall);
  const std::string args = "--config " + small + " simulate -n 3000 --json --seed 17";
  const Outcome one = run(args + " --threads 1");
  const Outcome four = run(args + " --threads 4");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_NE(one.out, run("--config " + small + " simulate -n 3000 --json --seed 18").out);

  const auto t1 = scratch("trace_a.csv"), t2 = scratch("trace_b.csv");
  ASSERT_EQ(run(args + " --trace-out " + t1.string()).code, 0);
  ASSERT_EQ(run(args + " --threads 3 --trace-out " + t2.string()).code, 0);
  const std::string trace = slurp(t1);
  EXPECT_EQ(trace, slurp(t2));
  EXPECT_EQ(trace.rfind("# windcheck v", 0), 0u);
  EXPECT_NE(trace.find("step,action,"), std::string::npos);

  const auto many = scratch("many.csv");
  ASSERT_EQ(run(args + " --traces 2 --trace-out " + many.string()).code, 0);
  EXPECT_TRUE(fs::exists(scratch("many_0.csv")));
  EXPECT_TRUE(fs::exists(scratch("many_1.csv")));
}

TEST(Cli, SweepIsDeterministicAcrossThreads) {
  const std::string small = write("small.ini", kSmall);
  const std::string args = "--config " + small + " sweep --lo 4 --hi 6 --step 0.5 --variants advanced,basic_high";
  const Outcome one = run(args + " --threads 1");
  const Outcome three = run(args + " --threads 3");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, three.out);
  std::istringstream in(one.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) rows += line.rfind("c_new,", 0) == 0;
  EXPECT_EQ(rows, 10);

  const auto file = scratch("sweep.csv");
  ASSERT_EQ(run(args + " -o " + file.string()).code, 0);
  EXPECT_EQ(slurp(file), one.out);
}

// The emitted guarded-command text rebuilds the very chain the tool checks.
TEST(Cli, EmittedModelRoundTrips) {
  const std::string small = write("small.ini", kSmall);
  for (const char* variant : {"advanced", "basic_low"}) {
    const std::string flags = std::string("--config ") + small + " --variant " + variant;
    const Outcome text = run(flags + " emit-model");
    const Outcome chain_text = run(flags + " emit-model --explicit");
    ASSERT_EQ(text.code, 0);
    ASSERT_EQ(chain_text.code, 0);
    const Dtmc rebuilt = gcl::compose_and_build(gcl::parse_model(text.out));
    EXPECT_EQ(serialize(rebuilt), chain_text.out);
    EXPECT_EQ(serialize(deserialize(chain_text.out)), chain_text.out);

    const std::string model = write("model.pm", text.out), chain = write("model.dtmc", chain_text.out);
    const Outcome direct = run(flags + " --json verify");
    EXPECT_EQ(run("--json verify --model " + model).out, direct.out);
    EXPECT_EQ(run("--json verify --dtmc " + chain).out, direct.out);
  }
  const Outcome cfg = run("--scenario 3 emit-model --resolved-config");
  ASSERT_EQ(cfg.code, 0);
  const std::string resolved = write("resolved.ini", cfg.out);
  EXPECT_EQ(run("--config " + resolved + " emit-model --resolved-config").out, cfg.out);
}
