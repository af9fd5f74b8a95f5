#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctr/commands.hpp"

namespace ctr {
namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ctr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CTR_SOURCE_DIR) + "/data/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ctr_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Cli, Demo) {
  const auto r = cli({"demo"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("improvement 25%"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SolveDemo) {
  const auto r = cli({"solve", "--graph", "demo", "--regime", "stackelberg", "--h", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value 0.8000000"), std::string::npos) << r.out;
}

TEST(Cli, SolveJsonRecord) {
  const auto path = scratch("solve.json");
  const auto r = cli({"solve", "--config", data("demo_run.json"), "--no-timing", "--out",
                      path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["regime"], "dirichlet");
  EXPECT_EQ(j["value"], 0.0);
  EXPECT_EQ(j["config"]["K"], 500);
  EXPECT_EQ(j["diagnostics"]["wall_ms"], 0.0);
}

TEST(Cli, SampleSize) {
  EXPECT_EQ(cli({"sample-size", "--eps", "0.05", "--delta", "0.05"}).out, "738\n");
  EXPECT_EQ(cli({"sample-size", "--eps", "0.1", "--delta", "0.1"}).out, "150\n");
  EXPECT_EQ(cli({"sample-size", "--eps", "0", "--delta", "0.1"}).code, 1);
}

TEST(Cli, Validate) {
  const auto r = cli({"validate", data("demo_graph.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("6 nodes, 7 edges, c_max=3, 3 entry→target paths"), std::string::npos);
  const auto bad = scratch("cyclic.json");
  std::ofstream(bad) << R"({"nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
    "edges": [[0, 1], [1, 0], [1, 2]], "targets": [2], "spot": [0]})";
  const auto e = cli({"validate", bad.string()});
  EXPECT_EQ(e.code, 1);
  EXPECT_NE(e.err.find("error: CycleDetected"), std::string::npos) << e.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"solve", "--bogus"}).code, 2);
  EXPECT_EQ(cli({"solve", "--graph", "demo", "--h", "0"}).code, 2);
  EXPECT_EQ(cli({"solve", "--graph", "demo", "--regime", "dirichlet", "--K", "5", "--eps", "0.1",
                 "--delta", "0.1"})
                .code,
            2);
  const auto cfg = scratch("unknown.json");
  std::ofstream(cfg) << R"({"graph": "demo", "colour": 3})";
  EXPECT_EQ(cli({"solve", "--config", cfg.string()}).code, 2);
}

TEST(Cli, SweepIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--graph", "demo", "--no-timing",
                                      "--heuristic-trials", "10"};
  const auto a = cli(args), b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("h,strategy,deployment,analytic_value", 0), 0u);
  EXPECT_NE(a.out.find("1,stackelberg,{B},0.8,"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("\r\n"), std::string::npos);
}

TEST(Cli, Simulate) {
  const auto path = scratch("sim.json");
  const auto r = cli({"simulate", "--graph", "demo", "--dist", "geometric:2:1", "--deployment",
                      "C", "--trials", "20000", "--mode", "both", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_NEAR(j["analytic_value"].get<double>(), 4.0 / 9.0, 1e-12);
  EXPECT_TRUE(j.contains("two_proportion_z"));
  EXPECT_EQ(j["estimates"]["step-count"]["trials"], 20000);
  EXPECT_EQ(cli({"simulate", "--graph", "demo", "--mode", "continuous"}).code, 2);
}

TEST(Cli, ExportMilp) {
  const auto stem = scratch("demo").string();
  const auto r = cli({"export-milp", "--graph", "demo", "--h", "1", "--K", "5", "--stem", stem});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* ext : {".attacker.lp", ".stackelberg.lp", ".dirichlet.lp", ".meta.json"})
    EXPECT_TRUE(std::filesystem::exists(stem + ext)) << ext;
  const auto meta = nlohmann::json::parse(slurp(stem + ".meta.json"));
  EXPECT_EQ(meta["schema"], 1);
  EXPECT_EQ(meta["models"]["stackelberg"]["census"]["binaries"], 4);
  EXPECT_EQ(cli({"export-milp", "--graph", "demo"}).code, 2);
}

TEST(Cli, Binary) {
  const std::string cmd = std::string(CTR_CLI_PATH) + " sample-size --eps 0.05 --delta 0.05";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  char buf[64] = {};
  ASSERT_NE(fgets(buf, sizeof buf, p), nullptr);
  EXPECT_EQ(pclose(p), 0);
  EXPECT_STREQ(buf, "738\n");
}

}  // namespace
}  // namespace ctr
