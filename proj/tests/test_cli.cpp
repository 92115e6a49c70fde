#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using std::string;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  string out;
};

CliRun cli(const string& args) {
  const string cmd = string(GRADEDROUTE_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const string& name) {
  const fs::path p = fs::temp_directory_path() / ("gradedroute_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

void write(const fs::path& p, const string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

// 0 - 1 - 2 in the first quadrant of node 0, plus 3 isolated below-left.
const char* kToy = R"({"seed": 1,
  "nodes": [
    {"id": 0, "x": 0.1, "y": 0.5, "lifetime": 80, "density": 1, "resource": true},
    {"id": 1, "x": 0.4, "y": 0.6, "lifetime": 80, "density": 1, "resource": true},
    {"id": 2, "x": 0.8, "y": 0.9, "lifetime": 80, "density": 1, "resource": true},
    {"id": 3, "x": 0.05, "y": 0.1, "lifetime": 80, "density": 1, "resource": true},
    {"id": 4, "x": 0.3, "y": 0.2, "lifetime": 80, "density": 1, "resource": true}],
  "links": [{"a": 0, "b": 1, "capacity_mbps": 30}, {"a": 1, "b": 2, "capacity_mbps": 30},
            {"a": 3, "b": 4, "capacity_mbps": 30}]})";

}  // namespace

TEST(Cli, GenerateWritesTopologyAndConfig) {
  const fs::path dir = scratch("gen");
  const CliRun r = cli("generate --n 15 --seed 42 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("nodes: 15"), string::npos);
  EXPECT_TRUE(fs::exists(dir / "topology.json"));
  EXPECT_TRUE(fs::exists(dir / "run_config.json"));
  const string first = slurp(dir / "topology.json");
  ASSERT_EQ(cli("generate --n 15 --seed 42 --out " + dir.string()).code, 0);
  EXPECT_EQ(slurp(dir / "topology.json"), first);
  fs::remove_all(dir);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("generate --n 1 --out " + scratch("bad").string()).code, 1);
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("route --topology x.json").code, 1);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, IoErrorsExitTwo) {
  EXPECT_EQ(cli("grade --topology /nonexistent/t.json --out " + scratch("io").string()).code, 2);
  EXPECT_EQ(cli("generate --n 5 --config /nonexistent/c.json").code, 2);
  const fs::path dir = scratch("io2");
  write(dir / "blocker", "x");
  EXPECT_EQ(cli("generate --n 5 --out " + (dir / "blocker" / "sub").string()).code, 2);
  fs::remove_all(dir);
}

TEST(Cli, RouteUniquePath) {
  const fs::path dir = scratch("route");
  write(dir / "toy.json", kToy);
  const CliRun r = cli("route --topology " + (dir / "toy.json").string() +
                    " --source 0 --destination 2 --algo both --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[abc]\n  path: 0 1 2"), string::npos) << r.out;
  EXPECT_NE(r.out.find("[ga]\n  path: 0 1 2"), string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "grades.json"));
  const string route = slurp(dir / "route.json");
  EXPECT_NE(route.find("\"abc\""), string::npos);
  EXPECT_NE(route.find("\"ga\""), string::npos);
  fs::remove_all(dir);
}

TEST(Cli, RouteNoPathIsSuccess) {
  const fs::path dir = scratch("nopath");
  write(dir / "toy.json", kToy);
  const CliRun r = cli("route --topology " + (dir / "toy.json").string() +
                    " --source 0 --destination 4 --algo abc --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("path not available"), string::npos);
  EXPECT_EQ(r.out.find("[ga]"), string::npos);
  fs::remove_all(dir);
}

TEST(Cli, RouteBadIds) {
  const fs::path dir = scratch("badid");
  write(dir / "toy.json", kToy);
  const string topo = (dir / "toy.json").string();
  EXPECT_EQ(cli("route --topology " + topo + " --source 0 --destination 9 --out " + dir.string()).code, 1);
  EXPECT_EQ(cli("route --topology " + topo + " --source 2 --destination 2 --out " + dir.string()).code, 1);
  EXPECT_EQ(cli("route --topology " + topo + " --source 0 --destination 2 --algo pso").code, 1);
  fs::remove_all(dir);
}

TEST(Cli, BenchArtifacts) {
  const fs::path dir = scratch("bench");
  const CliRun r = cli("bench --n 64 --seeds 30 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const string csv = slurp(dir / "results.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 31);
  for (const char* f : {"summary.json", "plot_traffic_intensity.csv", "plot_throughput.csv",
                        "run_config.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_NE(r.out.find("quality over"), string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const fs::path dir = scratch("cfg");
  write(dir / "cfg.json", R"({"seed": 5, "link_density": 0.5})");
  ASSERT_EQ(cli("generate --n 10 --config " + (dir / "cfg.json").string() + " --seed 6 --out " +
                dir.string()).code, 0);
  const string cfg = slurp(dir / "run_config.json");
  EXPECT_NE(cfg.find("\"seed\": 6"), string::npos);
  EXPECT_NE(cfg.find("\"link_density\": 0.5"), string::npos);
  fs::remove_all(dir);
}
