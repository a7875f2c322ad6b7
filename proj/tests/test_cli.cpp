#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TOSSCATCH_CLI + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string header_value(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  const std::string prefix = "# " + key + "=";
  for (std::string line; std::getline(is, line);) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tosscatch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateTwoPointStructureAndReplay) {
  const auto out = path("traj.csv");
  const auto r = run("simulate --g logistic:1.5 --h logistic:3.0 --p 0.5 --x0 0.25 "
                     "--transient 10000 --keep 1000 --seed 7 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(slurp(out));
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"step", "x", "choice"}));
  EXPECT_EQ(rows[1][0], "10001");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double x = std::stod(rows[k][1]);
    ASSERT_LT(std::min(std::abs(x - 1.0 / 3.0), std::abs(x - 2.0 / 3.0)), 1e-9);
  }

  const auto manifest = slurp(out + ".manifest.json");
  EXPECT_NE(manifest.find("\"subcommand\": \"simulate\""), std::string::npos);
  EXPECT_NE(manifest.find("\"seed\": \"7\""), std::string::npos);

  const auto again = path("again.csv");
  ASSERT_EQ(run("replay --manifest " + out + ".manifest.json --out " + again).code, 0);
  EXPECT_EQ(slurp(again), slurp(out));

  // A second replay to the recorded path rewrites identical bytes.
  const auto before = slurp(out);
  ASSERT_EQ(run("replay --manifest " + out + ".manifest.json").code, 0);
  EXPECT_EQ(slurp(out), before);
}

TEST_F(Cli, SimulateProbabilityOneUsesOnlyG) {
  const auto r = run("simulate --g logistic:3.3 --h tent:1.7 --p 1 --keep 50");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 51u);
  for (std::size_t k = 1; k < rows.size(); ++k) ASSERT_EQ(rows[k][2], "g");
}

TEST_F(Cli, ConditionsThreePoint) {
  const auto r = run("conditions --case l3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(header_value(r.out, "alpha")), 2.3247, 5e-5);
  EXPECT_NEAR(std::stod(header_value(r.out, "beta")), 3.0796, 5e-5);
  EXPECT_EQ(header_value(r.out, "bridging_points"), "1");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  int bridging = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) bridging += rows[k][2] == "bridging";
  EXPECT_EQ(bridging, 1);
  EXPECT_LT(std::abs(std::stod(header_value(r.out, "residual_c3a"))), 1e-10);
}

TEST_F(Cli, ConditionsTentFamilyAndErrors) {
  const auto r = run("conditions --case lt2 --mu 1.4");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(header_value(r.out, "gamma")), 1.7143, 5e-5);

  EXPECT_EQ(run("conditions --case l2 --beta 1").code, 1);
  EXPECT_EQ(run("conditions --case l2").code, 2);
  EXPECT_EQ(run("conditions --case l7").code, 2);
}

TEST_F(Cli, LyapunovValuesAndSweep) {
  auto r = run("lyapunov --case l3 --p 0.5");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "E_lambda"}));
  EXPECT_NEAR(std::stod(rows[1][1]), -0.5526743062384443, 1e-14);

  r = run("lyapunov --case l2 --beta 3 --sweep-p 0:1:101");
  ASSERT_EQ(r.code, 0);
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 102u);
  for (std::size_t k = 1; k < rows.size(); ++k) ASSERT_TRUE(std::isfinite(std::stod(rows[k][1])));

  r = run("lyapunov --case lt3 --mu 1.81 --p 0.5");
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(std::abs(std::stod(csv_rows(r.out)[1][1])), 0.02);

  r = run("lyapunov --case lt2 --mu 1.4 --mc --mc-steps 100000 --transient 1000");
  ASSERT_EQ(r.code, 0);
  rows = csv_rows(r.out);
  ASSERT_EQ(rows[0].size(), 4u);
  const double exact = std::stod(rows[1][1]), mean = std::stod(rows[1][2]),
               se = std::stod(rows[1][3]);
  EXPECT_NEAR(mean, exact, 4 * se);

  // p = 0 leaves the five-point chain with two closed classes.
  EXPECT_EQ(run("lyapunov --case l5 --sweep-p 0:1:11").code, 1);
  EXPECT_EQ(run("lyapunov --case l5 --sweep-p 0:1").code, 2);
}

TEST_F(Cli, StationaryPrintsWeights) {
  const auto r = run("stationary --case l5 --p 0.5");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const double want[] = {0.125, 0.25, 0.25, 0.125, 0.25};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(std::stod(rows[i + 1][2]), want[i], 1e-14);
}

TEST_F(Cli, BifurcationClusterAndRange) {
  const auto out = path("bif.csv");
  const auto r = run("bifurcation --family logistic-pair --delta 0.333333 --gamma 0:4:1601 "
                     "--keep 200 --out " + out);
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(slurp(out));
  int low = 0, high = 0;
  double max_gamma = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double gamma = std::stod(rows[k][0]);
    max_gamma = std::max(max_gamma, gamma);
    if (gamma != 2.25) continue;
    const double x = std::stod(rows[k][1]);
    if (std::abs(x - 1.0 / 3.0) < 1e-3) ++low;
    else if (std::abs(x - 2.0 / 3.0) < 1e-3) ++high;
    else ADD_FAILURE() << "x=" << x;
  }
  EXPECT_GT(low, 0);
  EXPECT_GT(high, 0);
  EXPECT_EQ(low + high, 200);
  EXPECT_LE(max_gamma * (1 + 0.333333), 4.0);

  EXPECT_EQ(run("bifurcation --family logistic-pair --delta 0.333333 --gamma 0:4:11 --strict")
                .code,
            1);
  EXPECT_EQ(run("bifurcation --family logistic-tent --gamma 0:4:11").code, 2);
}

TEST_F(Cli, HeatmapThreadsEnvAndReplay) {
  const std::string common = "heatmap --family logistic --res 9 --transient 500 --keep 100 ";
  const auto a = path("a.csv"), b = path("b.csv");
  ASSERT_EQ(run(common + "--threads 1 --out " + a).code, 0);
  ASSERT_EQ(run(common + "--out " + b, "TOSSCATCH_THREADS=3").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(path("a.pgm")), slurp(path("b.pgm")));
  EXPECT_NE(slurp(b + ".manifest.json").find("\"threads\": \"3\""), std::string::npos);

  const auto pgm = slurp(path("a.pgm"));
  EXPECT_EQ(pgm.rfind("P2\n", 0), 0u);

  const auto c = path("c.csv");
  ASSERT_EQ(run("replay --manifest " + a + ".manifest.json --out " + c).code, 0);
  EXPECT_EQ(slurp(c), slurp(a));
  EXPECT_EQ(slurp(path("c.pgm")), slurp(path("a.pgm")));

  const auto t = path("t.csv");
  ASSERT_EQ(run("heatmap --family logistic-tent --res 5 --transient 200 --keep 50 --threads 2 "
                "--out " + t).code,
            0);
  EXPECT_EQ(header_value(slurp(t), "family"), "logistic-tent");
  EXPECT_EQ(csv_rows(slurp(t)).size(), 5u);

  EXPECT_EQ(run(common + "--out " + path("z.csv"), "TOSSCATCH_THREADS=0").code, 2);
  EXPECT_EQ(run("heatmap --res 9").code, 2);
}

TEST_F(Cli, CoverCountsTrajectoryColumn) {
  const auto traj = path("traj.csv");
  ASSERT_EQ(run("simulate --g logistic:1.5 --h logistic:3.0 --out " + traj).code, 0);
  auto r = run("cover --input " + traj + " --eps 1e-6");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "epsilon,count\n1e-06,2\n");

  r = run("cover --input " + traj + " --column nope");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run("cover --input " + path("missing.csv")).code, 2);
}

TEST_F(Cli, EveryFileOutputReplaysByteIdentically) {
  const std::vector<std::string> commands = {
      "simulate --g tent:1.9 --h logistic:3.7 --p 0.3 --seed 11 --keep 300",
      "conditions --case l5",
      "lyapunov --case lt3 --mu 1.5 --sweep-p 0.1:0.9:9",
      "lyapunov --case l2 --beta 2.5 --mc --mc-steps 20000 --transient 100 --seed 4",
      "stationary --case lt3 --mu 1.7 --p 0.2",
      "bifurcation --family logistic-tent --mu 1.4 --gamma 1:4:31 --keep 50 --transient 500",
  };
  const auto traj = path("for_cover.csv");
  ASSERT_EQ(run("simulate --g logistic:3.9 --h logistic:3.6 --out " + traj).code, 0);
  std::vector<std::string> all = commands;
  all.push_back("cover --input " + traj + " --eps 1e-4");

  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto out = path("run" + std::to_string(k) + ".csv");
    ASSERT_EQ(run(all[k] + " --out " + out).code, 0) << all[k];
    const auto re = path("re" + std::to_string(k) + ".csv");
    ASSERT_EQ(run("replay --manifest " + out + ".manifest.json --out " + re).code, 0) << all[k];
    EXPECT_EQ(slurp(re), slurp(out)) << all[k];
    EXPECT_FALSE(slurp(out).empty());
  }
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("simulate --g bogus:1 --h logistic:3").code, 2);
  EXPECT_EQ(run("simulate --g logistic --h logistic:3").code, 2);
  EXPECT_EQ(run("simulate --g logistic:2 --h logistic:3 --p 1.5").code, 2);
  EXPECT_EQ(run("simulate --g logistic:2 --h logistic:3 --keep 0").code, 2);
  EXPECT_EQ(run("heatmap --out x.csv --eps -1").code, 2);
}

TEST_F(Cli, NumericFailuresExitOne) {
  EXPECT_EQ(run("simulate --g logistic:4.5 --h logistic:4.5 --x0 0.5").code, 1);
  EXPECT_EQ(run("lyapunov --case lt1 --mu 1").code, 1);
}

TEST_F(Cli, HelpDocumentsDefaults) {
  auto r = run("simulate --help");
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"--p", "0.5", "--transient", "10000", "--keep", "1000", "--seed", "--x0",
                        "0.3"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
  r = run("heatmap --help");
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"1e-06", "401", "501", "TOSSCATCH_THREADS", "10000", "1000"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
  for (const char* sub : {"conditions", "lyapunov", "stationary", "bifurcation", "cover",
                          "replay"}) {
    EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
  }
}
