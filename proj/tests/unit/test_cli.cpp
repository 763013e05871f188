#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "nscost/conic_json.hpp"
#include "nscost/programs.hpp"

namespace nscost::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nscost");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("nscost_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(CliTest, CostSummaryLine) {
  const auto r = invoke({"cost", "--family", "depolarizing", "--d", "2", "--p", "0.15", "--eps", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("tr_v=3.550000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m_star=2 "), std::string::npos);
  EXPECT_NE(r.out.find("cost_bits=1.000000"), std::string::npos);
  EXPECT_NE(r.out.find("delta=0.086090"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST_F(CliTest, CostPptCode) {
  const auto r = invoke({"cost", "--family", "depolarizing", "--p", "0.15", "--eps", "0.05", "--code", "ns_ppt"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("cost_bits=1.000000"), std::string::npos);
  EXPECT_EQ(invoke({"cost", "--code", "ea"}).code, kExitUsage);
}

TEST_F(CliTest, DiamondIdentical) {
  const auto r = invoke({"diamond", "--a", "identity", "--b", "identity", "--d", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "distance=0.000000\n");
  const auto dep = invoke({"diamond", "--a", "identity", "--b", "depolarizing", "--b-p", "0.3", "--d", "2"});
  EXPECT_EQ(dep.out, "distance=0.225000\n");
}

TEST_F(CliTest, OtherSubcommands) {
  EXPECT_NE(invoke({"zero-error", "--family", "dephasing", "--p", "0.5"}).out.find("tr_v=2.000000"), std::string::npos);
  EXPECT_NE(invoke({"maxinfo", "--family", "identity"}).out.find("i_max=2.000000 robustness=3.000000"),
            std::string::npos);
  EXPECT_NE(invoke({"classical-lp", "--matrix", "0.8,0.2;0.2,0.8"}).out.find("tr_v=1.600000"), std::string::npos);
  EXPECT_NE(invoke({"verify", "--family", "amplitude_damping", "--r", "0.5"}).out.find("outcome=optimal_confirmed"),
            std::string::npos);
}

TEST_F(CliTest, Figure3Csv) {
  const fs::path out = dir_ / "fig3.csv";
  const auto r = invoke({"--out", out.string(), "figure3", "--d", "2", "--grid", "11"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = read_csv(out);
  ASSERT_EQ(rows.size(), 1u + 44u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "param", "cost_bits"}));
  bool saw_kink = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "dephasing" && std::stod(rows[i][1]) == 0.5) {
      EXPECT_NEAR(std::stod(rows[i][2]), 0.5, 1e-6);
      saw_kink = true;
    }
  }
  EXPECT_TRUE(saw_kink);
}

TEST_F(CliTest, Figure2CsvProperties) {
  const fs::path out = dir_ / "fig2.csv";
  const auto r = invoke({"--out", out.string(), "figure2", "--p", "0.15", "--n-max", "12"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = read_csv(out);
  ASSERT_EQ(rows.size(), 1u + 36u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "eps", "cost_total_bits", "cost_per_use", "unceiled_per_use",
                                               "qe_asymptote"}));
  const std::string qe = rows[1][5];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][5], qe);
    const double per_use = std::stod(rows[i][3]), unceiled = std::stod(rows[i][4]);
    EXPECT_GE(per_use, unceiled);
    EXPECT_GE(unceiled, std::stod(qe) - 1e-6);
    if (rows[i][0] == "1") {
      const double eps = std::stod(rows[i][1]);
      EXPECT_NEAR(unceiled, one_shot_cost_ns(depolarizing(2, 0.15), eps).half_log_trv, 1e-6);
    }
  }
}

TEST_F(CliTest, Figure2IsByteIdenticalAcrossRunsAndJobCounts) {
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(invoke({"--out", a.string(), "figure2", "--n-max", "20"}).code, kExitOk);
  ASSERT_EQ(invoke({"--jobs", "3", "--out", b.string(), "figure2", "--n-max", "20"}).code, kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  ASSERT_EQ(invoke({"--out", b.string(), "figure2", "--n-max", "20"}).code, kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"classical-lp", "--matrix", "0.8,x;0.2,0.8"}).code, kExitUsage);
  EXPECT_EQ(invoke({"classical-lp", "--matrix", "0.8,0.3;0.2,0.8"}).code, kExitUsage);
  EXPECT_EQ(invoke({"cost", "--family", "teleport"}).code, kExitUsage);
  EXPECT_EQ(invoke({"cost", "--eps", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"depol-scan", "--n-min", "5", "--n-max", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"figure2", "--p", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, UnwritableOutputLeavesNoFile) {
  const fs::path out = dir_ / "missing" / "fig2.csv";
  EXPECT_EQ(invoke({"--out", out.string(), "figure2", "--n-max", "3"}).code, kExitUsage);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, SolverFailureExitCode) {
  const auto r = invoke({"--max-iter", "1", "cost", "--p", "0.2"});
  EXPECT_EQ(r.code, kExitSolver);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ToleranceOverridesAreHonored) {
  for (const std::string sub : {"cost", "zero-error", "maxinfo", "diamond", "figure3", "figure2", "depol-scan"}) {
    std::vector<std::string> args{"--max-iter", "1", sub};
    if (sub == "figure2" || sub == "depol-scan") args.insert(args.end(), {"--n-max", "3", "--eps", "0.05"});
    if (sub == "diamond") args.insert(args.end(), {"--b", "depolarizing", "--b-p", "0.3"});
    if (sub == "figure3") args.insert(args.end(), {"--grid", "3"});
    EXPECT_EQ(invoke(args).code, kExitSolver) << sub;
  }
  EXPECT_EQ(invoke({"--max-iter", "1", "classical-lp", "--matrix", "0.8,0.2;0.2,0.8", "--eps", "0.1"}).code,
            kExitSolver);
  EXPECT_EQ(invoke({"--gap-tol", "-1", "cost"}).code, kExitUsage);
  const auto loose = invoke({"--gap-tol", "1e-3", "--feas-tol", "1e-3", "cost", "--p", "0.15"});
  EXPECT_EQ(loose.code, kExitOk);
}

TEST_F(CliTest, DumpProblemWritesLoadableJson) {
  const fs::path dump = dir_ / "problem.json";
  ASSERT_EQ(invoke({"--dump-problem", dump.string(), "cost", "--p", "0.15", "--eps", "0.05"}).code, kExitOk);
  const auto p = conic::read_json(dump);
  EXPECT_FALSE(p.constraints.empty());
  const auto sol = conic::solve(p);
  EXPECT_EQ(sol.status, conic::Status::optimal);
  EXPECT_NEAR(sol.primal_value, one_shot_cost_ns(depolarizing(2, 0.15), 0.05).tr_v_opt, 1e-6);
  const fs::path many = dir_ / "scan.json";
  ASSERT_EQ(invoke({"--dump-problem", many.string(), "depol-scan", "--n-max", "3", "--eps", "0.05"}).code, kExitOk);
  EXPECT_TRUE(fs::exists(many));
  EXPECT_TRUE(fs::exists(many.string() + ".1"));
  EXPECT_TRUE(fs::exists(many.string() + ".2"));
}

TEST_F(CliTest, ChoiFileInput) {
  const fs::path nested = dir_ / "id.json", flat = dir_ / "flat.json";
  {
    std::ofstream f(nested);
    f << R"({"dim_in": 2, "dim_out": 2,
             "re": [[1,0,0,1],[0,0,0,0],[0,0,0,0],[1,0,0,1]],
             "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})";
  }
  {
    std::ofstream f(flat);
    f << R"({"dim_in": 2, "dim_out": 2, "re": [1,0,0,1, 0,0,0,0, 0,0,0,0, 1,0,0,1]})";
  }
  for (const auto& path : {nested, flat}) {
    const auto r = invoke({"cost", "--choi", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("tr_v=4.000000 m_star=2 cost_bits=1.000000"), std::string::npos) << r.out;
  }
  EXPECT_EQ(invoke({"diamond", "--a-choi", nested.string(), "--b", "identity"}).out, "distance=0.000000\n");
  {
    std::ofstream f(dir_ / "bad.json");
    f << R"({"dim_in": 2, "dim_out": 2, "re": [1,0,0]})";
  }
  EXPECT_EQ(invoke({"cost", "--choi", (dir_ / "bad.json").string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"cost", "--choi", (dir_ / "absent.json").string()}).code, kExitUsage);
}

TEST_F(CliTest, JobsFromEnvironment) {
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(invoke({"--out", a.string(), "figure3", "--grid", "5"}).code, kExitOk);
  ::setenv("NSCOST_JOBS", "4", 1);
  ASSERT_EQ(invoke({"--out", b.string(), "figure3", "--grid", "5"}).code, kExitOk);
  ::unsetenv("NSCOST_JOBS");
  EXPECT_EQ(slurp(a), slurp(b));
}

}  // namespace
}  // namespace nscost::cli
