#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code{-1};
  std::string out;
};

CliRun Pec(const std::string& args) {
  const std::string cmd = std::string(PEC_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pec_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(Pec("emit-quadtank --out-dir " + dir_.string()).code, 0);
    model_ = (dir_ / "quadtank.json").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string model_;
};

TEST_F(CliTest, MissingModelFile) {
  const CliRun r = Pec("residual-set --model " + dir_.string() + "/absent.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("absent.json"), std::string::npos) << r.out;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Pec("").code, 2);
  EXPECT_EQ(Pec("no-such-command").code, 2);
  EXPECT_EQ(Pec("residual-set --bogus").code, 2);
  EXPECT_EQ(Pec("error-set --model " + model_ + " --scenario 9").code, 2);
}

TEST_F(CliTest, SinglePointResidualSetIsDeterministic) {
  const std::string args = "residual-set --model " + model_ +
                           " --alpha-grid 0.5 --alpha-r-grid 0.5 --out-dir " +
                           dir_.string();
  const CliRun a = Pec(args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_NE(a.out.find("-log det(Pi)"), std::string::npos);
  const std::string first = Slurp(dir_ / "residual_set.json");
  ASSERT_EQ(Pec(args).code, 0);
  EXPECT_EQ(Slurp(dir_ / "residual_set.json"), first);
}

TEST_F(CliTest, SimulationCsvIsByteIdentical) {
  const std::string d = dir_.string();
  ASSERT_EQ(Pec("residual-set --model " + model_ +
                " --alpha-grid 1,2 --alpha-r-grid 0.5 --out-dir " + d)
                .code,
            0);
  const std::string args = "simulate --model " + model_ + " --residual " + d +
                           "/residual_set.json --horizon 30 --attack-start 10"
                           " --seed 4 --out-dir " + d;
  const CliRun a = Pec(args + " --out a.csv");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_NE(a.out.find("alarms = 0"), std::string::npos) << a.out;
  ASSERT_EQ(Pec(args + " --out b.csv").code, 0);
  EXPECT_EQ(Slurp(dir_ / "a.csv"), Slurp(dir_ / "b.csv"));
  const CliRun loud = Pec(args + " --amplitude 100 --unguarded --out c.csv");
  ASSERT_EQ(loud.code, 0);
  EXPECT_EQ(loud.out.find("alarms = 0"), std::string::npos) << loud.out;
}

TEST_F(CliTest, OutDirFromEnvironment) {
  const fs::path env_dir = dir_ / "env";
  const std::string cmd = "PEC_OUT_DIR=" + env_dir.string() + " " +
                          std::string(PEC_CLI_PATH) + " emit-quadtank";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(env_dir / "quadtank.json"));
}

}  // namespace
