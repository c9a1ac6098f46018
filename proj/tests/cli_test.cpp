#include "beam/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "beam/csv.hpp"

namespace beam {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status;
  std::string log;
  std::string err;
  fs::path dir;
};

CliRun Invoke(const std::string& sub, const std::string& text,
              const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("beam_cli_" + tag);
  fs::remove_all(dir);
  std::ostringstream log, err;
  const int status =
      RunSubcommand(sub, ParseConfig(text), "inline.cfg", dir, log, err);
  return {status, log.str(), err.str(), dir};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(CliTest, SimulateEquilibrium) {
  const CliRun r = Invoke("simulate",
                          "instance = wk-cubic\nalpha = 0.5\nm = 8\nL = pi\n"
                          "T = 2\ninitial = zero\n",
                          "simulate");
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.err.empty());
  const CsvData traj = ReadCsv(r.dir / "trajectory.csv");
  ASSERT_GT(traj.rows.size(), 2u);
  for (const auto& row : traj.rows) {
    for (std::size_t c = 1; c < row.size(); ++c) EXPECT_EQ(row[c], "0");
  }
  int metadata = 0;
  for (const auto& entry : fs::directory_iterator(r.dir)) {
    if (entry.path().filename().string().find("metadata") == 0) ++metadata;
  }
  EXPECT_EQ(metadata, 1);
  const std::string meta = Slurp(r.dir / "metadata.txt");
  EXPECT_NE(meta.find("exit_status = 0"), std::string::npos);
  EXPECT_NE(meta.find("[config]"), std::string::npos);
}

TEST(CliTest, OutputsAreDeterministic) {
  const std::string cfg =
      "instance = wk-cubic\nalpha = 0.3\nm = 8\nL = pi\nT = 2\n"
      "initial = random:3:1\nforcing = mode:1:1\n";
  const CliRun a = Invoke("simulate", cfg, "det_a");
  const CliRun b = Invoke("simulate", cfg, "det_b");
  ASSERT_EQ(a.status, kExitOk);
  EXPECT_EQ(Slurp(a.dir / "trajectory.csv"), Slurp(b.dir / "trajectory.csv"));
  EXPECT_EQ(Slurp(a.dir / "summary.csv"), Slurp(b.dir / "summary.csv"));
}

TEST(CliTest, HypothesisFailureIsClaimFailure) {
  const CliRun r = Invoke("hypotheses",
                          "instance = negative-m\nalpha = 0\nm = 8\nL = pi\nT = 1\n",
                          "neg");
  EXPECT_EQ(r.status, kExitClaimFailed);
  EXPECT_EQ(r.err.rfind("error code=2 kind=", 0), 0u) << r.err;
  EXPECT_TRUE(fs::exists(r.dir / "hypotheses.csv"));
  EXPECT_NE(Slurp(r.dir / "metadata.txt").find("exit_status = 2"),
            std::string::npos);
}

TEST(CliTest, AlphaScanLinear) {
  const CliRun r = Invoke("alpha-scan",
                          "instance = linear\nalpha = 0\nm = 16\nL = pi\nT = 5\n",
                          "ascan");
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const CsvData d = ReadCsv(r.dir / "alpha_scan.csv");
  EXPECT_EQ(d.rows.size(), 4u);
}

TEST(CliTest, UnknownSubcommand) {
  const CliRun r = Invoke("frobnicate",
                          "instance = linear\nalpha = 0\nm = 4\nL = pi\nT = 1\n",
                          "unknown");
  EXPECT_EQ(r.status, kExitRuntimeError);
  EXPECT_EQ(r.err.rfind("error code=1 kind=", 0), 0u);
}

TEST(CliTest, RuntimeErrorsAreReported) {
  const CliRun r = Invoke("simulate",
                          "instance = linear\nalpha = 0\nm = 4\nL = pi\nT = 1\n"
                          "initial = mode:9:1\n",
                          "badstate");
  EXPECT_EQ(r.status, kExitRuntimeError);
  EXPECT_NE(r.err.find("kind=config"), std::string::npos);
  EXPECT_TRUE(fs::exists(r.dir / "metadata.txt"));
}

TEST(CliTest, SubcommandList) {
  EXPECT_EQ(SubcommandNames().size(), 9u);
  EXPECT_FALSE(VersionString().empty());
}

}  // namespace
}  // namespace beam
