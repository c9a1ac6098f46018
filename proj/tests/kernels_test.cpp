#include "beam/kernels.hpp"

#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "beam/config.hpp"
#include "beam/random.hpp"
#include "support.hpp"

namespace beam::kernels {
namespace {

using beam::testing::MakeNamed;
using beam::testing::Unit;

Eigen::MatrixXd Cloud(int n, int d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd p(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) p(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return p;
}

TEST(HausdorffKernelTest, SerialAndParallelAgreeExactly) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::MatrixXd a = Cloud(300, 6, seed), b = Cloud(257, 6, seed + 99);
    EXPECT_EQ(HausdorffSemidistanceSerial(a, b),
              HausdorffSemidistanceParallel(a, b));
  }
}

TEST(HausdorffKernelTest, RejectsBadShapes) {
  EXPECT_THROW(HausdorffSemidistanceSerial(Cloud(0, 2, 1), Cloud(3, 2, 1)),
               std::invalid_argument);
  EXPECT_THROW(HausdorffSemidistanceParallel(Cloud(3, 2, 1), Cloud(3, 3, 1)),
               std::invalid_argument);
}

TEST(EnsembleKernelTest, SerialAndParallelAgreeExactly) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 12, 0.3, Unit(12, 1));
  std::vector<EnsembleMember> members;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Scheme scheme = seed % 2 ? Scheme::kRk4 : Scheme::kImex;
    members.push_back({cfg.WithAlpha(0.1 * seed), RandomState(cfg, seed, 1.5),
                       {2.0, 0.01, 10, scheme}});
  }
  const auto serial = RunEnsembleSerial(members);
  const auto parallel = RunEnsembleParallel(members);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    ASSERT_EQ(serial[i].size(), parallel[i].size());
    for (std::size_t k = 0; k < serial[i].size(); ++k) {
      EXPECT_EQ(serial[i].states[k].y, parallel[i].states[k].y);
      EXPECT_EQ(serial[i].states[k].v, parallel[i].states[k].v);
      EXPECT_EQ(serial[i].energy[k], parallel[i].energy[k]);
    }
  }
}

TEST(EnsembleKernelTest, FailureOfLowestMemberIsRethrown) {
  const ModelConfig cfg = MakeNamed("wk-cubic", 8);
  std::vector<EnsembleMember> members;
  members.push_back({cfg, ZeroState(cfg), {1.0, 0.01, 1, Scheme::kRk4}});
  State wild{100.0 * Unit(8, 8), ModalVector::Zero(8), 0.0};
  members.push_back({cfg, wild, {10.0, 1.0, 1, Scheme::kRk4}});
  members.push_back({cfg, wild, {10.0, 0.5, 1, Scheme::kRk4}});
  EXPECT_THROW(RunEnsembleSerial(members), TrajectoryDiverged);
  EXPECT_THROW(RunEnsembleParallel(members), TrajectoryDiverged);
}

TEST(WorkerCountTest, EnvironmentCapsPool) {
  const char* old = std::getenv("BEAM_ATTRACTOR_THREADS");
  const std::string saved = old ? old : "";
  setenv("BEAM_ATTRACTOR_THREADS", "1", 1);
  EXPECT_EQ(WorkerCount(), 1);
  setenv("BEAM_ATTRACTOR_THREADS", "junk", 1);
  EXPECT_GE(WorkerCount(), 1);
  if (old) {
    setenv("BEAM_ATTRACTOR_THREADS", saved.c_str(), 1);
  } else {
    unsetenv("BEAM_ATTRACTOR_THREADS");
  }
}

}  // namespace
}  // namespace beam::kernels
