// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>
#include <vector>

#include "beam/config.hpp"
#include "beam/kernels.hpp"
#include "beam/random.hpp"

namespace {

using namespace beam;

Eigen::MatrixXd Cloud(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd p(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return p;
}

std::vector<kernels::EnsembleMember> Ensemble(int size, int modes) {
  const NamedInstance inst = LookupInstance("wk-cubic");
  auto basis = std::make_shared<const SpectralBasis>(std::numbers::pi, modes);
  ModalVector h = ModalVector::Zero(modes);
  h[0] = 1.0;
  const ModelConfig cfg(basis,
                        ConstitutiveFunctions::Polynomial(
                            "wk-cubic", inst.coefficients, inst.constants),
                        0.5, 1.0, 1.0, h);
  std::vector<kernels::EnsembleMember> members;
  for (int i = 0; i < size; ++i) {
    const State z0 = RandomState(cfg, 1 + i, 2.0);
    members.push_back({cfg, z0, {2.0, AutoTimeStep(cfg, z0), 10, Scheme::kRk4}});
  }
  return members;
}

void BM_HausdorffSerial(benchmark::State& state) {
  const Eigen::MatrixXd a = Cloud(state.range(0), 64, 1);
  const Eigen::MatrixXd b = Cloud(state.range(0), 64, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::HausdorffSemidistanceSerial(a, b));
  }
}

void BM_HausdorffParallel(benchmark::State& state) {
  const Eigen::MatrixXd a = Cloud(state.range(0), 64, 1);
  const Eigen::MatrixXd b = Cloud(state.range(0), 64, 2);
  state.counters["threads"] = kernels::WorkerCount();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::HausdorffSemidistanceParallel(a, b));
  }
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto members = Ensemble(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::RunEnsembleSerial(members));
  }
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto members = Ensemble(static_cast<int>(state.range(0)), 32);
  state.counters["threads"] = kernels::WorkerCount();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::RunEnsembleParallel(members));
  }
}

BENCHMARK(BM_HausdorffSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HausdorffParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
