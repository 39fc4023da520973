// Microbenchmarks for the loss and metric kernels. The OVO/OVR pair shows how
// the per-sub-AUC overhead scales with the class count at fixed N.

#include <benchmark/benchmark.h>

#include <random>

#include "mcauc/losses.hpp"
#include "mcauc/metrics.hpp"

namespace {

struct Instance {
  mcauc::Matrix scores;
  mcauc::LabelVector labels;
};

Instance make_instance(std::size_t n, std::size_t c) {
  std::mt19937_64 rng(n * 31 + c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance inst;
  inst.scores = mcauc::Matrix(n, c);
  for (double& v : inst.scores.data()) v = unit(rng);
  inst.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) inst.labels[r] = static_cast<int>(r % c);
  return inst;
}

void BM_BinaryAucExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = make_instance(2 * n, 2);
  mcauc::BinaryScoreSets sets;
  for (std::size_t r = 0; r < inst.labels.size(); ++r)
    (inst.labels[r] == 0 ? sets.pos : sets.neg).push_back(inst.scores(r, 0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcauc::binary_auc(sets));
  }
}

void BM_AaucOvoLoss(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto inst = make_instance(128, c);
  const mcauc::SigmoidSlope slope{10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcauc::aauc_ovo_loss(inst.scores, inst.labels, slope).value);
  }
}

void BM_AaucOvrLoss(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto inst = make_instance(128, c);
  const mcauc::SigmoidSlope slope{10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcauc::aauc_ovr_loss(inst.scores, inst.labels, slope).value);
  }
}

void BM_SoftmaxCeLoss(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto inst = make_instance(128, c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcauc::softmax_ce_loss(inst.scores, inst.labels).value);
  }
}

void BM_AucOvoExact(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto inst = make_instance(128, c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcauc::auc_ovo(inst.scores, inst.labels));
  }
}

}  // namespace

BENCHMARK(BM_BinaryAucExact)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_AaucOvoLoss)->RangeMultiplier(2)->Range(2, 64);
BENCHMARK(BM_AaucOvrLoss)->RangeMultiplier(2)->Range(2, 64);
BENCHMARK(BM_SoftmaxCeLoss)->RangeMultiplier(2)->Range(2, 64);
BENCHMARK(BM_AucOvoExact)->RangeMultiplier(2)->Range(2, 64);

BENCHMARK_MAIN();
