#include <benchmark/benchmark.h>

#include <random>

#include "crossk/ktheory.hpp"
#include "crossk/shiftspec.hpp"
#include "crossk/zlattice.hpp"

using namespace crossk;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

zlattice::IntMatrix sparse_matrix(std::size_t rows, std::size_t cols) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-5, 5);
  zlattice::IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng() % 4 == 0) m(i, j) = d(rng);
  return m;
}

void BM_SmithNormalForm(benchmark::State& state) {
  const auto m = sparse_matrix(120, 100);
  for (auto _ : state) benchmark::DoNotOptimize(zlattice::invariant_factors(m, mode(state)));
}
BENCHMARK(BM_SmithNormalForm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DirectK0(benchmark::State& state) {
  const auto model = ktheory::DiagonalActionModel::denjoy_both(4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ktheory::pv_k0_direct(model, mode(state)));
}
BENCHMARK(BM_DirectK0)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_JointGrid(benchmark::State& state) {
  const auto x = shiftspec::WeightSequence::from_symbols(symdyn::two_sided_fibonacci(5));
  for (auto _ : state) benchmark::DoNotOptimize(shiftspec::joint_grid(x, {0, 1}, 0.5, 2.5, 81, mode(state)));
}
BENCHMARK(BM_JointGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WitnessSweep(benchmark::State& state) {
  std::vector<shiftspec::WeightSequence> ws;
  for (std::uint64_t s = 0; s < 20; ++s) ws.push_back(shiftspec::random_unimodular(4001, s));
  std::vector<shiftspec::WitnessCase> cases;
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (int k = 0; k < 16; ++k) cases.push_back({i, std::polar(1.0, 0.39 * k), 4000});
  for (auto _ : state) benchmark::DoNotOptimize(shiftspec::witness_sweep(ws, cases, mode(state)));
}
BENCHMARK(BM_WitnessSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
