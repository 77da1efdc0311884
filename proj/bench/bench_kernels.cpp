// Serial reference vs OpenMP variants of the batch kernels.

#include <benchmark/benchmark.h>

#include "npsl/frequency.hpp"
#include "npsl/instances.hpp"
#include "npsl/parallel.hpp"
#include "npsl/simulate.hpp"
#include "npsl/slemma.hpp"

using namespace npsl;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_frequency_response(benchmark::State& state) {
  Rng rng(1);
  const Matrix a = random_gaussian(8, 8, rng) - 5.0 * Matrix::Identity(8, 8);
  const Matrix b = random_gaussian(8, 1, rng);
  const Matrix c = random_gaussian(1, 8, rng);
  const Vector grid = frequency_grid(20000);
  for (auto _ : state) benchmark::DoNotOptimize(frequency_response_real(a, b, c, grid, mode(state)));
  state.SetItemsProcessed(state.iterations() * grid.size());
}

void BM_integrate_batch(benchmark::State& state) {
  Rng rng(2);
  const LureSystem sys = random_scalar_lure(4, rng);
  std::vector<SimRun> runs;
  for (int k = 0; k < 32; ++k)
    runs.push_back({{Nonlinearity::saturation(1.0, sys.kappa(0))}, random_gaussian(4, 1, rng)});
  for (auto _ : state) benchmark::DoNotOptimize(integrate_batch(sys, runs, 2.0, 1e-3, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(runs.size()));
}

void BM_family_batch(benchmark::State& state) {
  std::vector<FormFamily> families;
  for (int k = 0; k < 32; ++k) {
    Rng rng(100 + static_cast<std::uint64_t>(k));
    families.push_back(random_family(k % 2 ? 1.0 : 2.0, 4, 2, rng));
  }
  std::vector<double> gaps(families.size());
  for (auto _ : state) {
    for_each_index(families.size(), mode(state), [&](std::size_t i) {
      gaps[i] = solve_dual(families[i]).beta - primal_oracle(families[i]).alpha_lower;
    });
    benchmark::DoNotOptimize(gaps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(families.size()));
}

}  // namespace

BENCHMARK(BM_frequency_response)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_integrate_batch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_family_batch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
