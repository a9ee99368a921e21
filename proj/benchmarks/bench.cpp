#include <benchmark/benchmark.h>

#include <random>

#include "lawprice/capital.hpp"
#include "lawprice/functionals.hpp"
#include "lawprice/orlicz.hpp"
#include "lawprice/quantile.hpp"

using namespace lawprice;

namespace {

Payoff draw(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_payoff(AtomSpace(n), rng, dist::Normal{0.0, 1.0});
}

void BM_HlProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Payoff x = draw(n, 1);
  const Payoff y = draw(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(hl_product(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HlProduct)->RangeMultiplier(4)->Range(16, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_Choquet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Payoff x = draw(n, 3);
  const auto g = Distortion::power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(choquet_eval(g, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Choquet)->RangeMultiplier(4)->Range(16, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_RiskMeasure(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Market cash({Payoff::constant(AtomSpace(n), 1.0)}, {1.0});
  const auto a = acceptance::expected_shortfall(0.5);
  const Payoff x = draw(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(risk_measure(a, cash, x).value);
}
BENCHMARK(BM_RiskMeasure)->Arg(8)->Arg(64)->Arg(512);

void BM_Luxemburg(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Payoff x = draw(n, 5);
  const auto phi = young::power(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg(phi, x));
}
BENCHMARK(BM_Luxemburg)->Arg(8)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
