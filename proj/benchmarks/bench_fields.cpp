#include <benchmark/benchmark.h>

#include "kirchhoff/kirchhoff_equation.hpp"
#include "kirchhoff/transforms.hpp"
#include "kirchhoff/vector_fields.hpp"

using namespace kirchhoff;

namespace {

// state.range(0) = d, state.range(1) = N
void BM_KirchhoffField(benchmark::State& state) {
  auto g = SpectralGrid::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  RealPair s{random_field(g, 1, 0.05, g->m0() + 0.5, Symmetry::hermitian),
             random_field(g, 2, 0.05, g->m0() - 0.5, Symmetry::hermitian)};
  for (auto _ : state) benchmark::DoNotOptimize(kirchhoff_field(s));
  state.counters["modes"] = static_cast<double>(g->size());
}

void BM_XPlus(benchmark::State& state) {
  auto g = SpectralGrid::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  NormalFormCoefficients nf(g);
  ConjugatePair w{random_field(g, 1, 0.1, g->m0(), Symmetry::free)};
  const auto method = state.range(2) ? XPlusMethod::direct : XPlusMethod::structured;
  for (auto _ : state) benchmark::DoNotOptimize(x_plus(nf, w, method));
  state.counters["modes"] = static_cast<double>(g->size());
}

void BM_ComposeInverse(benchmark::State& state) {
  auto g = SpectralGrid::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  NormalFormCoefficients nf(g);
  const auto uv = compose_forward(nf, ConjugatePair{random_field(g, 1, 0.03, g->m0(), Symmetry::free)});
  for (auto _ : state) benchmark::DoNotOptimize(compose_inverse(nf, uv));
}

}  // namespace

BENCHMARK(BM_KirchhoffField)->Args({1, 8})->Args({1, 32})->Args({2, 8})->Args({3, 4});
BENCHMARK(BM_XPlus)->Args({1, 8, 0})->Args({1, 8, 1})->Args({2, 4, 0})->Args({2, 4, 1});
BENCHMARK(BM_ComposeInverse)->Args({1, 8})->Args({2, 4});

BENCHMARK_MAIN();
