#include <benchmark/benchmark.h>

#include <random>

#include "qpsa/crisscross.hpp"
#include "qpsa/damping.hpp"
#include "qpsa/searches.hpp"
#include "qpsa/kernels.hpp"
#include "qpsa/subspace.hpp"

using namespace qpsa;

namespace {

QuadPoly random_poly(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  auto draw = [&](double scale) {
    ComplexMatrix a(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) a(i, j) = scale * d(rng);
    return a;
  };
  QuadPoly p;
  p.M = ComplexMatrix::Identity(n, n) + draw(0.2);
  p.C = draw(1.0);
  p.K = draw(1.0);
  return p;
}

}  // namespace

static void BM_VerticalSearch(benchmark::State& state) {
  const Index n = state.range(0);
  const QuadPoly p = random_poly(n, 42);
  const Weights w{1, 1, 1};
  for (auto _ : state) {
    auto crossings = searches::vertical_search(p, w, 0.1, 0.0);
    benchmark::DoNotOptimize(crossings);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_VerticalSearch)->RangeMultiplier(2)->Range(2, 16)->Complexity();

static void BM_CrissCross(benchmark::State& state) {
  const Index n = state.range(0);
  const QuadPoly p = random_poly(n, 7);
  const Weights w{1, 1, 1};
  for (auto _ : state) {
    auto out = criss_cross(p, w, 0.1);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_CrissCross)->RangeMultiplier(2)->Range(2, 16);

static void BM_SubspacePsaEx52(benchmark::State& state) {
  const auto ex = damping::build_example(damping::ExampleName::ex5_2);
  const QuadPoly p =
      instantiate(ex.family, RealVector::Constant(1, 42.10761));
  for (auto _ : state) {
    auto out = subspace_psa(p, ex.weights, ex.epsilon);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SubspacePsaEx52);

static void BM_Compress(benchmark::State& state) {
  const Index n = state.range(0);
  const QuadPoly p = random_poly(n, 11);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix v(n, 4);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < n; ++i) v(i, j) = Complex(d(rng), d(rng));
  const auto qr = kernels::thin_qr(v);
  for (auto _ : state) {
    auto red = compress(p, qr.first);
    benchmark::DoNotOptimize(red);
  }
}
BENCHMARK(BM_Compress)->RangeMultiplier(4)->Range(16, 256);

BENCHMARK_MAIN();
