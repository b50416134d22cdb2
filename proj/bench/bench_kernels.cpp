// Serial reference vs OpenMP kernels on the grids the division solver uses.

#include <benchmark/benchmark.h>

#include <cmath>

#include "skoda/generators.hpp"
#include "skoda/kernels.hpp"
#include "skoda/quadrature.hpp"
#include "skoda/random.hpp"

using namespace skoda;

namespace {

QuadratureGrid grid_for(int n) {
  return n == 1 ? build_grid(Domain::unit_polydisc(1), 256, 128) : build_grid(Domain::unit_polydisc(2), 16, 8);
}

const GeneratorSystem& system_for(int n) {
  static const GeneratorSystem g1({MultiPoly::variable(1, 0), MultiPoly::monomial(1, {2})});
  static const GeneratorSystem g2({MultiPoly::variable(2, 0), MultiPoly::variable(2, 1), MultiPoly::constant(2, 0.5)});
  return n == 1 ? g1 : g2;
}

Density weight_for(int n) {
  const GeneratorSystem& G = system_for(n);
  return [&G](const Point& z) {
    const double s = gnorm2(G, z).value;
    return s < 1e-14 ? std::nan("") : 1.0 / std::pow(s, G.q() + 1.0);
  };
}

std::vector<PolyTuple> tuples_for(int n, int k) {
  auto rng = instance_rng(1, 0);
  std::vector<PolyTuple> out;
  for (int a = 0; a < k; ++a) {
    PolyTuple t;
    for (int j = 0; j < system_for(n).p(); ++j) t.push_back(random_poly(rng, n, 2, 3));
    out.push_back(t);
  }
  return out;
}

template <bool Parallel>
void BM_grid_sum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuadratureGrid g = grid_for(n);
  const Density rho = weight_for(n);
  for (auto _ : state) {
    const GridSum s = Parallel ? grid_sum(rho, g) : grid_sum_serial(rho, g);
    benchmark::DoNotOptimize(s.value);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Parallel>
void BM_weighted_gram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuadratureGrid g = grid_for(n);
  const Density rho = weight_for(n);
  const auto tuples = tuples_for(n, static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const WeightedGram w = Parallel ? weighted_gram(g, tuples, rho) : weighted_gram_serial(g, tuples, rho);
    benchmark::DoNotOptimize(w.gram.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

}  // namespace

BENCHMARK(BM_grid_sum<false>)->Name("grid_sum/serial")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_sum<true>)->Name("grid_sum/openmp")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_gram<false>)->Name("weighted_gram/serial")->Args({1, 4})->Args({2, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_gram<true>)->Name("weighted_gram/openmp")->Args({1, 4})->Args({2, 8})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
