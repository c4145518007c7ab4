// Serial reference path against the OpenMP path for the three parallel
// kernels. Arg 0 is serial, 1 is parallel.

#include <benchmark/benchmark.h>

#include "../tests/support.hpp"
#include "plsys/dilation.hpp"
#include "plsys/fixtures.hpp"
#include "plsys/leray.hpp"

using namespace plsys;
namespace fx = plsys::fixtures;

namespace {

const Field Q = Field::rationals();

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const Bisheaf& big_random_bisheaf() {
  static const Bisheaf b = [] {
    std::mt19937 rng(9);
    ComplexPtr k = share(barycentric_subdivision(barycentric_subdivision(*fx::octahedron())));
    return testing_support::random_bisheaf(rng, Field::prime(1000003), k, std::vector<char>(k->size(), 1), 4);
  }();
  return b;
}

void BM_Epify(benchmark::State& state) {
  const Bisheaf& b = big_random_bisheaf();
  for (auto _ : state) benchmark::DoNotOptimize(epify(b.sheaf, {exec_of(state), 0}));
  state.SetLabel(std::to_string(b.base().size()) + " simplices");
}

void BM_Monofy(benchmark::State& state) {
  const Bisheaf& b = big_random_bisheaf();
  for (auto _ : state) benchmark::DoNotOptimize(monofy(b.cosheaf, {exec_of(state), 0}));
}

void BM_LerayExample1(benchmark::State& state) {
  fx::DeskModel d = fx::example1_desk(fx::cone_hexagon());
  for (auto _ : state) benchmark::DoNotOptimize(leray_bisheaf(d.map, d.degree, d.orientation, Q, exec_of(state)));
  state.SetLabel(std::to_string(d.map.source().size()) + " simplices upstairs");
}

void BM_PlsMany(benchmark::State& state) {
  Dilation dil = dilate(fx::example1(Q));
  const Bisheaf& b = dil.twice;
  const SimplicialComplex& k = *dil.map.k2;
  std::vector<EtaleOpen> opens;
  for (std::size_t v : k.of_dimension(0)) opens.push_back(EtaleOpen::from_open_set(dil.map.k2, open_star(k, v)));
  for (auto _ : state) benchmark::DoNotOptimize(pls_many(b, opens, exec_of(state)));
  state.SetLabel(std::to_string(opens.size()) + " opens");
}

}  // namespace

BENCHMARK(BM_Epify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Monofy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LerayExample1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlsMany)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
