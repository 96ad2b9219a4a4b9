#include <benchmark/benchmark.h>

#include <random>

#include "cqcode/channels.hpp"
#include "cqcode/infomeasure.hpp"

using namespace cqcode;

namespace {

CQChannel qubit_channel(int inputs) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<DensityMat> states;
  for (int x = 0; x < inputs; ++x) {
    Mat m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = Cplx(g(rng), g(rng));
    Mat rho = m * m.adjoint();
    rho /= rho.trace().real();
    states.emplace_back(HermMat(std::move(rho)));
  }
  return CQChannel(inputs, std::move(states));
}

}  // namespace

static void BM_HolevoMI(benchmark::State& state) {
  const CQChannel w = qubit_channel(4);
  const Dist p = Dist::uniform(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(holevo_mi(p, w).value);
  }
}
BENCHMARK(BM_HolevoMI);

static void BM_SibsonRenyi(benchmark::State& state) {
  const CQChannel w = qubit_channel(4);
  const Dist p = Dist::uniform(4);
  const double alpha = 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(renyi_mi_sibson(p, w, alpha).value);
  }
}
BENCHMARK(BM_SibsonRenyi);

static void BM_MacConditionalMI(benchmark::State& state) {
  const CompoundFamily fam = build_example1();
  const MarkovTriple triple = MarkovTriple::product(Dist::uniform(2), Dist::uniform(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mac_mi(fam.mac_members[1], triple, MacInfo::b_given_at).value);
  }
}
BENCHMARK(BM_MacConditionalMI);

static void BM_STimesRenyiEndpoint(benchmark::State& state) {
  const CQChannel w = qubit_channel(3);
  const MarkovTriple ux = MarkovTriple::from_ux(Dist::uniform(1), {Dist::uniform(3)});
  const CondEnsemble e = ensemble_private(ux, w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_times_renyi(e, 1.0));  // support-projector limit
  }
}
BENCHMARK(BM_STimesRenyiEndpoint);
