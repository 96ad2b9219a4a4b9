#include <benchmark/benchmark.h>

#include "cqcode/schur.hpp"

using namespace cqcode;

static void BM_Isotypic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(isotypic(n, 2).blocks.size());
  }
}
BENCHMARK(BM_Isotypic)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_RhoOfWord(benchmark::State& state) {
  const std::vector<int> word{0, 1, 0, 0, 1, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_of_word(word, 2).dim());
  }
}
BENCHMARK(BM_RhoOfWord)->Unit(benchmark::kMillisecond);

static void BM_JointDecoderBuild(benchmark::State& state) {
  const CompoundFamily fam = build_example1();
  MacTypeSpec spec;
  spec.t_counts = {6};
  spec.a_counts = {{5, 1}};
  spec.b_counts = {{5, 1}};
  const PackedCode code = pack_mac(6, spec, 0.35, 0.35, 0.45, 0);
  const double sa = std::log(0.15) / 6.0, sb = std::log(0.5) / 6.0;
  for (auto _ : state) {
    const MacDecoders dec =
        build_mac_decoders(fam.mac_members[0], code, sa, sb, MacDecodeMode::joint);
    benchmark::DoNotOptimize(dec.joint->elements.size());
  }
}
BENCHMARK(BM_JointDecoderBuild)->Unit(benchmark::kMillisecond);

static void BM_ExactErrorProbability(benchmark::State& state) {
  const CompoundFamily fam = build_example1();
  MacTypeSpec spec;
  spec.t_counts = {6};
  spec.a_counts = {{5, 1}};
  spec.b_counts = {{5, 1}};
  const PackedCode code = pack_mac(6, spec, 0.35, 0.35, 0.45, 0);
  const MacDecoders dec = build_mac_decoders(fam.mac_members[0], code, std::log(0.15) / 6.0,
                                             std::log(0.5) / 6.0, MacDecodeMode::joint);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mac_error_probability(fam.mac_members[0], code, *dec.joint));
  }
}
BENCHMARK(BM_ExactErrorProbability)->Unit(benchmark::kMillisecond);
