#include <benchmark/benchmark.h>

#include "modtrace/drinfeld.hpp"
#include "modtrace/elltrace.hpp"
#include "modtrace/heckepoly.hpp"

using namespace modtrace;

namespace {

void BM_FieldMul(benchmark::State& st) {
  auto F = field(3, 5, 1u << 20);
  FqField::Elem x = 7, y = 11;
  for (auto _ : st) {
    x = F->mul(x, y) + 1;
    if (x >= F->size()) x = 2;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_FieldMul);

void BM_Distribution(benchmark::State& st) {
  auto q = std::uint64_t(st.range(0));
  auto pp = *as_prime_power(q);
  EnumOptions opt{1, 1u << 20};
  for (auto _ : st) {
    clear_distribution_cache();
    auto D = distribution(field(pp.p, pp.a, opt.maxField), LevelStructureSpec::by_name("1"), opt);
    benchmark::DoNotOptimize(D.weight.size());
  }
}
BENCHMARK(BM_Distribution)->Arg(5)->Arg(27)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_DistributionFromClasses(benchmark::State& st) {
  auto q = std::uint64_t(st.range(0));
  auto pp = *as_prime_power(q);
  EnumOptions opt{1, 1u << 20};
  for (auto _ : st) {
    clear_distribution_cache();
    auto D = distribution_from_classes(field(pp.p, pp.a, opt.maxField), LevelStructureSpec::by_name("1"), opt);
    benchmark::DoNotOptimize(D.weight.size());
  }
}
BENCHMARK(BM_DistributionFromClasses)->Arg(5)->Arg(27)->Unit(benchmark::kMillisecond);

void BM_Moments(benchmark::State& st) {
  EnumOptions opt{1, 1u << 20};
  auto D = distribution(field(23, 1, opt.maxField), LevelStructureSpec::by_name("1"), opt);
  for (auto _ : st) benchmark::DoNotOptimize(moments(D, unsigned(st.range(0))).moments.size());
}
BENCHMARK(BM_Moments)->Arg(60)->Arg(240);

void BM_HeckePoly(benchmark::State& st) {
  EnumOptions opt{1, 1u << 20};
  for (auto _ : st) benchmark::DoNotOptimize(charpoly_Tp(5, unsigned(st.range(0)), opt).poly.size());
}
BENCHMARK(BM_HeckePoly)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DrinfeldClasses(benchmark::State& st) {
  auto P = DrinfeldParams::make(3, "T^2+1", 2, 1u << 20);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_classes(P, 1).size());
}
BENCHMARK(BM_DrinfeldClasses)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
