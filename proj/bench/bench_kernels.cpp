// Parallel kernels against their serial references.

#include "curvecur/counting.hpp"
#include "curvecur/crossings.hpp"
#include "curvecur/functionals.hpp"

#include <benchmark/benchmark.h>

using namespace curvecur;

namespace {

const auto& rep = hyperbolic::HolonomyRep::builtin_pt();
const char* kU = "aabABabbAB";
const char* kV = "abbaBAbaab";

void BM_LinkedCosets(benchmark::State& st) {
  int r = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(crossings::linked_cosets(rep, kU, kV, r));
}

void BM_LinkedCosetsSerial(benchmark::State& st) {
  int r = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(crossings::linked_cosets_serial(rep, kU, kV, r));
}

void BM_CountHyplen(benchmark::State& st) {
  auto f = counting::as_slope_value(functionals::hyperbolic_length_functional());
  for (auto _ : st) benchmark::DoNotOptimize(counting::count_slopes(f, static_cast<double>(st.range(0))));
}

void BM_CountHyplenSerial(benchmark::State& st) {
  auto f = counting::as_slope_value(functionals::hyperbolic_length_functional());
  for (auto _ : st) benchmark::DoNotOptimize(counting::count_slopes_serial(f, static_cast<double>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_LinkedCosets)->Arg(6)->Arg(10);
BENCHMARK(BM_LinkedCosetsSerial)->Arg(6)->Arg(10);
BENCHMARK(BM_CountHyplen)->Arg(20)->Arg(40);
BENCHMARK(BM_CountHyplenSerial)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
