// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "frobdyn/fsets.hpp"
#include "frobdyn/trichotomy.hpp"

using namespace frobdyn;

namespace {

FrobEq two_term() {
  FrobEq E;
  E.P = {Rat(0), Rat(1)};
  E.c = {Rat(0), Rat(1), Rat(1)};
  E.delta = {1, 1};
  E.q = 3;
  return E;
}

Orbit frobenius_orbit(long n) {
  auto K = std::make_shared<const FunctionField>(std::make_shared<const FiniteField>(3, 1), 2);
  RatMatrix A(2, 2, Rat(0));
  A(0, 0) = 3;
  A(0, 1) = 1;
  A(1, 1) = 3;
  const auto t1 = parse_rational_function(*K, "t1"), t2 = parse_rational_function(*K, "t2+1");
  const SelfMap S = make_torus_map(K, A, {t1, t2}, {t1, t2});
  return simulate_orbit(S, to_point({t1, t2}, *S.basis), n);
}

void BM_frob_eq_count(benchmark::State& st) {
  const FrobEq E = two_term();
  for (auto _ : st) benchmark::DoNotOptimize(frob_eq_count(E, st.range(0)).count);
}

void BM_frob_eq_count_serial(benchmark::State& st) {
  const FrobEq E = two_term();
  for (auto _ : st) benchmark::DoNotOptimize(frob_eq_count_serial(E, st.range(0)).count);
}

void BM_density_evidence(benchmark::State& st) {
  const Orbit o = frobenius_orbit(st.range(0));
  EvidenceOptions opt;
  opt.spec_trials = 8;
  for (auto _ : st) benchmark::DoNotOptimize(density_evidence(o, opt).verdict);
}

void BM_density_evidence_serial(benchmark::State& st) {
  const Orbit o = frobenius_orbit(st.range(0));
  EvidenceOptions opt;
  opt.spec_trials = 8;
  for (auto _ : st) benchmark::DoNotOptimize(density_evidence_serial(o, opt).verdict);
}

}  // namespace

BENCHMARK(BM_frob_eq_count)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frob_eq_count_serial)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_density_evidence)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_density_evidence_serial)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
