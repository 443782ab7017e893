#include <benchmark/benchmark.h>

#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"

using namespace plwe;

namespace {

std::vector<std::int64_t> trinomial(std::size_t N, std::int64_t c) {
  std::vector<std::int64_t> f(N + 1, 0);
  f[N] = 1;
  f[1] = 1;
  f[0] = c;
  return f;
}

void BM_RingMul(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const RqContext ctx(trinomial(N, 3677), PrimeModulus(3677));
  Rng rng(1);
  const auto p = uniform_poly(ctx, rng);
  const auto s = uniform_poly(ctx, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ring_mul(p, s, ctx));
}
BENCHMARK(BM_RingMul)->Arg(23)->Arg(64)->Arg(256);

void BM_SigmaTableBuild(benchmark::State& state) {
  const PrimeModulus m(4099);
  const FieldElement w(m, static_cast<std::uint64_t>(state.range(0)));
  const auto r = mult_order(w);
  for (auto _ : state) benchmark::DoNotOptimize(SigmaTable(w, r, 8 / r, 2.5).size());
}
BENCHMARK(BM_SigmaTableBuild)->Arg(2017)->Arg(2018);

void BM_SmallSetTrace(benchmark::State& state) {
  std::vector<std::int64_t> f(24, 0);
  f[23] = 1;
  f[20] = -2017;
  f[13] = 1;
  f[10] = -2017;
  f[3] = 2018;
  f[0] = 1;
  const RqContext ctx(f, PrimeModulus(4099));
  const ExtFieldCtx ext(3, FieldElement(ctx.modulus(), 2017));
  const auto table = build_sigma_table_trace(ext.constant(), 3, 2, 2.5);
  Rng rng(2);
  const PlweInstance inst(ctx, GaussianSpec{2.5, false}, rng);
  SampleSet S;
  for (int i = 0; i < state.range(0); ++i) S.push_back(plwe_oracle_rq0(inst, ext, rng).sample);
  const AttackOptions opts{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(small_set_attack_trace(S, table, ext, opts).survivors.size());
}
BENCHMARK(BM_SmallSetTrace)->Args({10, 1})->Args({500, 1})->Args({500, 4});

void BM_DeltaSeries(benchmark::State& state) {
  const PrimeModulus m(3677);
  const double sb = 3677.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delta_probability(m, sb).p_event);
}
BENCHMARK(BM_DeltaSeries)->Arg(32)->Arg(4)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
