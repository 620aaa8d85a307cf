// Parallel kernels against their serial reference twins.

#include <benchmark/benchmark.h>

#include <vector>

#include "mzc/kernels.hpp"
#include "mzc/walk.hpp"

namespace {

using mzc::cplx;
namespace k = mzc::kernels;

// log det(I - u M(Theta)) for the 2D Grover F-type coin: the integrand of
// the logarithmic zeta function.
auto logdet_integrand(const mzc::CoinMatrix& coin, const k::TorusGrid& g, double u) {
  return [&coin, &g, u](std::span<const int> idx) {
    double theta[k::kMaxDim];
    for (std::size_t j = 0; j < idx.size(); ++j) theta[j] = g.angles[static_cast<std::size_t>(idx[j])];
    const int n = coin.size();
    cplx m[16 * 16];
    mzc::momentum_matrix_into(coin.row_major(), coin.dim(), theta, m);
    for (int i = 0; i < n * n; ++i) m[i] *= -u;
    for (int i = 0; i < n; ++i) m[i * n + i] += 1.0;
    return std::log(k::det_small(n, m));
  };
}

const mzc::CoinMatrix& grover2() {
  static const mzc::CoinMatrix c = mzc::CoinSpec{mzc::CoinKind::grover, 2, {}, mzc::ShiftType::f_type}.build();
  return c;
}

void BM_TorusReduce(benchmark::State& state) {
  const auto g = k::make_grid(2, static_cast<int>(state.range(0)), 0.5);
  auto f = logdet_integrand(grover2(), g, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(k::torus_reduce<k::SumAcc>(g, f).sum());
  state.SetItemsProcessed(state.iterations() * g.size());
}

void BM_TorusReduceSerial(benchmark::State& state) {
  const auto g = k::make_grid(2, static_cast<int>(state.range(0)), 0.5);
  auto f = logdet_integrand(grover2(), g, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(k::torus_reduce_serial<k::SumAcc>(g, f).sum());
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void walk_bench(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto& coin = grover2();
  std::vector<cplx> a(static_cast<std::size_t>(side) * side * 4, cplx(0.0));
  std::vector<cplx> b(a.size());
  a[0] = 1.0;
  for (auto _ : state) {
    if constexpr (Parallel)
      k::walk_step(2, side, coin.row_major(), a, b);
    else
      k::walk_step_serial(2, side, coin.row_major(), a, b);
    std::swap(a, b);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_WalkStep(benchmark::State& state) { walk_bench<true>(state); }
void BM_WalkStepSerial(benchmark::State& state) { walk_bench<false>(state); }

}  // namespace

BENCHMARK(BM_TorusReduce)->Arg(128)->Arg(512);
BENCHMARK(BM_TorusReduceSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_WalkStep)->Arg(256)->Arg(1024);
BENCHMARK(BM_WalkStepSerial)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
