#include <benchmark/benchmark.h>

#include "paircorr/ansatz.hpp"
#include "paircorr/entanglement.hpp"
#include "paircorr/solver.hpp"

namespace {

using namespace paircorr;

void BM_EnumerateBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    FockBasis basis(n);
    benchmark::DoNotOptimize(basis.size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EnumerateBasis)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_IndexLookup(benchmark::State& state) {
  const FockBasis basis(64);
  index_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(basis.index_of(basis.occ_of(i)));
    i = (i + 1) % basis.size();
  }
}
BENCHMARK(BM_IndexLookup);

void BM_BuildHamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FockBasis basis(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_pair_hamiltonian(1.0, basis).nonzeros());
  }
}
BENCHMARK(BM_BuildHamiltonian)->RangeMultiplier(2)->Range(8, 64);

void BM_SparseMatvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = shared_basis(n);
  const SparseOperator h = build_pair_hamiltonian(1.0, *basis);
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(h.dim()).normalized();
  Eigen::VectorXcd y(h.dim());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_SparseMatvec)->RangeMultiplier(2)->Range(8, 64);

void BM_GroundStateLanczos(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = shared_basis(n);
  const SparseOperator h = build_pair_hamiltonian(1.0, *basis);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_state_lanczos(h, basis, {}).energy);
  }
}
BENCHMARK(BM_GroundStateLanczos)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ReducedGroundState(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduced_ground_state(m, 1.0).energy);
  }
}
BENCHMARK(BM_ReducedGroundState)->RangeMultiplier(4)->Range(64, 4096);

void BM_EmbedReduced(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto gs = reduced_ground_state(m, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed_reduced(gs.amplitudes, m).amps.data());
  }
  state.SetComplexityN(2 * m);
}
BENCHMARK(BM_EmbedReduced)->RangeMultiplier(2)->Range(8, 64)->Complexity()->Unit(benchmark::kMillisecond);

void BM_EntropiesFull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gs = reduced_ground_state(n / 2, 1.0);
  const StateVector psi = embed_reduced(gs.amplitudes, n / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropies(psi, Bipartition{0, 1}).svn);
  }
}
BENCHMARK(BM_EntropiesFull)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_OptimalFidelity(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto gs = reduced_ground_state(m, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_fidelity(gs.amplitudes, m).fidelity);
  }
}
BENCHMARK(BM_OptimalFidelity)->RangeMultiplier(4)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();
