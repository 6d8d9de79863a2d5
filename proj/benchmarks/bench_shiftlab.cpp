#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <shiftlab/shiftlab.hpp>
#include <string>

using namespace shiftlab;

namespace {

// Random recursive tree on n vertices with ids t0..t{n-1}.
DirectedForest random_tree(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<VertexId, VertexId> parent{{"t0", "t0"}};
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    parent["t" + std::to_string(i)] = "t" + std::to_string(p);
  }
  return DirectedForest::from_parent_map(parent);
}

std::set<VertexId> childless(const DirectedForest& f) {
  std::set<VertexId> out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.degree(v) == 0) out.insert(f.id(v));
  }
  return out;
}

// Fork tree carrying the hyponormal counterexample weights.
WeightedShift counterexample(std::size_t n) {
  for (std::uint64_t seed = 1;; ++seed) {
    auto tree = random_tree(n, seed);
    try {
      return make_counterexample(tree, childless(tree)).shift;
    } catch (const Error&) {
    }
  }
}

void BM_PowerK(benchmark::State& state) {
  const auto f = random_tree(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(power_k(f, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PowerK)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_HipExact(benchmark::State& state) {
  const auto s = counterexample(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(check_hyponormal_power<Rational>(s, k));
}
BENCHMARK(BM_HipExact)->ArgsProduct({{8, 32, 128}, {1, 2, 4}});

void BM_HipFloat(benchmark::State& state) {
  const auto s = counterexample(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(check_hyponormal_power<double>(s, k, 1e-12));
}
BENCHMARK(BM_HipFloat)->ArgsProduct({{8, 32, 128}, {1, 2, 4}});

void BM_CheckSubnormal(benchmark::State& state) {
  const auto tree = random_tree(static_cast<std::size_t>(state.range(0)), 11);
  const auto s = make_isometric(tree, childless(tree));
  for (auto _ : state) benchmark::DoNotOptimize(check_subnormal(s));
}
BENCHMARK(BM_CheckSubnormal)->RangeMultiplier(4)->Range(8, 512);

void BM_PhaseGauge(benchmark::State& state) {
  const auto f = random_tree(static_cast<std::size_t>(state.range(0)), 13);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d;
  std::map<VertexId, std::complex<double>> lambda;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!f.is_root(v)) lambda[f.id(v)] = {d(rng), d(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(phase_gauge(f, lambda));
}
BENCHMARK(BM_PhaseGauge)->RangeMultiplier(4)->Range(16, 4096);

void BM_HankelCheck(benchmark::State& state) {
  std::vector<Atom> atoms;
  for (long i = 1; i <= state.range(0); ++i) {
    atoms.push_back({Rational(i), Rational(1, static_cast<unsigned long>(state.range(0)))});
  }
  const auto m = moments_of(AtomicMeasure::from_atoms(atoms), 2 * static_cast<unsigned>(state.range(0)) + 2);
  for (auto _ : state) benchmark::DoNotOptimize(hankel_check(m));
}
BENCHMARK(BM_HankelCheck)->DenseRange(2, 10, 4);

}  // namespace

BENCHMARK_MAIN();
