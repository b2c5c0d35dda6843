#include <benchmark/benchmark.h>

#include <random>

#include "plhom/groups.hpp"
#include "plhom/towers.hpp"
#include "plhom/wreath.hpp"

using namespace plhom;

namespace {

PLMap random_map(std::mt19937_64& rng, int interior) {
  std::vector<Rat> xs, ys;
  while (static_cast<int>(xs.size()) < interior) {
    long den = 1L << std::uniform_int_distribution<int>(1, 10)(rng);
    Rat x(std::uniform_int_distribution<long>(1, den - 1)(rng), den);
    bool dup = false;
    for (auto& v : xs) dup = dup || v == x;
    if (!dup) xs.push_back(x);
  }
  while (static_cast<int>(ys.size()) < interior) {
    long den = 1L << std::uniform_int_distribution<int>(1, 10)(rng);
    Rat y(std::uniform_int_distribution<long>(1, den - 1)(rng), den);
    bool dup = false;
    for (auto& v : ys) dup = dup || v == y;
    if (!dup) ys.push_back(y);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::vector<Node> nodes;
  nodes.push_back({Rat(0), Rat(0)});
  for (int i = 0; i < interior; ++i) nodes.push_back({xs[i], ys[i]});
  nodes.push_back({Rat(1), Rat(1)});
  return PLMap::from_nodes(std::move(nodes));
}

void BM_compose(benchmark::State& state) {
  std::mt19937_64 rng(42);
  PLMap f = random_map(rng, static_cast<int>(state.range(0)));
  PLMap g = random_map(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compose(f, g));
}
BENCHMARK(BM_compose)->Arg(8)->Arg(32)->Arg(128);

void BM_evaluate(benchmark::State& state) {
  std::mt19937_64 rng(43);
  PLMap f = random_map(rng, static_cast<int>(state.range(0)));
  Rat x(355, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(f(x));
}
BENCHMARK(BM_evaluate)->Arg(8)->Arg(128);

void BM_orbitals(benchmark::State& state) {
  std::mt19937_64 rng(44);
  PLMap f = random_map(rng, 64);
  for (auto _ : state) benchmark::DoNotOptimize(orbitals_of_map(f));
}
BENCHMARK(BM_orbitals);

void BM_commutator(benchmark::State& state) {
  GroupSpec F = f_generators(2);
  PLMap a = power(F.generators[0].second, 3);
  PLMap b = power(F.generators[1].second, -2);
  for (auto _ : state) benchmark::DoNotOptimize(commutator(a, b));
}
BENCHMARK(BM_commutator);

void BM_enumerate_thompson(benchmark::State& state) {
  GroupSpec F = f_generators(2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_elements(F, state.range(0)));
}
BENCHMARK(BM_enumerate_thompson)->Arg(3)->Arg(5);

void BM_max_tower_wreath(benchmark::State& state) {
  GroupSpec W = build_family(FamilyKind::W, 3, 1);
  auto S = signed_orbitals_up_to(W, 4);
  for (auto _ : state) benchmark::DoNotOptimize(max_tower(S));
}
BENCHMARK(BM_max_tower_wreath);

void BM_imbalance_tower(benchmark::State& state) {
  GroupSpec F = f_generators(2);
  auto w = *imbalance_search(F, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_exemplary_tower(F, w, 4));
}
BENCHMARK(BM_imbalance_tower);

}  // namespace

BENCHMARK_MAIN();
