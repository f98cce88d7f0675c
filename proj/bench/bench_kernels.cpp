// Serial reference kernels vs their OpenMP versions.
//   bench_kernels --benchmark_filter=Subset
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "roughsel/kernels.hpp"
#include "roughsel/matrix.hpp"
#include "roughsel/table.hpp"

using namespace roughsel;

namespace {

DecisionTable coded_table(std::size_t n, std::size_t attrs, Code levels) {
  std::mt19937_64 rng(1);
  std::vector<std::vector<Code>> rows(n, std::vector<Code>(attrs));
  std::vector<Code> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : rows[i]) c = static_cast<Code>(rng() % levels);
    d[i] = static_cast<Code>(rng() % 2);
  }
  d[0] = 0;
  d[1] = 1;
  return DecisionTable::from_codes(rows, d);
}

Matrix gaussian(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (auto& v : m.data()) v = g(rng);
  return m;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void set_label(benchmark::State& s) { s.SetLabel(s.range(0) ? "omp" : "serial"); }

void BM_SubsetPositiveCounts(benchmark::State& state) {
  const auto t = coded_table(200, static_cast<std::size_t>(state.range(1)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::subset_positive_counts(t.view(), exec_of(state)));
  set_label(state);
}
BENCHMARK(BM_SubsetPositiveCounts)->ArgsProduct({{0, 1}, {10, 14}})->Unit(benchmark::kMillisecond);

void BM_RefinedPositiveCounts(benchmark::State& state) {
  const auto t = coded_table(static_cast<std::size_t>(state.range(1)), 2000, 3);
  const auto v = t.view();
  std::vector<std::uint32_t> ids(v.column(0).begin(), v.column(0).end());
  std::vector<std::size_t> cand(v.num_attributes());
  for (std::size_t a = 0; a < cand.size(); ++a) cand[a] = a;
  std::vector<std::size_t> out(cand.size());
  for (auto _ : state) {
    kernels::refined_positive_counts(v, ids, 3, cand, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
}
BENCHMARK(BM_RefinedPositiveCounts)->ArgsProduct({{0, 1}, {100, 1000}})->Unit(benchmark::kMillisecond);

void BM_AssignNearest(benchmark::State& state) {
  const auto data = gaussian(static_cast<std::size_t>(state.range(1)), 16, 2);
  const auto cents = gaussian(8, 16, 3);
  std::vector<std::size_t> assign(data.rows());
  std::vector<double> dist(data.rows());
  for (auto _ : state) {
    kernels::assign_nearest(data, cents, assign, dist, exec_of(state));
    benchmark::DoNotOptimize(dist.data());
  }
  set_label(state);
}
BENCHMARK(BM_AssignNearest)->ArgsProduct({{0, 1}, {1000, 100000}});

void BM_FcmUpdate(benchmark::State& state) {
  const auto data = gaussian(static_cast<std::size_t>(state.range(1)), 8, 4);
  Matrix cents = gaussian(4, 8, 5), dist, u;
  for (auto _ : state) {
    kernels::euclidean_distances(data, cents, dist, exec_of(state));
    kernels::fcm_memberships(dist, 2.0, u, exec_of(state));
    kernels::fcm_centroids(data, u, 2.0, cents, exec_of(state));
    benchmark::DoNotOptimize(cents.data().data());
  }
  set_label(state);
}
BENCHMARK(BM_FcmUpdate)->ArgsProduct({{0, 1}, {1000, 100000}});

void BM_FitDiscretizer(benchmark::State& state) {
  RawMatrix m;
  m.values = gaussian(60, static_cast<std::size_t>(state.range(1)), 6);
  for (std::size_t a = 0; a < m.num_attributes(); ++a) m.attribute_names.push_back("g" + std::to_string(a));
  m.class_names = {"a", "b"};
  for (std::size_t i = 0; i < 60; ++i) m.class_labels.push_back(static_cast<Code>(i % 2));
  for (auto _ : state) benchmark::DoNotOptimize(fit_discretizer(m, 3, 7, exec_of(state)));
  set_label(state);
}
BENCHMARK(BM_FitDiscretizer)->ArgsProduct({{0, 1}, {50, 2000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
