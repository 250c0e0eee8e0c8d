/*
 * Copyright 2026 The infopursuit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Reference versus optimized kernels: MI scoring of patch candidates and the
// EM log-likelihood table.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ip/kernels.hpp"

using namespace ip;
using namespace ip::kernels;

namespace {

// 10 labels x 8 components over a 28x28 grid, with peaked weights like a
// posterior after a few answers.
struct Fixture {
  std::vector<double> theta, weight;
  std::vector<LabelIndex> label;
  FreeSlotLists candidates;

  explicit Fixture(std::uint32_t side) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t C = 80;
    for (std::size_t c = 0; c < C; ++c) {
      label.push_back(static_cast<LabelIndex>(c / 8));
      weight.push_back(std::pow(u(gen), 4.0));
      for (int j = 0; j < 784; ++j) {
        const double t = u(gen);
        theta.push_back(t < 0.5 ? 1e-4 + 0.2 * t : 0.9 + 0.0999 * t);
      }
    }
    double total = 0.0;
    for (double w : weight) total += w;
    for (double& w : weight) w /= total;
    for (std::uint32_t r = 0; r + side <= 28; r += 2)
      for (std::uint32_t c = 0; c + side <= 28; c += 2) {
        std::vector<std::uint32_t> s;
        for (std::uint32_t i = 0; i < side; ++i)
          for (std::uint32_t j = 0; j < side; ++j) s.push_back((r + i) * 28 + c + j);
        candidates.push_back(s);
      }
  }
  ComponentView view() const { return {theta, 784, label, weight, 10}; }
};

template <int Kind>
void BM_Score(benchmark::State& state) {
  const Fixture f(static_cast<std::uint32_t>(state.range(0)));
  std::vector<double> out(f.candidates.size());
  for (auto _ : state) {
    if constexpr (Kind == 0) score_reference(f.view(), f.candidates, out);
    if constexpr (Kind == 1) score_serial(f.view(), f.candidates, out);
    if constexpr (Kind == 2) score_parallel(f.view(), f.candidates, out);
    if constexpr (Kind == 3) score_screened(f.view(), f.candidates, out, PruneConfig{}, false);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.candidates.size()));
}
BENCHMARK(BM_Score<0>)->Name("score/reference")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Score<1>)->Name("score/serial")->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Score<2>)->Name("score/parallel")->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Score<3>)->Name("score/screened")->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_Loglik(benchmark::State& state) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const std::size_t K = 8, d = 784, n = static_cast<std::size_t>(state.range(0));
  std::vector<double> theta(K * d);
  for (double& t : theta) t = u(gen);
  const auto table = BernoulliLogTable::from_theta(theta, K, d);
  std::vector<std::uint8_t> rows(n * d);
  std::vector<std::vector<std::uint32_t>> ones(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (gen() % 5 == 0) {
        rows[i * d + j] = 1;
        ones[i].push_back(static_cast<std::uint32_t>(j));
      }
  std::vector<double> out(n * K);
  for (auto _ : state) {
    if constexpr (Parallel)
      bernoulli_loglik_parallel(table, ones, out);
    else
      bernoulli_loglik_reference(table, rows, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Loglik<false>)->Name("loglik/reference")->Arg(6000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Loglik<true>)->Name("loglik/parallel")->Arg(6000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
