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

#include <cmath>
#include <random>

#include "doctest.h"
#include "ip/models.hpp"
#include "ip/sampler.hpp"

using namespace ip;

namespace {

DenseLayer random_layer(std::mt19937_64& gen, std::size_t in, std::size_t out, Activation act) {
  std::normal_distribution<double> n(0.0, 0.7);
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.activation = act;
  for (std::size_t i = 0; i < in * out; ++i) l.weights.push_back(n(gen));
  for (std::size_t i = 0; i < out; ++i) l.bias.push_back(n(gen));
  return l;
}

LatentGaussianModel small_model(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::size_t dim = 2, L = 2;
  Decoder dec(dim, L, {random_layer(gen, dim + L, 5, Activation::tanh), random_layer(gen, 5, 9, Activation::identity)});
  return LatentGaussianModel(LabelSpace({"a", "b"}), dec, {0.5, 0.5});
}

double mean_of(const ChainSamples& s, std::size_t i) {
  double m = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) m += s.samples[k * s.dim + i];
  return m / static_cast<double>(s.size());
}

double var_of(const ChainSamples& s, std::size_t i) {
  const double m = mean_of(s, i);
  double v = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) v += std::pow(s.samples[k * s.dim + i] - m, 2);
  return v / static_cast<double>(s.size() - 1);
}

}  // namespace

TEST_CASE("target gradient matches finite differences") {
  const auto m = small_model(1);
  const auto qs = build_patch_queryset(3, 3, 1);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n(0.0, 1.5);
  History h = History().extended(0, Answer{1}).extended(4, Answer{0}).extended(8, Answer{1});
  const double eps = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> z{n(gen), n(gen)};
    const LabelIndex y = trial % 2;
    const auto t = log_target(m, qs, z, y, h);
    for (std::size_t i = 0; i < 2; ++i) {
      auto hi = z, lo = z;
      hi[i] += eps;
      lo[i] -= eps;
      const double fd = (log_target(m, qs, hi, y, h).value - log_target(m, qs, lo, y, h).value) / (2 * eps);
      CHECK(std::abs(fd - t.gradient[i]) <= 1e-4);
    }
  }
  // Without observations the target is the standard normal log density.
  const auto t0 = log_target(m, qs, std::vector<double>{1.0, -2.0}, 0, History());
  CHECK(t0.value == doctest::Approx(-2.5));
  CHECK(t0.gradient[1] == doctest::Approx(2.0));
}

TEST_CASE("langevin on a standard gaussian") {
  SamplerConfig cfg;
  cfg.step_size = 0.01;
  cfg.burn_in = 500;
  cfg.n_samples = 50000;
  cfg.thinning = 20;
  cfg.chains = 4;
  cfg.seed = 42;
  auto target = [](std::span<const double> z, std::span<double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      v -= 0.5 * z[i] * z[i];
      g[i] = -z[i];
    }
    return v;
  };
  const auto s = run_langevin(target, 2, cfg);
  REQUIRE(s.size() == 50000);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(mean_of(s, i)) <= 0.05);
    CHECK(std::abs(var_of(s, i) - 1.0) <= 0.1);
  }
}

TEST_CASE("langevin on a shifted quadratic target") {
  // log p = -(z - mu)^2 / (2 s^2): mean mu, variance s^2 (ULA bias is O(eta)).
  const double mu = 1.5, s2 = 0.25;
  SamplerConfig cfg;
  cfg.step_size = 0.005;
  cfg.burn_in = 1000;
  cfg.n_samples = 20000;
  cfg.thinning = 10;
  cfg.chains = 2;
  cfg.seed = 3;
  auto target = [&](std::span<const double> z, std::span<double> g) {
    g[0] = -(z[0] - mu) / s2;
    return -0.5 * (z[0] - mu) * (z[0] - mu) / s2;
  };
  const auto s = run_langevin(target, 1, cfg);
  CHECK(std::abs(mean_of(s, 0) - mu) <= 0.05);
  CHECK(std::abs(var_of(s, 0) - s2) <= 0.05);
}

TEST_CASE("langevin is deterministic per seed and parallel choice") {
  SamplerConfig cfg;
  cfg.burn_in = 50;
  cfg.n_samples = 60;
  cfg.chains = 3;
  cfg.seed = 11;
  const auto m = small_model(4);
  std::vector<std::int8_t> obs{1, -1, 0, -1, 1, -1, -1, 0, -1};
  const auto f = make_log_target(m, 1, obs);
  const auto a = run_langevin(f, 2, cfg, nullptr, true);
  const auto b = run_langevin(f, 2, cfg, nullptr, false);
  CHECK(a.samples == b.samples);
  CHECK(a.size() == 60);
  cfg.seed = 12;
  const auto c = run_langevin(f, 2, cfg);
  CHECK(a.samples != c.samples);
  // Warm start continues from the given states.
  const auto w = run_langevin(f, 2, cfg, &a.final_states);
  CHECK(w.samples != c.samples);
  std::vector<std::vector<double>> bad(2, std::vector<double>(2, 0.0));
  CHECK_THROWS_AS(run_langevin(f, 2, cfg, &bad), std::invalid_argument);
}

TEST_CASE("langevin reports divergence") {
  SamplerConfig cfg;
  cfg.step_size = 3.0;
  cfg.burn_in = 200;
  cfg.n_samples = 4;
  cfg.divergence_bound = 1e3;
  auto target = [](std::span<const double> z, std::span<double> g) {
    g[0] = -z[0];
    return -0.5 * z[0] * z[0];
  };
  CHECK_THROWS_AS(run_langevin(target, 1, cfg), SamplerDivergence);
}

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  cfg.n_samples = 10;
  cfg.chains = 4;
  CHECK(cfg.samples_for_chain(0) == 3);
  CHECK(cfg.samples_for_chain(3) == 2);
  cfg.step_size = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.step_size = 0.01;
  cfg.thinning = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
