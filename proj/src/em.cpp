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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ip/kernels.hpp"
#include "ip/models.hpp"
#include "ip/rng.hpp"

namespace ip {

namespace {

double uniform01(rng::Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

std::size_t hamming(const std::uint8_t* a, const std::uint8_t* b, std::size_t d) {
  std::size_t h = 0;
  for (std::size_t j = 0; j < d; ++j) h += a[j] != b[j];
  return h;
}

// k-means++ seeding under Hamming distance; returns row indices of the centers.
std::vector<std::size_t> seed_centers(std::span<const std::uint8_t> rows, std::size_t n, std::size_t d,
                                      std::size_t K, rng::Engine& eng) {
  std::vector<std::size_t> centers;
  centers.push_back(static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n)));
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  while (centers.size() < K) {
    const auto* c = rows.data() + centers.back() * d;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double h = static_cast<double>(hamming(rows.data() + i * d, c, d));
      dist[i] = std::min(dist[i], h * h);
      total += dist[i];
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n));
    } else {
      double r = uniform01(eng) * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= dist[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pick);
  }
  return centers;
}

}  // namespace

ClassMixture em_fit_class(std::span<const std::uint8_t> rows, std::size_t d, const EmOptions& opts,
                          std::uint64_t stream_seed) {
  if (d == 0 || rows.empty() || rows.size() % d != 0) throw DataError("EM needs a nonempty n x d matrix");
  if (opts.components == 0) throw std::invalid_argument("EM needs at least one component");
  if (opts.max_iters == 0) throw std::invalid_argument("EM needs at least one iteration");
  const std::size_t n = rows.size() / d, K = opts.components;
  const double lo = opts.theta_min, hi = 1.0 - opts.theta_min;
  auto clamp = [&](double v) { return std::clamp(v, lo, hi); };

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += rows[i * d + j];
  for (auto& m : mean) m /= static_cast<double>(n);

  rng::Engine eng(stream_seed);
  const auto centers = seed_centers(rows, n, d, K, eng);
  ClassMixture out;
  out.weights.assign(K, 1.0 / static_cast<double>(K));
  out.theta.resize(K * d);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < d; ++j)
      out.theta[k * d + j] = clamp(0.5 * (rows[centers[k] * d + j] + mean[j]));

  std::vector<std::vector<std::uint32_t>> ones;
  if (opts.mode != ExecutionMode::reference) {
    ones.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (rows[i * d + j]) ones[i].push_back(static_cast<std::uint32_t>(j));
  }

  std::vector<double> ll(n * K), resp(n * K), acc_theta(K * d);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    // E-step.
    const auto table = kernels::BernoulliLogTable::from_theta(out.theta, K, d);
    if (opts.mode == ExecutionMode::reference)
      kernels::bernoulli_loglik_reference(table, rows, ll);
    else
      kernels::bernoulli_loglik_parallel(table, ones, ll);
    std::vector<double> log_w(K);
    for (std::size_t k = 0; k < K; ++k)
      log_w[k] = out.weights[k] > 0.0 ? std::log(out.weights[k]) : -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) m = std::max(m, ll[i * K + k] += log_w[k]);
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += (resp[i * K + k] = std::exp(ll[i * K + k] - m));
      for (std::size_t k = 0; k < K; ++k) resp[i * K + k] /= s;
      total += m + std::log(s);
    }
    out.log_likelihood.push_back(total);
    if (it > 0) {
      const double prev = out.log_likelihood[it - 1];
      if ((total - prev) / std::abs(prev) < opts.tol) break;
    }
    if (it + 1 == opts.max_iters) break;

    // M-step.
    std::vector<double> nk(K, 0.0);
    std::fill(acc_theta.begin(), acc_theta.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < K; ++k) {
        const double r = resp[i * K + k];
        if (r == 0.0) continue;
        nk[k] += r;
        double* a = acc_theta.data() + k * d;
        const std::uint8_t* x = rows.data() + i * d;
        for (std::size_t j = 0; j < d; ++j)
          if (x[j]) a[j] += r;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      out.weights[k] = nk[k] / static_cast<double>(n);
      if (nk[k] < 1e-12) continue;  // empty component keeps its parameters
      for (std::size_t j = 0; j < d; ++j) out.theta[k * d + j] = clamp(acc_theta[k * d + j] / nk[k]);
    }
  }
  return out;
}

EmResult em_fit(const Dataset& data, const QuerySet& qset, const EmOptions& opts) {
  data.validate();
  const std::size_t d = qset.primitive_count(), L = data.labels.size(), K = opts.components;
  std::vector<std::vector<std::uint8_t>> per_class(L);
  for (const auto& item : data.items) {
    auto p = qset.primitives(item.instance);
    per_class[item.label].insert(per_class[item.label].end(), p.begin(), p.end());
  }
  std::vector<double> prior(L), weights, theta;
  std::vector<std::vector<double>> lls;
  for (std::size_t y = 0; y < L; ++y) {
    if (per_class[y].empty()) throw DataError("class '" + data.labels.name(y) + "' has no training instances");
    prior[y] = static_cast<double>(per_class[y].size() / d) / static_cast<double>(data.size());
    auto fit = em_fit_class(per_class[y], d, opts, rng::derive(opts.seed, "em/" + data.labels.name(y)));
    weights.insert(weights.end(), fit.weights.begin(), fit.weights.end());
    theta.insert(theta.end(), fit.theta.begin(), fit.theta.end());
    lls.push_back(std::move(fit.log_likelihood));
  }
  // Renormalize against rounding so the model constructor's checks hold exactly.
  for (std::size_t y = 0; y < L; ++y) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += weights[y * K + k];
    for (std::size_t k = 0; k < K; ++k) weights[y * K + k] /= s;
  }
  return {BernoulliMixtureModel(data.labels, K, d, std::move(prior), std::move(weights), std::move(theta),
                                opts.theta_min),
          std::move(lls)};
}

}  // namespace ip
