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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ip/core.hpp"

namespace ip {

class LatentGaussianModel;
class QuerySet;

/// Unadjusted Langevin settings. Every chain runs burn_in + per_chain * thinning
/// iterations and keeps every thinning-th state after burn-in.
struct SamplerConfig {
  double step_size = 5e-3;
  std::size_t burn_in = 1000;
  std::size_t n_samples = 12000;  // retained, summed over chains
  std::size_t thinning = 1;
  std::uint64_t seed = 0;
  std::size_t chains = 4;
  double divergence_bound = 1e6;

  void validate() const;
  /// Retained samples of chain c (the remainder goes to the first chains).
  std::size_t samples_for_chain(std::size_t c) const;
};

class SamplerDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Log density up to a constant; writes its gradient into grad.
using LogDensityFn = std::function<double(std::span<const double> z, std::span<double> grad)>;

struct ChainSamples {
  std::size_t dim = 0;
  std::vector<double> samples;                   // n x dim, chain-major
  std::vector<std::vector<double>> final_states;  // one per chain
  std::size_t size() const { return dim == 0 ? 0 : samples.size() / dim; }
};

/// z <- z + eta * grad log p(z) + sqrt(2 eta) * xi. Chain c draws from the
/// stream seeded with seed ^ c. `init`, when given, holds one start per chain
/// (warm start); otherwise chains start at the origin.
ChainSamples run_langevin(const LogDensityFn& target, std::size_t dim, const SamplerConfig& cfg,
                          const std::vector<std::vector<double>>* init = nullptr, bool parallel_chains = true);

struct LogTarget {
  double value = 0.0;
  std::vector<double> gradient;
};

/// log p(z) + sum over observed slots of log Bern(a_j; sigmoid(psi_j(z, y))).
LogTarget log_target(const LatentGaussianModel& model, const QuerySet& qset, std::span<const double> z,
                     LabelIndex y, const History& history);

/// log_target as a reusable closure over the observed primitives.
LogDensityFn make_log_target(const LatentGaussianModel& model, LabelIndex y,
                             std::span<const std::int8_t> observed);

ChainSamples ula_sample(const LatentGaussianModel& model, const QuerySet& qset, LabelIndex y,
                        const History& history, const SamplerConfig& cfg,
                        const std::vector<std::vector<double>>* init = nullptr);

}  // namespace ip
