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

#include <atomic>
#include <cmath>
#include <string>

#include "ip/models.hpp"
#include "ip/querysets.hpp"
#include "ip/rng.hpp"
#include "ip/sampler.hpp"

namespace ip {

namespace {

// Standard normal draws by Box-Muller on 53-bit uniforms, so that streams are
// identical across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : eng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do u1 = uniform(); while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  rng::Engine eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct ObservedSlot {
  std::uint32_t slot;
  std::uint8_t value;
};

std::vector<ObservedSlot> observed_list(std::span<const std::int8_t> observed) {
  std::vector<ObservedSlot> out;
  for (std::size_t j = 0; j < observed.size(); ++j)
    if (observed[j] >= 0) out.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(observed[j])});
  return out;
}

double eval_target(const Decoder& dec, LabelIndex y, const std::vector<ObservedSlot>& obs,
                   std::span<const double> z, std::span<double> grad) {
  double v = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    v -= 0.5 * z[i] * z[i];
    grad[i] = -z[i];
  }
  if (obs.empty()) return v;
  Decoder::Tape tape;
  dec.forward(z, y, tape);
  std::vector<double> g(tape.output.size(), 0.0);
  for (const auto& o : obs) {
    const double l = tape.output[o.slot];
    v += log_bernoulli_logit(o.value, l);
    g[o.slot] = static_cast<double>(o.value) - sigmoid(l);
  }
  dec.backward(tape, g, grad);
  return v;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw std::invalid_argument("step size must be positive");
  if (chains == 0) throw std::invalid_argument("need at least one chain");
  if (n_samples < chains) throw std::invalid_argument("need at least one retained sample per chain");
  if (thinning == 0) throw std::invalid_argument("thinning must be at least 1");
  if (!(divergence_bound > 0.0)) throw std::invalid_argument("divergence bound must be positive");
}

std::size_t SamplerConfig::samples_for_chain(std::size_t c) const {
  return n_samples / chains + (c < n_samples % chains ? 1 : 0);
}

ChainSamples run_langevin(const LogDensityFn& target, std::size_t dim, const SamplerConfig& cfg,
                          const std::vector<std::vector<double>>* init, bool parallel_chains) {
  cfg.validate();
  if (dim == 0) throw std::invalid_argument("latent dimension must be positive");
  if (init && init->size() != cfg.chains) throw std::invalid_argument("warm start needs one state per chain");
  if (init)
    for (const auto& s : *init)
      if (s.size() != dim) throw std::invalid_argument("warm start state has the wrong dimension");
  ChainSamples out;
  out.dim = dim;
  out.samples.resize(cfg.n_samples * dim);
  out.final_states.resize(cfg.chains);
  std::vector<std::size_t> offset(cfg.chains + 1, 0);
  for (std::size_t c = 0; c < cfg.chains; ++c) offset[c + 1] = offset[c] + cfg.samples_for_chain(c);

  std::atomic<bool> diverged{false};
  const double noise = std::sqrt(2.0 * cfg.step_size);
  const auto n_chains = static_cast<std::ptrdiff_t>(cfg.chains);
#pragma omp parallel for schedule(static) if (parallel_chains)
  for (std::ptrdiff_t c = 0; c < n_chains; ++c) {
    Gaussian gauss(rng::splitmix64(cfg.seed ^ static_cast<std::uint64_t>(c)));
    std::vector<double> z(dim, 0.0), grad(dim);
    if (init) z = (*init)[c];
    const std::size_t keep = cfg.samples_for_chain(c);
    const std::size_t total = cfg.burn_in + keep * cfg.thinning;
    std::size_t kept = 0;
    for (std::size_t t = 1; t <= total && !diverged; ++t) {
      target(z, grad);
      for (std::size_t i = 0; i < dim; ++i) {
        z[i] += cfg.step_size * grad[i] + noise * gauss();
        if (!std::isfinite(z[i]) || std::abs(z[i]) > cfg.divergence_bound) diverged = true;
      }
      if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0) {
        std::copy(z.begin(), z.end(), out.samples.begin() + static_cast<std::ptrdiff_t>((offset[c] + kept) * dim));
        ++kept;
      }
    }
    out.final_states[c] = z;
  }
  if (diverged) throw SamplerDivergence("Langevin chain left the bounded region; reduce the step size");
  return out;
}

LogTarget log_target(const LatentGaussianModel& model, const QuerySet& qset, std::span<const double> z,
                     LabelIndex y, const History& history) {
  if (z.size() != model.latent_dim()) throw std::invalid_argument("latent vector size mismatch");
  model.check_compatible(qset);
  const auto obs = observed_list(observed_primitives(qset, history));
  LogTarget t;
  t.gradient.resize(z.size());
  t.value = eval_target(model.decoder(), y, obs, z, t.gradient);
  return t;
}

LogDensityFn make_log_target(const LatentGaussianModel& model, LabelIndex y,
                             std::span<const std::int8_t> observed) {
  const Decoder* dec = &model.decoder();
  return [dec, y, obs = observed_list(observed)](std::span<const double> z, std::span<double> grad) {
    return eval_target(*dec, y, obs, z, grad);
  };
}

ChainSamples ula_sample(const LatentGaussianModel& model, const QuerySet& qset, LabelIndex y,
                        const History& history, const SamplerConfig& cfg,
                        const std::vector<std::vector<double>>* init) {
  model.check_compatible(qset);
  const auto observed = observed_primitives(qset, history);
  return run_langevin(make_log_target(model, y, observed), model.latent_dim(), cfg, init);
}

}  // namespace ip
