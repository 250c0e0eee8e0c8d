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
#include <string>

#include "ip/models.hpp"
#include "ip/rng.hpp"

namespace ip {

namespace {

// Monte-Carlo components (y, sample) with weight p(y | S) / N_y and per-slot
// on-probabilities decoded from the sample.
struct SampleComponents {
  std::vector<double> theta;
  std::vector<LabelIndex> label;
  std::vector<double> weight;
  std::size_t stride = 0;
  std::size_t label_count = 0;

  kernels::ComponentView view() const { return {theta, stride, label, weight, label_count}; }
};

SampleComponents build_components(const LatentGaussianModel& model, const Posterior& label_posterior,
                                  const std::vector<std::vector<double>>& per_label) {
  const Decoder& dec = model.decoder();
  const std::size_t dim = model.latent_dim(), L = model.labels().size();
  if (per_label.size() != L) throw std::invalid_argument("need one sample block per label");
  SampleComponents sc;
  sc.stride = dec.output_slots();
  sc.label_count = L;
  for (std::size_t y = 0; y < L; ++y) {
    const auto& block = per_label[y];
    if (block.empty() || block.size() % dim != 0) throw std::invalid_argument("sample block has the wrong size");
    const std::size_t n = block.size() / dim;
    const double w = label_posterior[y] / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto logits = dec.logits(std::span<const double>(block.data() + s * dim, dim), static_cast<LabelIndex>(y));
      for (double l : logits) sc.theta.push_back(sigmoid(l));
      sc.label.push_back(static_cast<LabelIndex>(y));
      sc.weight.push_back(w);
    }
  }
  return sc;
}

// p(free part of a | y, S) averaged over the samples of each label.
std::vector<double> answer_likelihood(const SampleComponents& sc, std::span<const std::uint32_t> free_slots,
                                      const Answer& a, std::span<const std::uint32_t> slots) {
  std::vector<double> lik(sc.label_count, 0.0), mass(sc.label_count, 0.0);
  for (std::size_t c = 0; c < sc.weight.size(); ++c) {
    double p = 1.0;
    const double* th = sc.theta.data() + c * sc.stride;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (std::find(free_slots.begin(), free_slots.end(), slots[s]) == free_slots.end()) continue;
      p *= a[s] ? th[slots[s]] : 1.0 - th[slots[s]];
    }
    lik[sc.label[c]] += sc.weight[c] * p;
    mass[sc.label[c]] += sc.weight[c];
  }
  for (std::size_t y = 0; y < lik.size(); ++y) lik[y] = mass[y] > 0.0 ? lik[y] / mass[y] : 0.0;
  return lik;
}

class LatentState final : public InferenceState {
 public:
  LatentState(const LatentGaussianModel& model, const QuerySet& qset, const InferenceOptions& opts)
      : InferenceState(qset, opts, model.prior()), model_(model) {
    opts_.sampler.validate();
    resample(observed_, 0);
  }

  JointTable joint(QueryId q) const override {
    return expand_free_joint(qset_, q, observed_, kernels::free_slot_joint(comps_.view(), free_slots(q)));
  }

  std::vector<double> selection_scores(std::span<const QueryId> candidates) const override {
    if (opts_.mode == ExecutionMode::reference) return score(candidates);
    kernels::FreeSlotLists lists;
    for (auto q : candidates) lists.push_back(free_slots(q));
    std::vector<double> out(candidates.size(), 0.0);
    kernels::score_screened(comps_.view(), lists, out, opts_.prune, opts_.mode == ExecutionMode::parallel);
    return out;
  }

  std::vector<double> score(std::span<const QueryId> candidates) const override {
    kernels::FreeSlotLists lists;
    for (auto q : candidates) lists.push_back(free_slots(q));
    std::vector<double> out(candidates.size(), 0.0);
    const auto v = comps_.view();
    switch (opts_.mode) {
      case ExecutionMode::reference: kernels::score_reference(v, lists, out); break;
      case ExecutionMode::serial: kernels::score_serial(v, lists, out, opts_.prune); break;
      case ExecutionMode::parallel: kernels::score_parallel(v, lists, out, opts_.prune); break;
    }
    return out;
  }

 protected:
  void do_condition(QueryId q, const Answer& a) override {
    const auto sl = qset_.slots(q);
    const auto free = free_slots(q);
    const auto lik = answer_likelihood(comps_, free, a, sl);
    std::vector<double> w(lik.size());
    for (std::size_t y = 0; y < w.size(); ++y) w[y] = posterior_[y] * lik[y];
    posterior_ = Posterior::from_weights(std::move(w));
    std::vector<std::int8_t> next(observed_.begin(), observed_.end());
    for (std::size_t s = 0; s < sl.size(); ++s) next[sl[s]] = static_cast<std::int8_t>(a[s]);
    resample(next, history_.size() + 1);
  }

 private:
  void resample(std::span<const std::int8_t> observed, std::size_t step) {
    const std::size_t L = model_.labels().size();
    std::vector<std::vector<double>> per_label(L);
    std::vector<ChainSamples> next(L);
    for (std::size_t y = 0; y < L; ++y) {
      SamplerConfig cfg = opts_.sampler;
      cfg.seed = rng::derive(opts_.sampler.seed, "ula/" + std::to_string(y) + "/" + std::to_string(step));
      const auto* init = chains_.empty() ? nullptr : &chains_[y].final_states;
      next[y] = run_langevin(make_log_target(model_, static_cast<LabelIndex>(y), observed), model_.latent_dim(),
                             cfg, init, opts_.mode == ExecutionMode::parallel);
      per_label[y] = next[y].samples;
    }
    chains_ = std::move(next);
    comps_ = build_components(model_, posterior_, per_label);
  }

  const LatentGaussianModel& model_;
  std::vector<ChainSamples> chains_;
  SampleComponents comps_;
};

}  // namespace

LatentGaussianModel::LatentGaussianModel(LabelSpace labels, Decoder decoder, std::vector<double> prior)
    : labels_(std::move(labels)), decoder_(std::move(decoder)), prior_(std::move(prior)) {
  if (decoder_.label_count() != labels_.size()) throw DataError("decoder label count does not match the labels");
  if (prior_.size() != labels_.size()) throw DataError("prior size does not match the labels");
  [[maybe_unused]] const Posterior validated{prior_};
}

void LatentGaussianModel::check_compatible(const QuerySet& qset) const {
  if (qset.primitive_count() != decoder_.output_slots())
    throw std::invalid_argument("query set has " + std::to_string(qset.primitive_count()) +
                                " primitives but the decoder emits " + std::to_string(decoder_.output_slots()));
  for (const auto& q : qset.queries())
    if (q.answer_cardinality != 2) throw std::invalid_argument("latent model needs binary answers");
}

std::unique_ptr<InferenceState> LatentGaussianModel::start(const QuerySet& qset,
                                                           const InferenceOptions& opts) const {
  check_compatible(qset);
  return std::make_unique<LatentState>(*this, qset, opts);
}

Posterior LatentGaussianModel::full_posterior(const QuerySet& qset, const Instance& instance,
                                              const InferenceOptions& opts) const {
  check_compatible(qset);
  const auto x = qset.primitives(instance);
  const std::size_t L = labels_.size(), dim = latent_dim(), n = opts.sampler.n_samples;
  if (n == 0) throw std::invalid_argument("importance sampling needs at least one draw");
  std::vector<double> log_w(L);
  for (std::size_t y = 0; y < L; ++y) {
    auto eng = rng::engine(opts.sampler.seed, "is/" + std::to_string(y));
    std::normal_distribution<double> normal;
    std::vector<double> ll(n), z(dim);
    for (std::size_t s = 0; s < n; ++s) {
      for (auto& v : z) v = normal(eng);
      const auto logits = decoder_.logits(z, static_cast<LabelIndex>(y));
      double v = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) v += log_bernoulli_logit(x[j], logits[j]);
      ll[s] = v;
    }
    const double m = *std::max_element(ll.begin(), ll.end());
    double sum = 0.0;
    for (double v : ll) sum += std::exp(v - m);
    log_w[y] = (prior_[y] > 0.0 ? std::log(prior_[y]) : -std::numeric_limits<double>::infinity()) + m +
               std::log(sum / static_cast<double>(n));
  }
  return Posterior::from_log_weights(log_w);
}

JointTable estimate_joint(const LatentGaussianModel& model, const QuerySet& qset, QueryId q,
                          const History& history, const Posterior& label_posterior, const ZSampleSet& samples) {
  model.check_compatible(qset);
  if (history.contains(q)) throw std::invalid_argument("query " + std::to_string(q) + " already asked");
  if (samples.latent_dim != model.latent_dim()) throw std::invalid_argument("sample dimension mismatch");
  const auto observed = observed_primitives(qset, history);
  const auto sc = build_components(model, label_posterior, samples.per_label);
  std::vector<std::uint32_t> free;
  for (auto j : qset.slots(q))
    if (observed[j] < 0) free.push_back(j);
  return expand_free_joint(qset, q, observed, kernels::free_slot_joint(sc.view(), free));
}

}  // namespace ip
