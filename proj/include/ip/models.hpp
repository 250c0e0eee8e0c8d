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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ip/core.hpp"
#include "ip/data.hpp"
#include "ip/decoder.hpp"
#include "ip/kernels.hpp"
#include "ip/querysets.hpp"
#include "ip/sampler.hpp"

namespace ip {

enum class ExecutionMode {
  reference,  // brute-force enumeration, serial
  serial,     // optimized kernels, one thread
  parallel,   // optimized kernels, OpenMP
};

struct InferenceOptions {
  SamplerConfig sampler;
  ExecutionMode mode = ExecutionMode::parallel;
  kernels::PruneConfig prune;
};

/// Conditioning state for one input: the current history, p(Y | history), and
/// whatever the model caches to extend it by one query cheaply. A state keeps
/// references to its model and query set; both must outlive it.
class InferenceState {
 public:
  virtual ~InferenceState() = default;

  const History& history() const { return history_; }
  const Posterior& posterior() const { return posterior_; }
  /// Value of every primitive fixed by the history, -1 when unobserved.
  std::span<const std::int8_t> observed() const { return observed_; }

  /// p(answer, y | history) over the full answer alphabet of q. Answers that
  /// contradict already observed primitives get probability zero.
  virtual JointTable joint(QueryId q) const = 0;

  /// I(q(X); Y | history) in bits for each candidate.
  virtual std::vector<double> score(std::span<const QueryId> candidates) const;

  /// Scores that pick the same best candidate as score() under any tie
  /// tolerance below opts.prune.screen_margin and share its maximum. Entries
  /// that cannot win may hold an upper bound instead of the exact value.
  virtual std::vector<double> selection_scores(std::span<const QueryId> candidates) const { return score(candidates); }

  /// Sequential filtering: p(y | S, q = a) proportional to p(y | S) p(a | y, S).
  void condition(QueryId q, const Answer& a);

 protected:
  InferenceState(const QuerySet& qset, const InferenceOptions& opts, Posterior prior);
  virtual void do_condition(QueryId q, const Answer& a) = 0;

  /// Free (unobserved) slots of q.
  std::vector<std::uint32_t> free_slots(QueryId q) const;

  const QuerySet& qset_;
  InferenceOptions opts_;
  History history_;
  Posterior posterior_;
  std::vector<std::int8_t> observed_;
};

class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  virtual const LabelSpace& labels() const = 0;
  virtual Posterior prior() const = 0;
  /// Throws std::invalid_argument when the query set does not fit the model.
  virtual void check_compatible(const QuerySet& qset) const = 0;
  virtual std::unique_ptr<InferenceState> start(const QuerySet& qset, const InferenceOptions& opts) const = 0;

  /// p(Y | history). The default replays the history through a fresh state.
  virtual Posterior posterior(const QuerySet& qset, const History& history, const InferenceOptions& opts) const;
  /// p(q(X), Y | history); q must not be in the history.
  virtual JointTable estimate_joint(const QuerySet& qset, QueryId q, const History& history,
                                    const InferenceOptions& opts) const;
  /// p(Y | every query answered on the instance).
  virtual Posterior full_posterior(const QuerySet& qset, const Instance& instance,
                                   const InferenceOptions& opts) const;
};

Posterior posterior(const GenerativeModel& model, const QuerySet& qset, const History& history,
                    const InferenceOptions& opts = {});
JointTable estimate_joint(const GenerativeModel& model, const QuerySet& qset, QueryId q, const History& history,
                          const InferenceOptions& opts = {});

// ---------------------------------------------------------------------------

/// Empirical joint over a finite instance list with Laplace smoothing alpha.
///
/// For the consistent set C of a history S:
///   p(y | S)     = (n(C, y) + alpha) / (|C| + alpha |Y|)
///   p(a | y, S)  = (n(C and a, y) + alpha) / (n(C, y) + alpha |A_S|)
/// where A_S are the answers of q that agree with the observed primitives.
class TabularJointModel final : public GenerativeModel {
 public:
  TabularJointModel(const Dataset& data, const QuerySet& qset, double alpha = 1e-3);

  const LabelSpace& labels() const override { return labels_; }
  Posterior prior() const override;
  void check_compatible(const QuerySet& qset) const override;
  std::unique_ptr<InferenceState> start(const QuerySet& qset, const InferenceOptions& opts) const override;
  Posterior posterior(const QuerySet& qset, const History& history, const InferenceOptions& opts) const override;
  JointTable estimate_joint(const QuerySet& qset, QueryId q, const History& history,
                            const InferenceOptions& opts) const override;
  Posterior full_posterior(const QuerySet& qset, const Instance& instance,
                           const InferenceOptions& opts) const override;

  double alpha() const { return alpha_; }
  std::size_t size() const { return labels_of_.size(); }
  std::span<const std::uint8_t> primitives(std::size_t i) const;
  LabelIndex label(std::size_t i) const { return labels_of_[i]; }

  /// Indices of instances agreeing with every primitive fixed in `observed`.
  std::vector<std::size_t> consistent(std::span<const std::int8_t> observed) const;
  std::vector<std::size_t> consistent(const History& history) const;

  /// Smoothed label posterior over an instance subset.
  Posterior posterior_over(std::span<const std::size_t> members) const;
  /// Joint table of q over an instance subset with `label_posterior` as p(y | S).
  JointTable joint_over(std::span<const std::size_t> members, const Posterior& label_posterior, QueryId q,
                        std::span<const std::int8_t> observed) const;

 private:
  LabelSpace labels_;
  QueryKind kind_;
  std::size_t query_count_;
  std::size_t primitive_count_;
  double alpha_;
  std::shared_ptr<const QuerySet> qset_;
  std::vector<std::uint8_t> prims_;  // n x primitive_count
  std::vector<LabelIndex> labels_of_;
};

// ---------------------------------------------------------------------------

/// Per-class mixture of K product-Bernoulli components over the primitives.
/// Component (y, k) sits at flat index y * K + k.
class BernoulliMixtureModel final : public GenerativeModel {
 public:
  BernoulliMixtureModel(LabelSpace labels, std::size_t components, std::size_t slots, std::vector<double> prior,
                        std::vector<double> weights, std::vector<double> theta, double theta_min = 1e-4);

  const LabelSpace& labels() const override { return labels_; }
  Posterior prior() const override { return Posterior(prior_); }
  void check_compatible(const QuerySet& qset) const override;
  std::unique_ptr<InferenceState> start(const QuerySet& qset, const InferenceOptions& opts) const override;
  Posterior full_posterior(const QuerySet& qset, const Instance& instance,
                           const InferenceOptions& opts) const override;

  std::size_t components() const { return components_; }
  std::size_t slots() const { return slots_; }
  double theta_min() const { return theta_min_; }
  std::span<const double> prior_probs() const { return prior_; }
  std::span<const double> weights() const { return weights_; }  // L x K
  std::span<const double> theta() const { return theta_; }      // (L K) x slots
  double theta(LabelIndex y, std::size_t k, std::size_t j) const {
    return theta_[(y * components_ + k) * slots_ + j];
  }
  std::span<const LabelIndex> component_labels() const { return comp_label_; }

  /// log p(y, k) + log p(primitives | y, k) over the observed primitives.
  std::vector<double> component_log_weights(std::span<const std::int8_t> observed) const;

  bool operator==(const BernoulliMixtureModel& o) const {
    return labels_ == o.labels_ && components_ == o.components_ && slots_ == o.slots_ &&
           theta_min_ == o.theta_min_ && prior_ == o.prior_ && weights_ == o.weights_ && theta_ == o.theta_;
  }

 private:
  LabelSpace labels_;
  std::size_t components_;
  std::size_t slots_;
  double theta_min_;
  std::vector<double> prior_;
  std::vector<double> weights_;
  std::vector<double> theta_;
  std::vector<double> log_on_;
  std::vector<double> log_off_;
  std::vector<LabelIndex> comp_label_;
};

struct EmOptions {
  std::size_t components = 8;
  std::size_t max_iters = 100;
  double tol = 1e-6;  // relative log-likelihood improvement
  std::uint64_t seed = 0;
  double theta_min = 1e-4;
  ExecutionMode mode = ExecutionMode::parallel;
};

struct EmResult {
  BernoulliMixtureModel model;
  /// Log-likelihood after every iteration, per class.
  std::vector<std::vector<double>> log_likelihood;
};

/// Per-class EM. Initialization is k-means++ seeding under Hamming distance,
/// drawn from the stream "em/<class>" of the seed.
EmResult em_fit(const Dataset& data, const QuerySet& qset, const EmOptions& opts);

/// Bernoulli mixture fit of one class: rows is n x d of {0,1}.
struct ClassMixture {
  std::vector<double> weights;  // K
  std::vector<double> theta;    // K x d
  std::vector<double> log_likelihood;
};
ClassMixture em_fit_class(std::span<const std::uint8_t> rows, std::size_t d, const EmOptions& opts,
                          std::uint64_t stream_seed);

// ---------------------------------------------------------------------------

/// Per-label Monte-Carlo samples of z drawn from p(z | y, history).
struct ZSampleSet {
  std::size_t latent_dim = 0;
  std::vector<std::vector<double>> per_label;  // each n x latent_dim
  std::size_t sample_count() const;
};

/// Continuous-latent model: z ~ N(0, I), primitive j ~ Bern(sigmoid(psi_j(z, y))).
class LatentGaussianModel final : public GenerativeModel {
 public:
  LatentGaussianModel(LabelSpace labels, Decoder decoder, std::vector<double> prior);

  const LabelSpace& labels() const override { return labels_; }
  Posterior prior() const override { return Posterior(prior_); }
  void check_compatible(const QuerySet& qset) const override;
  std::unique_ptr<InferenceState> start(const QuerySet& qset, const InferenceOptions& opts) const override;
  /// Importance sampling from the prior over z with opts.sampler.n_samples draws.
  Posterior full_posterior(const QuerySet& qset, const Instance& instance,
                           const InferenceOptions& opts) const override;

  const Decoder& decoder() const { return decoder_; }
  std::size_t latent_dim() const { return decoder_.latent_dim(); }

  bool operator==(const LatentGaussianModel& o) const {
    return labels_ == o.labels_ && decoder_ == o.decoder_ && prior_ == o.prior_;
  }

 private:
  LabelSpace labels_;
  Decoder decoder_;
  std::vector<double> prior_;
};

/// p(a, y | S) = p(y | S) * mean over z-samples of prod_{free j} Bern(a_j; sigmoid(psi_j(z, y))).
JointTable estimate_joint(const LatentGaussianModel& model, const QuerySet& qset, QueryId q,
                          const History& history, const Posterior& label_posterior, const ZSampleSet& samples);

/// Spreads a joint over the free slots of q (first free slot most significant)
/// onto the full answer alphabet; answers contradicting `observed` get zero.
JointTable expand_free_joint(const QuerySet& qset, QueryId q, std::span<const std::int8_t> observed,
                             const JointTable& free_joint);

/// probability of a patch answer given per-pixel on-probabilities: the product
/// over pixels not yet observed; observed pixels contribute 1 when the answer
/// agrees with them and make the whole probability 0 otherwise.
double patch_answer_prob(std::span<const double> pixel_on_prob, std::span<const std::uint32_t> pixels,
                         const Answer& answer, std::span<const std::int8_t> observed);

}  // namespace ip
