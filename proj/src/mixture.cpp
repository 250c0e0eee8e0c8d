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

#include "ip/models.hpp"

namespace ip {

namespace {

std::vector<double> softmax(std::span<const double> lw) {
  const double m = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(m)) throw DegenerateHistory("history has zero probability under the mixture");
  std::vector<double> w(lw.size());
  double s = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) s += (w[i] = std::exp(lw[i] - m));
  for (auto& v : w) v /= s;
  return w;
}

Posterior label_marginal(std::span<const double> comp_weights, std::span<const LabelIndex> comp_label,
                         std::size_t label_count) {
  std::vector<double> py(label_count, 0.0);
  for (std::size_t c = 0; c < comp_weights.size(); ++c) py[comp_label[c]] += comp_weights[c];
  return Posterior::from_weights(std::move(py));
}

class MixtureState final : public InferenceState {
 public:
  MixtureState(const BernoulliMixtureModel& model, const QuerySet& qset, const InferenceOptions& opts)
      : InferenceState(qset, opts, model.prior()), model_(model) {
    std::vector<std::int8_t> none(model.slots(), -1);
    log_w_ = model.component_log_weights(none);
    refresh();
  }

  JointTable joint(QueryId q) const override {
    return expand_free_joint(qset_, q, observed_, kernels::free_slot_joint(view(), free_slots(q)));
  }

  std::vector<double> selection_scores(std::span<const QueryId> candidates) const override {
    if (opts_.mode == ExecutionMode::reference) return score(candidates);
    kernels::FreeSlotLists lists;
    for (auto q : candidates) lists.push_back(free_slots(q));
    std::vector<double> out(candidates.size(), 0.0);
    kernels::score_screened(view(), lists, out, opts_.prune, opts_.mode == ExecutionMode::parallel);
    return out;
  }

  std::vector<double> score(std::span<const QueryId> candidates) const override {
    kernels::FreeSlotLists lists;
    lists.reserve(candidates.size());
    for (auto q : candidates) lists.push_back(free_slots(q));
    std::vector<double> out(candidates.size(), 0.0);
    const auto v = view();
    switch (opts_.mode) {
      case ExecutionMode::reference:
        kernels::score_reference(v, lists, out);
        break;
      case ExecutionMode::serial:
        kernels::score_serial(v, lists, out, opts_.prune);
        break;
      case ExecutionMode::parallel:
        kernels::score_parallel(v, lists, out, opts_.prune);
        break;
    }
    return out;
  }

 protected:
  void do_condition(QueryId q, const Answer& a) override {
    auto sl = qset_.slots(q);
    const std::size_t C = log_w_.size();
    for (std::size_t s = 0; s < sl.size(); ++s) {
      const auto j = sl[s];
      if (observed_[j] >= 0) continue;
      for (std::size_t c = 0; c < C; ++c) {
        const double th = model_.theta()[c * model_.slots() + j];
        log_w_[c] += a[s] ? std::log(th) : std::log1p(-th);
      }
    }
    refresh();
  }

 private:
  void refresh() {
    weights_ = softmax(log_w_);
    posterior_ = label_marginal(weights_, model_.component_labels(), model_.labels().size());
  }

  kernels::ComponentView view() const {
    return {model_.theta(), model_.slots(), model_.component_labels(), weights_, model_.labels().size()};
  }

  const BernoulliMixtureModel& model_;
  std::vector<double> log_w_;
  std::vector<double> weights_;
};

}  // namespace

BernoulliMixtureModel::BernoulliMixtureModel(LabelSpace labels, std::size_t components, std::size_t slots,
                                             std::vector<double> prior, std::vector<double> weights,
                                             std::vector<double> theta, double theta_min)
    : labels_(std::move(labels)),
      components_(components),
      slots_(slots),
      theta_min_(theta_min),
      prior_(std::move(prior)),
      weights_(std::move(weights)),
      theta_(std::move(theta)) {
  const std::size_t L = labels_.size();
  if (components_ == 0 || slots_ == 0) throw DataError("mixture needs at least one component and one slot");
  if (prior_.size() != L) throw DataError("mixture prior size does not match the labels");
  if (weights_.size() != L * components_) throw DataError("mixture weight count mismatch");
  if (theta_.size() != L * components_ * slots_) throw DataError("mixture theta count mismatch");
  if (!(theta_min_ > 0.0 && theta_min_ < 0.5)) throw DataError("theta_min must lie in (0, 0.5)");
  [[maybe_unused]] const Posterior validated{prior_};
  for (std::size_t y = 0; y < L; ++y) {
    double s = 0.0;
    for (std::size_t k = 0; k < components_; ++k) {
      const double w = weights_[y * components_ + k];
      if (!(w >= 0.0)) throw DataError("mixture weights must be nonnegative");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-9) throw DataError("mixture weights of a class must sum to one");
  }
  for (double t : theta_)
    if (!(t > 0.0 && t < 1.0)) throw DataError("theta must lie strictly inside (0, 1)");
  log_on_.resize(theta_.size());
  log_off_.resize(theta_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    log_on_[i] = std::log(theta_[i]);
    log_off_[i] = std::log1p(-theta_[i]);
  }
  comp_label_.resize(L * components_);
  for (std::size_t c = 0; c < comp_label_.size(); ++c) comp_label_[c] = static_cast<LabelIndex>(c / components_);
}

void BernoulliMixtureModel::check_compatible(const QuerySet& qset) const {
  if (qset.primitive_count() != slots_)
    throw std::invalid_argument("query set has " + std::to_string(qset.primitive_count()) +
                                " primitives but the mixture models " + std::to_string(slots_));
  for (const auto& q : qset.queries())
    if (q.answer_cardinality != 2) throw std::invalid_argument("mixture model needs binary answers");
}

std::unique_ptr<InferenceState> BernoulliMixtureModel::start(const QuerySet& qset,
                                                             const InferenceOptions& opts) const {
  check_compatible(qset);
  return std::make_unique<MixtureState>(*this, qset, opts);
}

std::vector<double> BernoulliMixtureModel::component_log_weights(std::span<const std::int8_t> observed) const {
  if (observed.size() != slots_) throw std::invalid_argument("observation vector size mismatch");
  const std::size_t C = comp_label_.size();
  std::vector<double> lw(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double pw = prior_[comp_label_[c]] * weights_[c];
    double v = pw > 0.0 ? std::log(pw) : -std::numeric_limits<double>::infinity();
    const double* on = log_on_.data() + c * slots_;
    const double* off = log_off_.data() + c * slots_;
    for (std::size_t j = 0; j < slots_; ++j)
      if (observed[j] >= 0) v += observed[j] ? on[j] : off[j];
    lw[c] = v;
  }
  return lw;
}

Posterior BernoulliMixtureModel::full_posterior(const QuerySet& qset, const Instance& instance,
                                                const InferenceOptions&) const {
  check_compatible(qset);
  auto p = qset.primitives(instance);
  std::vector<std::int8_t> observed(p.begin(), p.end());
  auto w = softmax(component_log_weights(observed));
  return label_marginal(w, comp_label_, labels_.size());
}

}  // namespace ip
