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

#include "ip/models.hpp"

#include <stdexcept>

#include "ip/information.hpp"

namespace ip {

InferenceState::InferenceState(const QuerySet& qset, const InferenceOptions& opts, Posterior prior)
    : qset_(qset), opts_(opts), posterior_(std::move(prior)), observed_(qset.primitive_count(), -1) {}

std::vector<std::uint32_t> InferenceState::free_slots(QueryId q) const {
  std::vector<std::uint32_t> out;
  for (auto j : qset_.slots(q))
    if (observed_[j] < 0) out.push_back(j);
  return out;
}

std::vector<double> InferenceState::score(std::span<const QueryId> candidates) const {
  std::vector<double> out(candidates.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  if (opts_.mode == ExecutionMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = mutual_information(joint(candidates[i]));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = mutual_information(joint(candidates[i]));
  }
  return out;
}

void InferenceState::condition(QueryId q, const Answer& a) {
  const auto& query = qset_.query(q);
  if (history_.contains(q)) throw std::invalid_argument("query " + std::to_string(q) + " already asked");
  if (a.size() != query.arity) throw std::invalid_argument("answer arity does not match the query");
  auto sl = qset_.slots(q);
  for (std::size_t i = 0; i < sl.size(); ++i) {
    if (a[i] >= query.answer_cardinality) throw std::invalid_argument("answer symbol out of range");
    if (observed_[sl[i]] >= 0 && observed_[sl[i]] != a[i])
      throw DegenerateHistory("answer contradicts an observed primitive");
  }
  do_condition(q, a);
  for (std::size_t i = 0; i < sl.size(); ++i) observed_[sl[i]] = static_cast<std::int8_t>(a[i]);
  history_ = history_.extended(q, a);
}

Posterior GenerativeModel::posterior(const QuerySet& qset, const History& history,
                                     const InferenceOptions& opts) const {
  auto state = start(qset, opts);
  for (const auto& s : history.steps()) state->condition(s.query, s.answer);
  return state->posterior();
}

JointTable GenerativeModel::estimate_joint(const QuerySet& qset, QueryId q, const History& history,
                                           const InferenceOptions& opts) const {
  if (history.contains(q)) throw std::invalid_argument("query " + std::to_string(q) + " already asked");
  auto state = start(qset, opts);
  for (const auto& s : history.steps()) state->condition(s.query, s.answer);
  return state->joint(q);
}

Posterior GenerativeModel::full_posterior(const QuerySet& qset, const Instance& instance,
                                          const InferenceOptions& opts) const {
  auto state = start(qset, opts);
  for (QueryId q = 0; q < qset.size(); ++q) {
    auto a = qset.answer(instance, q);
    bool fresh = false;
    auto sl = qset.slots(q);
    for (auto j : sl) fresh = fresh || state->observed()[j] < 0;
    if (fresh) state->condition(q, a);
  }
  return state->posterior();
}

Posterior posterior(const GenerativeModel& model, const QuerySet& qset, const History& history,
                    const InferenceOptions& opts) {
  return model.posterior(qset, history, opts);
}

JointTable estimate_joint(const GenerativeModel& model, const QuerySet& qset, QueryId q, const History& history,
                          const InferenceOptions& opts) {
  return model.estimate_joint(qset, q, history, opts);
}

std::size_t ZSampleSet::sample_count() const {
  if (per_label.empty() || latent_dim == 0) return 0;
  return per_label.front().size() / latent_dim;
}

JointTable expand_free_joint(const QuerySet& qset, QueryId q, std::span<const std::int8_t> observed,
                             const JointTable& free_joint) {
  const auto& query = qset.query(q);
  auto sl = qset.slots(q);
  const std::uint32_t card = query.answer_cardinality;
  JointTable out(query.alphabet_size(), free_joint.labels());
  for (std::uint64_t a = 0; a < query.alphabet_size(); ++a) {
    auto ans = Answer::from_index(a, query.arity, card);
    std::size_t row = 0;
    bool ok = true;
    for (std::size_t s = 0; s < sl.size() && ok; ++s) {
      const auto o = observed[sl[s]];
      if (o < 0)
        row = row * card + ans[s];
      else
        ok = o == ans[s];
    }
    if (!ok) continue;
    for (std::size_t y = 0; y < out.labels(); ++y) out.at(a, y) = free_joint.at(row, y);
  }
  return out;
}

double patch_answer_prob(std::span<const double> pixel_on_prob, std::span<const std::uint32_t> pixels,
                         const Answer& answer, std::span<const std::int8_t> observed) {
  if (answer.size() != pixels.size()) throw std::invalid_argument("answer arity does not match the patch");
  double p = 1.0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const auto j = pixels[i];
    if (observed[j] >= 0) {
      if (observed[j] != answer[i]) return 0.0;
      continue;
    }
    p *= answer[i] ? pixel_on_prob[j] : 1.0 - pixel_on_prob[j];
  }
  return p;
}

}  // namespace ip
