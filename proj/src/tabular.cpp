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

#include <stdexcept>

#include "ip/models.hpp"

namespace ip {

namespace {

bool same_queryset(const QuerySet& a, const QuerySet& b) {
  if (a.kind() != b.kind() || a.size() != b.size() || a.primitive_count() != b.primitive_count()) return false;
  if (a.kind() == QueryKind::patch) return a.geometry() == b.geometry();
  return a.names() == b.names();
}

class TabularState final : public InferenceState {
 public:
  TabularState(const TabularJointModel& model, const QuerySet& qset, const InferenceOptions& opts)
      : InferenceState(qset, opts, model.prior()), model_(model) {
    members_.resize(model.size());
    for (std::size_t i = 0; i < members_.size(); ++i) members_[i] = i;
  }

  JointTable joint(QueryId q) const override { return model_.joint_over(members_, posterior_, q, observed_); }

 protected:
  void do_condition(QueryId q, const Answer& a) override {
    const auto& query = qset_.query(q);
    const JointTable table = joint(q);
    const auto row = a.index(query.answer_cardinality);
    std::vector<double> w(posterior_.size());
    for (std::size_t y = 0; y < w.size(); ++y) w[y] = table.at(row, y);
    posterior_ = Posterior::from_weights(std::move(w));
    std::vector<std::size_t> next;
    auto sl = qset_.slots(q);
    for (auto i : members_) {
      auto prim = model_.primitives(i);
      bool ok = true;
      for (std::size_t s = 0; s < sl.size() && ok; ++s) ok = prim[sl[s]] == a[s];
      if (ok) next.push_back(i);
    }
    members_ = std::move(next);
  }

 private:
  const TabularJointModel& model_;
  std::vector<std::size_t> members_;
};

}  // namespace

TabularJointModel::TabularJointModel(const Dataset& data, const QuerySet& qset, double alpha)
    : labels_(data.labels),
      kind_(qset.kind()),
      query_count_(qset.size()),
      primitive_count_(qset.primitive_count()),
      alpha_(alpha),
      qset_(std::make_shared<const QuerySet>(qset)) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("smoothing must be nonnegative");
  data.validate();
  prims_.reserve(data.size() * primitive_count_);
  for (const auto& item : data.items) {
    auto p = qset.primitives(item.instance);
    prims_.insert(prims_.end(), p.begin(), p.end());
    labels_of_.push_back(item.label);
  }
}

Posterior TabularJointModel::prior() const {
  std::vector<std::size_t> all(size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return posterior_over(all);
}

void TabularJointModel::check_compatible(const QuerySet& qset) const {
  if (!same_queryset(qset, *qset_)) throw std::invalid_argument("query set differs from the one the table was built on");
}

std::unique_ptr<InferenceState> TabularJointModel::start(const QuerySet& qset, const InferenceOptions& opts) const {
  check_compatible(qset);
  return std::make_unique<TabularState>(*this, qset, opts);
}

std::span<const std::uint8_t> TabularJointModel::primitives(std::size_t i) const {
  return {prims_.data() + i * primitive_count_, primitive_count_};
}

std::vector<std::size_t> TabularJointModel::consistent(std::span<const std::int8_t> observed) const {
  std::vector<std::uint32_t> fixed;
  for (std::size_t j = 0; j < observed.size(); ++j)
    if (observed[j] >= 0) fixed.push_back(static_cast<std::uint32_t>(j));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = primitives(i);
    bool ok = true;
    for (auto j : fixed)
      if (p[j] != observed[j]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> TabularJointModel::consistent(const History& history) const {
  return consistent(observed_primitives(*qset_, history));
}

Posterior TabularJointModel::posterior_over(std::span<const std::size_t> members) const {
  if (members.empty() && alpha_ == 0.0) throw DegenerateHistory("no instance is consistent with the history");
  std::vector<double> w(labels_.size(), alpha_);
  for (auto i : members) w[labels_of_[i]] += 1.0;
  return Posterior::from_weights(std::move(w));
}

JointTable TabularJointModel::joint_over(std::span<const std::size_t> members, const Posterior& label_posterior,
                                         QueryId q, std::span<const std::int8_t> observed) const {
  const auto& query = qset_->query(q);
  auto sl = qset_->slots(q);
  const std::uint64_t n_answers = query.alphabet_size();
  const std::size_t L = labels_.size();
  const std::uint32_t card = query.answer_cardinality;

  std::vector<std::uint8_t> allowed(n_answers, 1);
  std::uint64_t n_allowed = 0;
  for (std::uint64_t a = 0; a < n_answers; ++a) {
    auto ans = Answer::from_index(a, query.arity, card);
    for (std::size_t s = 0; s < sl.size(); ++s)
      if (observed[sl[s]] >= 0 && observed[sl[s]] != ans[s]) {
        allowed[a] = 0;
        break;
      }
    n_allowed += allowed[a];
  }

  JointTable counts(n_answers, L);
  std::vector<double> per_label(L, 0.0);
  for (auto i : members) {
    auto p = primitives(i);
    std::uint64_t a = 0;
    for (auto j : sl) a = a * card + p[j];
    counts.at(a, labels_of_[i]) += 1.0;
    per_label[labels_of_[i]] += 1.0;
  }

  JointTable joint(n_answers, L);
  for (std::size_t y = 0; y < L; ++y) {
    const double denom = per_label[y] + alpha_ * static_cast<double>(n_allowed);
    for (std::uint64_t a = 0; a < n_answers; ++a) {
      if (!allowed[a]) continue;
      const double cond = denom > 0.0 ? (counts.at(a, y) + alpha_) / denom : 1.0 / static_cast<double>(n_allowed);
      joint.at(a, y) = label_posterior[y] * cond;
    }
  }
  return joint;
}

Posterior TabularJointModel::posterior(const QuerySet& qset, const History& history, const InferenceOptions&) const {
  check_compatible(qset);
  return posterior_over(consistent(history));
}

JointTable TabularJointModel::estimate_joint(const QuerySet& qset, QueryId q, const History& history,
                                             const InferenceOptions&) const {
  check_compatible(qset);
  if (history.contains(q)) throw std::invalid_argument("query " + std::to_string(q) + " already asked");
  auto observed = observed_primitives(qset, history);
  auto members = consistent(observed);
  return joint_over(members, posterior_over(members), q, observed);
}

Posterior TabularJointModel::full_posterior(const QuerySet& qset, const Instance& instance,
                                            const InferenceOptions&) const {
  check_compatible(qset);
  auto p = qset.primitives(instance);
  std::vector<std::int8_t> observed(p.begin(), p.end());
  return posterior_over(consistent(observed));
}

}  // namespace ip
