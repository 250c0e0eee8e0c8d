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

#include "ip/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace ip {

LabelSpace::LabelSpace(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw std::invalid_argument("label space needs at least two labels");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate label name: " + n);
  }
}

const std::string& LabelSpace::name(LabelIndex y) const {
  if (y >= names_.size()) throw std::out_of_range("label index out of range");
  return names_[y];
}

LabelIndex LabelSpace::index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DataError("unknown label: " + std::string(name));
  return static_cast<LabelIndex>(it - names_.begin());
}

bool LabelSpace::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::uint64_t Query::alphabet_size() const {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < arity; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / answer_cardinality)
      throw std::overflow_error("answer alphabet too large");
    n *= answer_cardinality;
  }
  return n;
}

std::uint64_t Answer::index(std::uint32_t cardinality) const {
  std::uint64_t idx = 0;
  for (auto v : values_) {
    if (v >= cardinality) throw std::invalid_argument("answer symbol exceeds cardinality");
    idx = idx * cardinality + v;
  }
  return idx;
}

Answer Answer::from_index(std::uint64_t index, std::uint32_t arity, std::uint32_t cardinality) {
  std::vector<std::uint8_t> v(arity);
  for (std::uint32_t i = arity; i-- > 0;) {
    v[i] = static_cast<std::uint8_t>(index % cardinality);
    index /= cardinality;
  }
  if (index != 0) throw std::invalid_argument("answer index out of range");
  return Answer(std::move(v));
}

bool History::contains(QueryId q) const {
  return std::any_of(steps_.begin(), steps_.end(), [q](const Step& s) { return s.query == q; });
}

History History::extended(QueryId q, Answer a) const {
  if (contains(q)) throw std::invalid_argument("query " + std::to_string(q) + " already in history");
  History h = *this;
  h.steps_.push_back(Step{q, std::move(a)});
  return h;
}

bool History::same_pairs(const History& other) const {
  if (size() != other.size()) return false;
  return std::all_of(steps_.begin(), steps_.end(), [&](const Step& s) {
    return std::find(other.steps_.begin(), other.steps_.end(), s) != other.steps_.end();
  });
}

History extend_history(const History& h, QueryId q, Answer a) { return h.extended(q, std::move(a)); }

Posterior::Posterior(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("empty posterior");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("posterior entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("posterior does not sum to one");
}

Posterior Posterior::uniform(std::size_t n) {
  return Posterior(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Posterior Posterior::from_weights(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw DegenerateHistory("all label weights are zero");
  for (double& w : weights) w /= sum;
  return Posterior(std::move(weights));
}

Posterior Posterior::from_log_weights(std::span<const double> log_weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (double l : log_weights) top = std::max(top, l);
  if (!std::isfinite(top)) throw DegenerateHistory("all label weights are zero");
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - top);
  return from_weights(std::move(w));
}

LabelIndex Posterior::argmax() const {
  LabelIndex best = 0;
  for (std::size_t y = 1; y < probs_.size(); ++y)
    if (probs_[y] > probs_[best]) best = static_cast<LabelIndex>(y);
  return best;
}

double Posterior::max() const { return probs_.empty() ? 0.0 : probs_[argmax()]; }

double Posterior::entropy_bits() const {
  double h = 0.0;
  for (double p : probs_)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

bool TokenSet::contains(std::string_view stem) const {
  return std::binary_search(stems.begin(), stems.end(), stem);
}

JointTable::JointTable(std::size_t answers, std::size_t labels)
    : answers_(answers), labels_(labels), data_(answers * labels, 0.0) {}

double JointTable::total() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

std::vector<double> JointTable::label_marginal() const {
  std::vector<double> m(labels_, 0.0);
  for (std::size_t a = 0; a < answers_; ++a)
    for (std::size_t y = 0; y < labels_; ++y) m[y] += at(a, y);
  return m;
}

std::vector<double> JointTable::answer_marginal() const {
  std::vector<double> m(answers_, 0.0);
  for (std::size_t a = 0; a < answers_; ++a)
    for (std::size_t y = 0; y < labels_; ++y) m[a] += at(a, y);
  return m;
}

}  // namespace ip
