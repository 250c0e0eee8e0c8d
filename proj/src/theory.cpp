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

#include "ip/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "ip/information.hpp"
#include "ip/rng.hpp"

namespace ip {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Exhaustive search over strategy trees. Lengths are kept as integer sums of
// |C| (the expected length times n) so that comparisons are exact.
class StrategySearch {
 public:
  StrategySearch(const TabularJointModel& model, const QuerySet& qset, double epsilon)
      : model_(model), qset_(qset), n_(model.size()) {
    answers_.resize(qset.size(), std::vector<std::uint64_t>(n_));
    for (QueryId q = 0; q < qset.size(); ++q)
      for (std::size_t i = 0; i < n_; ++i)
        answers_[q][i] = qset.answer_from_primitives(model.primitives(i), q).index(qset.query(q).answer_cardinality);
    for (std::size_t i = 0; i < n_; ++i) {
      auto p = model.primitives(i);
      std::vector<std::int8_t> obs(p.begin(), p.end());
      full_.push_back(model.posterior_over(model.consistent(obs)));
    }
    root_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    const std::int64_t need_root = need(root_);
    budget_ = static_cast<std::int64_t>(std::floor(epsilon / kKlBudgetUnit + 1e-9));
    budget_ = std::min(budget_, need_root);
    if (budget_ > 4096) throw std::invalid_argument("epsilon is too coarse for the KL budget grid of this instance");
  }

  StrategyEvaluation run() {
    StrategyEvaluation ev;
    const auto& f = solve(root_);
    ev.expected_length = static_cast<double>(f[budget_]) / static_cast<double>(n_);
    ev.description = describe(root_, budget_, ev.sufficiency_gap);
    return ev;
  }

 private:
  std::vector<std::size_t> members(std::uint64_t mask) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if ((mask >> i) & 1U) out.push_back(i);
    return out;
  }

  // Mean KL contributed by stopping at C, in bits.
  double kl(std::uint64_t mask) {
    auto it = kl_.find(mask);
    if (it != kl_.end()) return it->second;
    const auto m = members(mask);
    const Posterior pc = model_.posterior_over(m);
    double s = 0.0;
    for (auto i : m) s += kl_divergence_bits(full_[i].probs(), pc.probs());
    s /= static_cast<double>(n_);
    kl_[mask] = s;
    return s;
  }

  std::int64_t need(std::uint64_t mask) {
    const double v = kl(mask);
    if (v <= 1e-12) return 0;
    return static_cast<std::int64_t>(std::ceil(v / kKlBudgetUnit - 1e-9));
  }

  std::vector<std::uint64_t> children(std::uint64_t mask, QueryId q) const {
    std::map<std::uint64_t, std::uint64_t> by_answer;
    for (std::size_t i = 0; i < n_; ++i)
      if ((mask >> i) & 1U) by_answer[answers_[q][i]] |= std::uint64_t{1} << i;
    std::vector<std::uint64_t> out;
    for (const auto& [a, m] : by_answer) out.push_back(m);
    return out;
  }

  std::vector<std::int64_t> combine(const std::vector<std::uint64_t>& kids) {
    std::vector<std::int64_t> g = solve(kids[0]);
    for (std::size_t c = 1; c < kids.size(); ++c) {
      const auto h = solve(kids[c]);
      std::vector<std::int64_t> next(budget_ + 1, kInf);
      for (std::int64_t b = 0; b <= budget_; ++b)
        for (std::int64_t b1 = 0; b1 <= b; ++b1)
          if (g[b1] < kInf && h[b - b1] < kInf) next[b] = std::min(next[b], g[b1] + h[b - b1]);
      g = std::move(next);
    }
    return g;
  }

  const std::vector<std::int64_t>& solve(std::uint64_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    std::vector<std::int64_t> f(budget_ + 1, kInf);
    const std::int64_t stop_need = need(mask);
    for (std::int64_t b = stop_need; b <= budget_; ++b) f[b] = 0;
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    if (stop_need > 0) {
      for (QueryId q = 0; q < qset_.size(); ++q) {
        const auto kids = children(mask, q);
        if (kids.size() < 2) continue;
        const auto g = combine(kids);
        for (std::int64_t b = 0; b <= budget_; ++b)
          if (g[b] < kInf) f[b] = std::min(f[b], size + g[b]);
      }
    }
    return memo_.emplace(mask, std::move(f)).first->second;
  }

  std::string describe(std::uint64_t mask, std::int64_t b, double& gap) {
    const auto& f = solve(mask);
    if (need(mask) <= b) {
      gap += kl(mask);
      return "stop";
    }
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    for (QueryId q = 0; q < qset_.size(); ++q) {
      const auto kids = children(mask, q);
      if (kids.size() < 2) continue;
      if (combine(kids)[b] + size != f[b]) continue;
      // Give each child in turn the smallest budget that still allows an optimal total.
      std::vector<std::int64_t> alloc(kids.size(), 0);
      std::int64_t left = b;
      for (std::size_t c = 0; c + 1 < kids.size(); ++c) {
        std::vector<std::uint64_t> rest(kids.begin() + static_cast<std::ptrdiff_t>(c) + 1, kids.end());
        const auto tail = combine(rest);
        const auto& head = solve(kids[c]);
        std::int64_t need_total = kInf;
        for (std::int64_t b1 = 0; b1 <= left; ++b1)
          if (head[b1] < kInf && tail[left - b1] < kInf) need_total = std::min(need_total, head[b1] + tail[left - b1]);
        for (std::int64_t b1 = 0; b1 <= left; ++b1)
          if (head[b1] < kInf && tail[left - b1] < kInf && head[b1] + tail[left - b1] == need_total) {
            alloc[c] = b1;
            break;
          }
        left -= alloc[c];
      }
      alloc.back() = left;
      std::string s = "q" + std::to_string(q) + "{";
      for (std::size_t c = 0; c < kids.size(); ++c) {
        const auto first = static_cast<std::size_t>(std::countr_zero(kids[c]));
        if (c) s += ",";
        s += std::to_string(answers_[q][first]) + ":" + describe(kids[c], alloc[c], gap);
      }
      return s + "}";
    }
    throw std::logic_error("strategy reconstruction failed");
  }

  const TabularJointModel& model_;
  const QuerySet& qset_;
  std::size_t n_;
  std::vector<std::vector<std::uint64_t>> answers_;
  std::vector<Posterior> full_;
  std::uint64_t root_ = 0;
  std::int64_t budget_ = 0;
  std::unordered_map<std::uint64_t, double> kl_;
  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> memo_;
};

}  // namespace

StrategyEvaluation exhaustive_optimal_strategy(const TabularJointModel& model, const QuerySet& qset,
                                               double epsilon) {
  if (qset.size() > 8) throw std::invalid_argument("exhaustive search supports at most 8 queries");
  if (model.size() > 64) throw std::invalid_argument("exhaustive search supports at most 64 instances");
  if (model.size() == 0) throw std::invalid_argument("exhaustive search needs instances");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  model.check_compatible(qset);
  return StrategySearch(model, qset, epsilon).run();
}

StrategyEvaluation ip_expected_length(const GenerativeModel& model, const QuerySet& qset, const Dataset& data,
                                      const TerminationConfig& term, const PursuitOptions& opts) {
  if (data.empty()) throw std::invalid_argument("dataset must not be empty");
  const auto traces = run_ip_batch(model, qset, data.items, term, opts, 1);
  StrategyEvaluation ev;
  const bool exact_gap = dynamic_cast<const LatentGaussianModel*>(&model) == nullptr;
  double len = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!traces[i].error.empty()) throw std::runtime_error("instance " + traces[i].instance_id + ": " + traces[i].error);
    len += static_cast<double>(traces[i].explanation_length);
    if (exact_gap) {
      const auto full = model.full_posterior(qset, data.items[i].instance, opts.inference);
      const auto expl = model.posterior(qset, traces[i].explanation(), opts.inference);
      gap += kl_divergence_bits(full.probs(), expl.probs());
    }
  }
  const double n = static_cast<double>(traces.size());
  ev.expected_length = len / n;
  ev.sufficiency_gap = exact_gap ? gap / n : std::numeric_limits<double>::quiet_NaN();
  ev.description = "information pursuit";
  return ev;
}

double huffman_expected_length(const Posterior& prior, int corrupt_merge) {
  struct Node {
    double w;
    std::size_t order;
  };
  std::vector<Node> nodes;
  for (std::size_t y = 0; y < prior.size(); ++y)
    if (prior[y] > 0.0) nodes.push_back({prior[y], nodes.size()});
  if (nodes.empty()) throw std::invalid_argument("prior has no positive entry");
  std::size_t next_order = nodes.size();
  double cost = 0.0;
  int merge = 0;
  auto less = [](const Node& a, const Node& b) { return a.w != b.w ? a.w < b.w : a.order < b.order; };
  while (nodes.size() > 1) {
    std::sort(nodes.begin(), nodes.end(), less);
    Node a = nodes[0];
    std::size_t second = 1;
    if (merge == corrupt_merge) second = nodes.size() - 1;
    Node b = nodes[second];
    nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(second));
    nodes.erase(nodes.begin());
    const double w = a.w + b.w;
    cost += w;
    nodes.push_back({w, next_order++});
    ++merge;
  }
  return cost;
}

double ip_complete_queryset_length(const Posterior& prior) {
  std::vector<std::size_t> positive;
  for (std::size_t y = 0; y < prior.size(); ++y)
    if (prior[y] > 0.0) positive.push_back(y);
  if (positive.empty()) throw std::invalid_argument("prior has no positive entry");
  if (positive.size() > 12) throw std::invalid_argument("divide and conquer supports at most 12 active labels");
  const std::size_t k = positive.size();
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = prior[positive[i]];
  auto mass = [&](std::uint32_t m) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if ((m >> i) & 1U) s += p[i];
    return s;
  };
  // Bit i of a mask stands for the i-th positive label, which keeps the
  // numeric order of masks over label indices.
  std::function<double(std::uint32_t)> expected = [&](std::uint32_t active) -> double {
    if (std::popcount(active) <= 1) return 0.0;
    const double total = mass(active);
    std::uint32_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::uint32_t d = 1; d < (1U << k); ++d) {
      if ((d & active) != d || d == active) continue;
      const double gap = std::abs(mass(d) / total - 0.5);
      if (gap < best_gap - 1e-12) {
        best_gap = gap;
        best = d;
      }
    }
    const double pd = mass(best) / total;
    return 1.0 + pd * expected(best) + (1.0 - pd) * expected(active & ~best);
  };
  return expected((1U << k) - 1);
}

LabelIndex map_using_full_q(const GenerativeModel& model, const QuerySet& qset, const Instance& instance,
                            const InferenceOptions& opts) {
  return model.full_posterior(qset, instance, opts).argmax();
}

std::pair<Dataset, QuerySet> random_tabular(std::uint64_t seed, std::size_t n, std::size_t queries,
                                            std::size_t label_count, bool noise_free) {
  if (n == 0 || queries == 0 || label_count < 2) throw std::invalid_argument("random_tabular needs n, |Q| >= 1, >= 2 labels");
  auto eng = rng::engine(seed, "tabular");
  std::vector<std::string> names, labels;
  for (std::size_t q = 0; q < queries; ++q) names.push_back("a" + std::to_string(q));
  for (std::size_t y = 0; y < label_count; ++y) labels.push_back("y" + std::to_string(y));
  Dataset d;
  d.labels = LabelSpace(labels);
  d.kind = QueryKind::attribute;
  d.provenance.source = "random_tabular";
  d.provenance.split_seed = seed;
  d.attribute_names = names;
  std::map<std::vector<std::uint8_t>, LabelIndex> rule;
  for (std::size_t i = 0; i < n; ++i) {
    AttributeVector v;
    for (std::size_t q = 0; q < queries; ++q) v.bits.push_back(static_cast<std::uint8_t>(eng() & 1U));
    LabelIndex y = static_cast<LabelIndex>(eng() % label_count);
    if (noise_free) y = rule.emplace(v.bits, y).first->second;
    d.items.push_back({Instance{"r" + std::to_string(i), std::move(v)}, y});
  }
  return {std::move(d), QuerySet::attributes(names)};
}

std::pair<Dataset, QuerySet> xor_toy() {
  Dataset d;
  d.labels = LabelSpace({"0", "1"});
  d.kind = QueryKind::attribute;
  d.provenance.source = "xor";
  d.attribute_names = {"x1", "x2"};
  for (std::uint8_t a = 0; a < 2; ++a)
    for (std::uint8_t b = 0; b < 2; ++b)
      d.items.push_back({Instance{"x" + std::to_string(a) + std::to_string(b), AttributeVector{{a, b}}},
                         static_cast<LabelIndex>(a ^ b)});
  return {d, QuerySet::attributes(d.attribute_names)};
}

}  // namespace ip
