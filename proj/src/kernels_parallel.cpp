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
#include <numeric>
#include <stdexcept>

#include "ip/kernels.hpp"

namespace ip::kernels {

namespace {

// Depth-first walk over answers of the free slots. Level d keeps the indices
// and partial products of the components still alive in the current subtree.
class PrunedEnumerator {
 public:
  PrunedEnumerator(const ComponentView& comps, std::span<const std::uint32_t> free_slots, const PruneConfig& cfg,
                   bool track_skipped = false)
      : comps_(comps), cfg_(cfg), track_(track_skipped), order_(free_slots.begin(), free_slots.end()) {
    // Near-deterministic slots first so that unlikely branches die early.
    std::vector<double> marginal(order_.size(), 0.0);
    for (std::size_t i = 0; i < order_.size(); ++i)
      for (std::size_t c = 0; c < comps.size(); ++c)
        marginal[i] += comps.weight[c] * comps.theta[c * comps.stride + order_[i]];
    std::vector<std::size_t> perm(order_.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(marginal[a] - 0.5) > std::abs(marginal[b] - 0.5);
    });
    std::vector<std::uint32_t> sorted(order_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = order_[perm[i]];
    order_ = std::move(sorted);

    idx_.assign(order_.size() + 1, std::vector<std::uint32_t>(comps.size()));
    part_.assign(order_.size() + 1, std::vector<double>(comps.size()));
    if (track_) skipped_.assign(comps.label_count, 0.0);
  }

  /// Mass of skipped subtrees per label; filled only when tracking.
  const std::vector<double>& skipped() const { return skipped_; }

  /// Pruned MI in bits. Every skipped subtree would lower it, so with
  /// component_floor 0 the result bounds the exact value from above.
  double run() {
    std::size_t n = 0;
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      if (comps_.weight[c] > cfg_.component_floor) {
        idx_[0][n] = static_cast<std::uint32_t>(c);
        part_[0][n] = comps_.weight[c];
        ++n;
      }
    }
    if (n > 0) visit(0, n);

    std::vector<double> py(comps_.label_count, 0.0);
    for (std::size_t c = 0; c < comps_.size(); ++c) py[comps_.label[c]] += comps_.weight[c];
    double hy = 0.0;
    for (double p : py)
      if (p > 0.0) hy += p * std::log(p);
    return (acc_ - hy) / std::log(2.0);
  }

 private:
  void visit(std::size_t depth, std::size_t n) {
    if (depth == order_.size()) {
      leaf(n);
      return;
    }
    const std::uint32_t slot = order_[depth];
    const auto& ci = idx_[depth];
    const auto& pi = part_[depth];
    auto& co = idx_[depth + 1];
    auto& po = part_[depth + 1];
    for (int bit = 0; bit < 2; ++bit) {
      std::size_t m = 0;
      double sum = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::uint32_t c = ci[t];
        const double th = comps_.theta[c * comps_.stride + slot];
        const double p = pi[t] * (bit ? th : 1.0 - th);
        if (p > cfg_.component_floor) {
          co[m] = c;
          po[m] = p;
          sum += p;
          ++m;
        }
      }
      if (m == 0) continue;
      if (sum >= cfg_.branch_floor)
        visit(depth + 1, m);
      else if (track_)
        for (std::size_t t = 0; t < m; ++t) skipped_[comps_.label[co[t]]] += po[t];
    }
  }

  void leaf(std::size_t n) {
    const auto& ci = idx_[order_.size()];
    const auto& pi = part_[order_.size()];
    double pa = 0.0;
    std::size_t t = 0;
    while (t < n) {
      const LabelIndex y = comps_.label[ci[t]];
      double s = 0.0;
      while (t < n && comps_.label[ci[t]] == y) s += pi[t++];
      acc_ += s * std::log(s);
      pa += s;
    }
    acc_ -= pa * std::log(pa);
  }

  const ComponentView& comps_;
  PruneConfig cfg_;
  bool track_;
  std::vector<std::uint32_t> order_;
  std::vector<double> skipped_;
  std::vector<std::vector<std::uint32_t>> idx_;
  std::vector<std::vector<double>> part_;
  double acc_ = 0.0;  // sum_a [sum_y p(a,y) ln p(a,y) - p(a) ln p(a)]
};

}  // namespace

double mi_pruned(const ComponentView& comps, std::span<const std::uint32_t> free_slots, const PruneConfig& cfg) {
  if (free_slots.empty() || comps.size() == 0) return 0.0;
  return std::max(0.0, PrunedEnumerator(comps, free_slots, cfg).run());
}

MiBounds mi_bounds(const ComponentView& comps, std::span<const std::uint32_t> free_slots, double floor) {
  if (free_slots.empty() || comps.size() == 0) return {};
  PrunedEnumerator e(comps, free_slots, {floor, 0.0, {}, 0.0}, true);
  const double upper = std::max(0.0, e.run());
  double delta = 0.0;
  for (double s : e.skipped()) delta += s;
  double cost = 0.0;
  for (double s : e.skipped())
    if (s > 0.0) cost -= s * std::log2(s / delta);
  return {std::max(0.0, upper - cost), upper};
}

void score_screened(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                    const PruneConfig& cfg, bool parallel) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score output size mismatch");
  std::vector<std::size_t> live(candidates.size());
  std::iota(live.begin(), live.end(), 0);
  std::vector<double> lower(candidates.size(), 0.0);
  // Each pass tightens the bounds of the survivors and drops every candidate
  // whose upper bound falls clearly below the best lower bound.
  auto pass = [&](auto&& eval) {
    const auto n = static_cast<std::ptrdiff_t>(live.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) eval(live[i]);
    double best = 0.0;
    for (auto c : live) best = std::max(best, lower[c]);
    std::erase_if(live, [&](std::size_t c) { return out[c] < best - cfg.screen_margin; });
  };
  for (double floor : cfg.screen_floors) {
    if (live.size() <= 1) break;
    pass([&](std::size_t c) {
      const auto b = mi_bounds(comps, candidates[c], floor);
      lower[c] = b.lower;
      out[c] = b.upper;
    });
  }
  pass([&](std::size_t c) { out[c] = lower[c] = mi_pruned(comps, candidates[c], cfg); });
}

void score_serial(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                  const PruneConfig& cfg) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score output size mismatch");
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = mi_pruned(comps, candidates[i], cfg);
}

void score_parallel(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                    const PruneConfig& cfg) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = mi_pruned(comps, candidates[i], cfg);
}

void bernoulli_loglik_parallel(const BernoulliLogTable& table,
                               const std::vector<std::vector<std::uint32_t>>& ones, std::span<double> out) {
  const std::size_t K = table.components, d = table.slots;
  if (out.size() != ones.size() * K) throw std::invalid_argument("log-likelihood output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(ones.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      double ll = table.base[k];
      const double* lg = table.logit.data() + k * d;
      for (std::uint32_t j : ones[i]) ll += lg[j];
      out[i * K + k] = ll;
    }
  }
}

}  // namespace ip::kernels
