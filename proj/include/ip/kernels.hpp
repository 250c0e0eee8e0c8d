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
#include <span>
#include <vector>

#include "ip/core.hpp"

// Inner loops of query scoring and EM. Each kernel has a plain serial
// reference version kept for testing and an OpenMP version used in production.
namespace ip::kernels {

/// Weighted product-Bernoulli components. Component c carries label label[c],
/// weight weight[c] = p(label, c | history), and P(primitive j = 1 | c) =
/// theta[c * stride + j]. Components are grouped by ascending label and the
/// weights sum to one.
struct ComponentView {
  std::span<const double> theta;
  std::size_t stride = 0;
  std::span<const LabelIndex> label;
  std::span<const double> weight;
  std::size_t label_count = 0;

  std::size_t size() const { return weight.size(); }
};

/// Joint p(a, y) over the 2^|free_slots| assignments of the free slots
/// (first free slot is the most significant bit).
JointTable free_slot_joint(const ComponentView& comps, std::span<const std::uint32_t> free_slots);

/// I(answer; label) in bits by full enumeration and ip::mutual_information.
double mi_reference(const ComponentView& comps, std::span<const std::uint32_t> free_slots);

struct PruneConfig {
  /// Subtrees of the answer enumeration whose total mass falls below this are skipped.
  double branch_floor = 1e-15;
  /// Components whose partial product falls below this are dropped from a subtree.
  double component_floor = 1e-18;
  /// Branch floors of the screening passes run before exact scoring, coarse
  /// to fine. Empty disables screening.
  std::vector<double> screen_floors = {1e-3, 1e-4, 1e-5, 1e-6};
  /// A candidate stays in contention while its upper bound is within this of
  /// the best lower bound. Must exceed the selection tie tolerance.
  double screen_margin = 1e-9;
};

/// Same quantity by depth-first enumeration with mass pruning. The skipped
/// mass is at most 2^|free| * branch_floor + |comps| * 2^|free| * component_floor.
double mi_pruned(const ComponentView& comps, std::span<const std::uint32_t> free_slots,
                 const PruneConfig& cfg = {});

/// Two-sided bounds on I(answer; label) in bits from an enumeration that
/// skips subtrees lighter than `floor`. The skipped mass delta, split by label
/// as delta_y, costs at most delta * H(delta_y / delta) bits.
struct MiBounds {
  double lower = 0.0;
  double upper = 0.0;
};
MiBounds mi_bounds(const ComponentView& comps, std::span<const std::uint32_t> free_slots, double floor);

using FreeSlotLists = std::vector<std::vector<std::uint32_t>>;

void score_reference(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out);
void score_serial(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                  const PruneConfig& cfg = {});
void score_parallel(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                    const PruneConfig& cfg = {});

/// Scores for choosing the best candidate. Candidates that may come within
/// cfg.screen_margin of the best are scored exactly as by score_serial; the
/// rest hold an upper bound that lies more than the margin below the maximum.
void score_screened(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out,
                    const PruneConfig& cfg, bool parallel);

/// Bernoulli log-likelihood table for K components over d binary slots.
struct BernoulliLogTable {
  std::size_t components = 0;
  std::size_t slots = 0;
  std::vector<double> log_on;   // K x d, log theta
  std::vector<double> log_off;  // K x d, log (1 - theta)
  std::vector<double> logit;    // K x d, log_on - log_off
  std::vector<double> base;     // K, sum_j log_off

  static BernoulliLogTable from_theta(std::span<const double> theta, std::size_t components, std::size_t slots);
};

/// out[i * K + k] = log p(row i | component k). rows is n x d of {0,1}.
void bernoulli_loglik_reference(const BernoulliLogTable& table, std::span<const std::uint8_t> rows,
                                std::span<double> out);
/// Sparse version: ones[i] lists the slots equal to one in row i.
void bernoulli_loglik_parallel(const BernoulliLogTable& table,
                               const std::vector<std::vector<std::uint32_t>>& ones, std::span<double> out);

}  // namespace ip::kernels
