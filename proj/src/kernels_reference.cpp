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

#include <cmath>
#include <stdexcept>

#include "ip/information.hpp"
#include "ip/kernels.hpp"

namespace ip::kernels {

JointTable free_slot_joint(const ComponentView& comps, std::span<const std::uint32_t> free_slots) {
  if (free_slots.size() > 30) throw std::invalid_argument("too many free slots to enumerate");
  const std::size_t n_answers = std::size_t{1} << free_slots.size();
  JointTable joint(n_answers, comps.label_count);
  const std::size_t u = free_slots.size();
  for (std::size_t a = 0; a < n_answers; ++a) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
      double p = comps.weight[c];
      const double* th = comps.theta.data() + c * comps.stride;
      for (std::size_t i = 0; i < u && p > 0.0; ++i) {
        const bool bit = (a >> (u - 1 - i)) & 1U;
        const double t = th[free_slots[i]];
        p *= bit ? t : 1.0 - t;
      }
      joint.at(a, comps.label[c]) += p;
    }
  }
  return joint;
}

double mi_reference(const ComponentView& comps, std::span<const std::uint32_t> free_slots) {
  if (free_slots.empty()) return 0.0;
  return mutual_information(free_slot_joint(comps, free_slots));
}

void score_reference(const ComponentView& comps, const FreeSlotLists& candidates, std::span<double> out) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score output size mismatch");
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = mi_reference(comps, candidates[i]);
}

BernoulliLogTable BernoulliLogTable::from_theta(std::span<const double> theta, std::size_t components,
                                                std::size_t slots) {
  if (theta.size() != components * slots) throw std::invalid_argument("theta size mismatch");
  BernoulliLogTable t;
  t.components = components;
  t.slots = slots;
  t.log_on.resize(theta.size());
  t.log_off.resize(theta.size());
  t.logit.resize(theta.size());
  t.base.assign(components, 0.0);
  for (std::size_t k = 0; k < components; ++k) {
    for (std::size_t j = 0; j < slots; ++j) {
      const double th = theta[k * slots + j];
      const std::size_t i = k * slots + j;
      t.log_on[i] = std::log(th);
      t.log_off[i] = std::log1p(-th);
      t.logit[i] = t.log_on[i] - t.log_off[i];
      t.base[k] += t.log_off[i];
    }
  }
  return t;
}

void bernoulli_loglik_reference(const BernoulliLogTable& table, std::span<const std::uint8_t> rows,
                                std::span<double> out) {
  const std::size_t d = table.slots, K = table.components;
  if (d == 0 || rows.size() % d != 0) throw std::invalid_argument("row buffer size mismatch");
  const std::size_t n = rows.size() / d;
  if (out.size() != n * K) throw std::invalid_argument("log-likelihood output size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      double ll = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        ll += rows[i * d + j] ? table.log_on[k * d + j] : table.log_off[k * d + j];
      out[i * K + k] = ll;
    }
  }
}

}  // namespace ip::kernels
