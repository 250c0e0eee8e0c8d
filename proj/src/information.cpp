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

#include "ip/information.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ip {

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double mutual_information(const JointTable& joint) {
  if (joint.answers() == 0 || joint.labels() == 0) throw std::invalid_argument("empty joint table");
  double sum = 0.0;
  for (double v : joint.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("joint table has a negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("joint table does not sum to one");

  const auto pa = joint.answer_marginal();
  const auto py = joint.label_marginal();
  double mi = 0.0;
  for (std::size_t a = 0; a < joint.answers(); ++a) {
    if (pa[a] <= 0.0) continue;
    for (std::size_t y = 0; y < joint.labels(); ++y) {
      const double p = joint.at(a, y);
      if (p <= 0.0) continue;
      mi += p * std::log2(p / (pa[a] * py[y]));
    }
  }
  if (mi < -1e-12) throw std::logic_error("mutual information below rounding tolerance");
  return mi < 0.0 ? 0.0 : mi;
}

double kl_divergence_bits(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("KL arguments differ in length");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log2(p[i] / q[i]);
  }
  return kl < 0.0 ? 0.0 : kl;
}

}  // namespace ip
