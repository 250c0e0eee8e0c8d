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

#include <span>

#include "ip/core.hpp"

namespace ip {

/// Shannon entropy in bits of a nonnegative vector summing to one (0 log 0 = 0).
double entropy_bits(std::span<const double> p);

/// I(A; Y) in bits for a joint table p(a, y), with 0 log 0 = 0.
/// Throws std::invalid_argument unless entries are nonnegative and sum to 1 within 1e-9.
/// Results in [-1e-12, 0) are clamped to 0.
double mutual_information(const JointTable& joint);

/// KL(p || q) in bits. Infinite when p puts mass where q has none.
double kl_divergence_bits(std::span<const double> p, std::span<const double> q);

}  // namespace ip
