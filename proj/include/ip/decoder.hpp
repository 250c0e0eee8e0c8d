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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ip/core.hpp"

namespace ip {

enum class Activation { identity, relu, tanh, sigmoid };

const char* to_string(Activation a);
Activation parse_activation(const std::string& name);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out
  Activation activation = Activation::identity;

  bool operator==(const DenseLayer&) const = default;
};

/// Feed-forward map (z, onehot(y)) -> per-slot Bernoulli logits.
class Decoder {
 public:
  Decoder() = default;
  Decoder(std::size_t latent_dim, std::size_t label_count, std::vector<DenseLayer> layers);

  std::size_t latent_dim() const { return latent_dim_; }
  std::size_t label_count() const { return label_count_; }
  std::size_t output_slots() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// Activations of every layer for one input, kept for the backward pass.
  struct Tape {
    std::vector<std::vector<double>> inputs;  // input of each layer
    std::vector<std::vector<double>> pre;     // pre-activation of each layer
    std::vector<double> output;
  };

  std::vector<double> logits(std::span<const double> z, LabelIndex y) const;
  void forward(std::span<const double> z, LabelIndex y, Tape& tape) const;
  /// Accumulates J^T output_grad into z_grad (size latent_dim).
  void backward(const Tape& tape, std::span<const double> output_grad, std::span<double> z_grad) const;

  /// True when no first-layer weight reads z.
  bool ignores_latent() const;

  bool operator==(const Decoder&) const = default;

 private:
  std::size_t latent_dim_ = 0;
  std::size_t label_count_ = 0;
  std::vector<DenseLayer> layers_;
};

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// log Bernoulli(a; sigmoid(logit)), stable for large |logit|.
double log_bernoulli_logit(std::uint8_t a, double logit);

}  // namespace ip
