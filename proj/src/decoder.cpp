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

#include "ip/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ip {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw DataError("unknown activation: " + name);
}

Decoder::Decoder(std::size_t latent_dim, std::size_t label_count, std::vector<DenseLayer> layers)
    : latent_dim_(latent_dim), label_count_(label_count), layers_(std::move(layers)) {
  if (latent_dim_ == 0) throw DataError("decoder latent_dim must be positive");
  if (label_count_ == 0) throw DataError("decoder label count must be positive");
  if (layers_.empty()) throw DataError("decoder needs at least one layer");
  std::size_t width = latent_dim_ + label_count_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    if (L.in != width)
      throw DataError("decoder layer " + std::to_string(l) + " expects input width " + std::to_string(L.in) +
                      " but receives " + std::to_string(width));
    if (L.out == 0) throw DataError("decoder layer " + std::to_string(l) + " has no outputs");
    if (L.weights.size() != L.in * L.out || L.bias.size() != L.out)
      throw DataError("decoder layer " + std::to_string(l) + " has mis-sized parameters");
    width = L.out;
  }
}

namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::identity: return x;
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return sigmoid(x);
  }
  return x;
}

double activation_derivative(Activation a, double pre) {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = sigmoid(pre);
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace

void Decoder::forward(std::span<const double> z, LabelIndex y, Tape& tape) const {
  if (z.size() != latent_dim_) throw std::invalid_argument("latent vector has the wrong dimension");
  if (y >= label_count_) throw std::invalid_argument("label out of range for decoder");
  tape.inputs.resize(layers_.size());
  tape.pre.resize(layers_.size());
  std::vector<double> x(latent_dim_ + label_count_, 0.0);
  std::copy(z.begin(), z.end(), x.begin());
  x[latent_dim_ + y] = 1.0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    tape.inputs[l] = x;
    auto& pre = tape.pre[l];
    pre.assign(L.out, 0.0);
    for (std::size_t o = 0; o < L.out; ++o) {
      double s = L.bias[o];
      const double* w = L.weights.data() + o * L.in;
      for (std::size_t i = 0; i < L.in; ++i) s += w[i] * x[i];
      pre[o] = s;
    }
    x.resize(L.out);
    for (std::size_t o = 0; o < L.out; ++o) x[o] = activate(L.activation, pre[o]);
  }
  for (double v : x)
    if (!std::isfinite(v)) throw std::runtime_error("decoder produced a non-finite logit");
  tape.output = std::move(x);
}

std::vector<double> Decoder::logits(std::span<const double> z, LabelIndex y) const {
  Tape tape;
  forward(z, y, tape);
  return std::move(tape.output);
}

void Decoder::backward(const Tape& tape, std::span<const double> output_grad, std::span<double> z_grad) const {
  if (output_grad.size() != output_slots()) throw std::invalid_argument("output gradient has the wrong size");
  if (z_grad.size() != latent_dim_) throw std::invalid_argument("latent gradient has the wrong size");
  std::vector<double> g(output_grad.begin(), output_grad.end());
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& L = layers_[l];
    for (std::size_t o = 0; o < L.out; ++o) g[o] *= activation_derivative(L.activation, tape.pre[l][o]);
    std::vector<double> gin(L.in, 0.0);
    for (std::size_t o = 0; o < L.out; ++o) {
      if (g[o] == 0.0) continue;
      const double* w = L.weights.data() + o * L.in;
      for (std::size_t i = 0; i < L.in; ++i) gin[i] += w[i] * g[o];
    }
    g = std::move(gin);
  }
  for (std::size_t i = 0; i < latent_dim_; ++i) z_grad[i] += g[i];
}

bool Decoder::ignores_latent() const {
  const auto& L = layers_.front();
  for (std::size_t o = 0; o < L.out; ++o)
    for (std::size_t i = 0; i < latent_dim_; ++i)
      if (L.weights[o * L.in + i] != 0.0) return false;
  return true;
}

double log_bernoulli_logit(std::uint8_t a, double logit) {
  // log sigmoid(x) = -softplus(-x); log(1 - sigmoid(x)) = -softplus(x)
  const double x = a ? -logit : logit;
  return -(x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)));
}

}  // namespace ip
