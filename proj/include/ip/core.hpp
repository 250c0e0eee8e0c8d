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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ip {

using QueryId = std::uint32_t;
using LabelIndex = std::uint32_t;

/// Malformed or inconsistent input data (files, payloads, labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A history that no instance of the model can produce.
class DegenerateHistory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered set of class names. Index <-> name is fixed for the lifetime of the object.
class LabelSpace {
 public:
  LabelSpace() = default;
  explicit LabelSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(LabelIndex y) const;
  LabelIndex index(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const LabelSpace&) const = default;

 private:
  std::vector<std::string> names_;
};

struct Query {
  QueryId id = 0;
  std::uint32_t arity = 1;
  std::uint32_t answer_cardinality = 2;

  /// Number of distinct answers, cardinality^arity.
  std::uint64_t alphabet_size() const;

  bool operator==(const Query&) const = default;
};

/// Answer to one query: one symbol per slot.
class Answer {
 public:
  Answer() = default;
  explicit Answer(std::vector<std::uint8_t> values) : values_(std::move(values)) {}
  Answer(std::initializer_list<std::uint8_t> values) : values_(values) {}

  std::span<const std::uint8_t> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::uint8_t operator[](std::size_t slot) const { return values_[slot]; }

  // Row of this answer in a joint table. Slot 0 is the most significant digit.
  std::uint64_t index(std::uint32_t cardinality) const;
  static Answer from_index(std::uint64_t index, std::uint32_t arity, std::uint32_t cardinality);

  bool operator==(const Answer&) const = default;

 private:
  std::vector<std::uint8_t> values_;
};

struct Step {
  QueryId query = 0;
  Answer answer;
  bool operator==(const Step&) const = default;
};

/// Ordered query-answer pairs. A history of length k stands for the event that
/// an input agrees with it on all k pairs.
class History {
 public:
  History() = default;

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const std::vector<Step>& steps() const { return steps_; }
  bool contains(QueryId q) const;

  [[nodiscard]] History extended(QueryId q, Answer a) const;

  /// Equality ignoring order.
  bool same_pairs(const History& other) const;

  bool operator==(const History&) const = default;

 private:
  std::vector<Step> steps_;
};

History extend_history(const History& h, QueryId q, Answer a);

/// Probability vector over a LabelSpace.
class Posterior {
 public:
  Posterior() = default;
  explicit Posterior(std::vector<double> probs);

  static Posterior uniform(std::size_t n);
  /// Normalizes nonnegative weights. Throws DegenerateHistory when they sum to zero.
  static Posterior from_weights(std::vector<double> weights);
  /// Normalizes log-weights with the log-sum-exp shift.
  static Posterior from_log_weights(std::span<const double> log_weights);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t y) const { return probs_[y]; }

  LabelIndex argmax() const;  // lowest index on ties
  double max() const;
  double entropy_bits() const;

  bool operator==(const Posterior&) const = default;

 private:
  std::vector<double> probs_;
};

struct BinaryImage {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<std::uint8_t> pixels;  // row-major, values in {0, 1}
  bool operator==(const BinaryImage&) const = default;
};

struct AttributeVector {
  std::vector<std::uint8_t> bits;
  bool operator==(const AttributeVector&) const = default;
};

/// Sorted, duplicate-free word stems of one document.
struct TokenSet {
  std::vector<std::string> stems;
  bool contains(std::string_view stem) const;
  bool operator==(const TokenSet&) const = default;
};

using Payload = std::variant<BinaryImage, AttributeVector, TokenSet>;

struct Instance {
  std::string id;
  Payload raw;
};

/// p(answer, label) table. Rows index answers (see Answer::index), columns labels.
class JointTable {
 public:
  JointTable() = default;
  JointTable(std::size_t answers, std::size_t labels);

  std::size_t answers() const { return answers_; }
  std::size_t labels() const { return labels_; }

  double& at(std::size_t answer, std::size_t label) { return data_[answer * labels_ + label]; }
  double at(std::size_t answer, std::size_t label) const { return data_[answer * labels_ + label]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double total() const;
  std::vector<double> label_marginal() const;
  std::vector<double> answer_marginal() const;

 private:
  std::size_t answers_ = 0;
  std::size_t labels_ = 0;
  std::vector<double> data_;
};

}  // namespace ip
