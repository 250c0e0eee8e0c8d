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
#include <string>
#include <vector>

#include "ip/core.hpp"

namespace ip {

enum class QueryKind { patch, attribute, word };

const char* to_string(QueryKind kind);

struct PatchGeometry {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t side = 0;

  std::uint32_t rows() const { return height - side + 1; }
  std::uint32_t cols() const { return width - side + 1; }
  bool operator==(const PatchGeometry&) const = default;
};

/// Indexed family of interpretable queries over a vector of binary primitives
/// (pixels, attributes, or vocabulary words). Every query reads a fixed list of
/// primitive slots; the answer is the tuple of their values.
///
/// Query ids are dense and canonical: patches by row-major top-left corner,
/// attributes in column order, words by descending tf-idf.
class QuerySet {
 public:
  static QuerySet patches(std::uint32_t height, std::uint32_t width, std::uint32_t side);
  static QuerySet attributes(std::vector<std::string> names);
  static QuerySet words(std::vector<std::string> vocabulary);

  QueryKind kind() const { return kind_; }
  std::size_t size() const { return queries_.size(); }
  const Query& query(QueryId q) const;
  const std::vector<Query>& queries() const { return queries_; }

  std::size_t primitive_count() const { return primitive_count_; }
  std::span<const std::uint32_t> slots(QueryId q) const;

  const PatchGeometry& geometry() const;
  /// Attribute names or vocabulary stems. Empty for patch sets.
  const std::vector<std::string>& names() const { return names_; }

  /// Primitive values of an instance; throws DataError on an incompatible payload.
  std::vector<std::uint8_t> primitives(const Instance& instance) const;
  Answer answer(const Instance& instance, QueryId q) const;
  Answer answer_from_primitives(std::span<const std::uint8_t> primitives, QueryId q) const;

 private:
  QuerySet() = default;
  void finish_slots();

  QueryKind kind_ = QueryKind::attribute;
  std::vector<Query> queries_;
  std::vector<std::uint32_t> slot_offsets_;
  std::vector<std::uint32_t> slot_data_;
  std::size_t primitive_count_ = 0;
  PatchGeometry geometry_;
  std::vector<std::string> names_;
};

QuerySet build_patch_queryset(std::uint32_t height, std::uint32_t width, std::uint32_t side);
QuerySet build_attribute_queryset(std::vector<std::string> names);

/// Vocabulary of the vocab_size stems with highest corpus tf-idf,
/// score(w) = sum_d count(w, d) * ln(n_docs / (1 + df(w))). Ties go to the
/// lexicographically smaller stem.
QuerySet build_word_queryset(const std::vector<std::string>& corpus, std::size_t vocab_size);
QuerySet build_word_queryset_from_stems(const std::vector<std::vector<std::string>>& stemmed_docs,
                                        std::size_t vocab_size);

Answer answer_query(const QuerySet& qset, const Instance& instance, QueryId q);

/// Pixel indices (row-major) read by a patch query.
std::vector<std::uint32_t> covered_pixels(const QuerySet& qset, QueryId q);

/// Value of every primitive fixed by the history: -1 unobserved, else 0/1.
std::vector<std::int8_t> observed_primitives(const QuerySet& qset, const History& history);

}  // namespace ip
