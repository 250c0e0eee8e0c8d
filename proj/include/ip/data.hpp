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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ip/core.hpp"
#include "ip/querysets.hpp"

namespace ip {

/// Everything needed to rebuild a dataset bit-for-bit.
struct Provenance {
  std::string source;
  double threshold = 0.0;
  std::string vocab_hash;
  std::uint64_t split_seed = 0;
  std::string note;
};

struct LabeledInstance {
  Instance instance;
  LabelIndex label = 0;
};

struct Dataset {
  std::vector<LabeledInstance> items;
  LabelSpace labels;
  QueryKind kind = QueryKind::attribute;
  Provenance provenance;
  /// Column names of attribute datasets, in column order.
  std::vector<std::string> attribute_names;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  std::vector<std::size_t> class_counts() const;
  /// Throws DataError on an empty dataset or an out-of-range label.
  void validate() const;
};

/// Binarization cut: a byte p maps to 1 iff p >= round(255 * threshold).
std::uint8_t binarization_cut(double threshold);

/// IDX image/label pair (magic 0x00000803 / 0x00000801, big-endian sizes),
/// plain or gzip-compressed. limit > 0 keeps only the first `limit` images.
Dataset load_idx_images(const std::string& images_path, const std::string& labels_path, double threshold,
                        std::size_t limit = 0);

/// Writers for synthetic fixtures; pixels are raw bytes, row-major per image.
void write_idx_images(const std::string& path, std::uint32_t height, std::uint32_t width,
                      const std::vector<std::vector<std::uint8_t>>& images);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

/// Header row of attribute names followed by a label column; cells in {0,1}.
Dataset load_attribute_csv(const std::string& path);

/// Sets each attribute of each class to 1 when more than half of the class has
/// it and to 0 otherwise (an exact half gives 0).
Dataset majority_vote_attributes(const Dataset& data);

/// old category -> new category, or std::nullopt to drop the record.
using CategoryMap = std::map<std::string, std::optional<std::string>>;

/// Lines of "old<TAB>new" or "old<TAB>DROP"; blank lines and '#' comments ignored.
CategoryMap load_category_map(const std::string& path);

struct TextCorpus {
  Dataset dataset;
  QuerySet queryset;
  double mean_present_words = 0.0;
};

struct TextOptions {
  std::string text_field = "text";
  std::string label_field = "label";
  const CategoryMap* category_map = nullptr;
  /// When set, labels outside this space are a DataError.
  const LabelSpace* labels = nullptr;
};

/// One JSON object per line. Builds the vocabulary from the file itself.
TextCorpus load_text_jsonl(const std::string& path, std::size_t vocab_size, const TextOptions& opts = {});
/// Same, with a fixed vocabulary (e.g. a test split read with the training query set).
TextCorpus load_text_jsonl(const std::string& path, const QuerySet& vocabulary, const TextOptions& opts = {});

/// Stratified split: each class is shuffled with the seed and its first
/// round(n_c * train_fraction) members go to the training set.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Same instances with labels re-indexed into `labels` by name; DataError for
/// a label the space lacks.
Dataset relabel(const Dataset& data, const LabelSpace& labels);

/// First `n` items (or all). Provenance notes the truncation.
Dataset head(const Dataset& data, std::size_t n);

}  // namespace ip
