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

#include "ip/querysets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "ip/text.hpp"

namespace ip {

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::patch: return "patch";
    case QueryKind::attribute: return "attribute";
    case QueryKind::word: return "word";
  }
  return "?";
}

QuerySet QuerySet::patches(std::uint32_t height, std::uint32_t width, std::uint32_t side) {
  if (side < 1 || side > std::min(height, width))
    throw std::invalid_argument("patch side must lie in [1, min(height, width)]");
  QuerySet s;
  s.kind_ = QueryKind::patch;
  s.geometry_ = {height, width, side};
  s.primitive_count_ = std::size_t{height} * width;
  const std::uint32_t rows = height - side + 1, cols = width - side + 1;
  s.slot_offsets_.push_back(0);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      s.queries_.push_back(Query{static_cast<QueryId>(s.queries_.size()), side * side, 2});
      for (std::uint32_t dr = 0; dr < side; ++dr)
        for (std::uint32_t dc = 0; dc < side; ++dc) s.slot_data_.push_back((r + dr) * width + (c + dc));
      s.slot_offsets_.push_back(static_cast<std::uint32_t>(s.slot_data_.size()));
    }
  }
  return s;
}

QuerySet QuerySet::attributes(std::vector<std::string> names) {
  QuerySet s;
  s.kind_ = QueryKind::attribute;
  s.names_ = std::move(names);
  s.finish_slots();
  return s;
}

QuerySet QuerySet::words(std::vector<std::string> vocabulary) {
  std::unordered_set<std::string> seen;
  for (const auto& w : vocabulary)
    if (!seen.insert(w).second) throw std::invalid_argument("duplicate vocabulary stem: " + w);
  QuerySet s;
  s.kind_ = QueryKind::word;
  s.names_ = std::move(vocabulary);
  s.finish_slots();
  return s;
}

void QuerySet::finish_slots() {
  if (names_.empty()) throw std::invalid_argument("query set must not be empty");
  primitive_count_ = names_.size();
  slot_offsets_.assign(1, 0);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    queries_.push_back(Query{static_cast<QueryId>(i), 1, 2});
    slot_data_.push_back(static_cast<std::uint32_t>(i));
    slot_offsets_.push_back(static_cast<std::uint32_t>(slot_data_.size()));
  }
}

const Query& QuerySet::query(QueryId q) const {
  if (q >= queries_.size()) throw std::out_of_range("query id " + std::to_string(q) + " out of range");
  return queries_[q];
}

std::span<const std::uint32_t> QuerySet::slots(QueryId q) const {
  if (q >= queries_.size()) throw std::out_of_range("query id " + std::to_string(q) + " out of range");
  return {slot_data_.data() + slot_offsets_[q], slot_offsets_[q + 1] - slot_offsets_[q]};
}

const PatchGeometry& QuerySet::geometry() const {
  if (kind_ != QueryKind::patch) throw std::logic_error("not a patch query set");
  return geometry_;
}

std::vector<std::uint8_t> QuerySet::primitives(const Instance& instance) const {
  switch (kind_) {
    case QueryKind::patch: {
      const auto* img = std::get_if<BinaryImage>(&instance.raw);
      if (!img) throw DataError("instance " + instance.id + ": patch queries need a binary image");
      if (img->height != geometry_.height || img->width != geometry_.width ||
          img->pixels.size() != primitive_count_)
        throw DataError("instance " + instance.id + ": image dimensions do not match the query set");
      return img->pixels;
    }
    case QueryKind::attribute: {
      const auto* attr = std::get_if<AttributeVector>(&instance.raw);
      if (!attr) throw DataError("instance " + instance.id + ": attribute queries need an attribute vector");
      if (attr->bits.size() != primitive_count_)
        throw DataError("instance " + instance.id + ": attribute count does not match the query set");
      return attr->bits;
    }
    case QueryKind::word: {
      const auto* tokens = std::get_if<TokenSet>(&instance.raw);
      if (!tokens) throw DataError("instance " + instance.id + ": word queries need a token set");
      std::vector<std::uint8_t> bits(primitive_count_);
      for (std::size_t i = 0; i < names_.size(); ++i) bits[i] = tokens->contains(names_[i]) ? 1 : 0;
      return bits;
    }
  }
  return {};
}

Answer QuerySet::answer_from_primitives(std::span<const std::uint8_t> primitives, QueryId q) const {
  auto sl = slots(q);
  std::vector<std::uint8_t> v(sl.size());
  for (std::size_t i = 0; i < sl.size(); ++i) v[i] = primitives[sl[i]];
  return Answer(std::move(v));
}

Answer QuerySet::answer(const Instance& instance, QueryId q) const {
  auto sl = slots(q);
  if (kind_ == QueryKind::word) {
    const auto* tokens = std::get_if<TokenSet>(&instance.raw);
    if (!tokens) throw DataError("instance " + instance.id + ": word queries need a token set");
    return Answer({static_cast<std::uint8_t>(tokens->contains(names_[q]) ? 1 : 0)});
  }
  auto prim = primitives(instance);
  std::vector<std::uint8_t> v(sl.size());
  for (std::size_t i = 0; i < sl.size(); ++i) v[i] = prim[sl[i]];
  return Answer(std::move(v));
}

QuerySet build_patch_queryset(std::uint32_t height, std::uint32_t width, std::uint32_t side) {
  return QuerySet::patches(height, width, side);
}

QuerySet build_attribute_queryset(std::vector<std::string> names) {
  return QuerySet::attributes(std::move(names));
}

QuerySet build_word_queryset_from_stems(const std::vector<std::vector<std::string>>& stemmed_docs,
                                        std::size_t vocab_size) {
  if (stemmed_docs.empty()) throw std::invalid_argument("corpus must not be empty");
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be at least 1");
  std::map<std::string, std::pair<double, std::size_t>> stats;  // stem -> (total count, df)
  for (const auto& doc : stemmed_docs) {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : doc) ++counts[s];
    for (const auto& [s, c] : counts) {
      auto& st = stats[s];
      st.first += static_cast<double>(c);
      st.second += 1;
    }
  }
  const double n_docs = static_cast<double>(stemmed_docs.size());
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(stats.size());
  for (const auto& [s, st] : stats) {
    double idf = std::log(n_docs / (1.0 + static_cast<double>(st.second)));
    scored.emplace_back(s, st.first * idf);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > vocab_size) scored.resize(vocab_size);
  std::vector<std::string> vocab;
  for (auto& p : scored) vocab.push_back(std::move(p.first));
  return QuerySet::words(std::move(vocab));
}

QuerySet build_word_queryset(const std::vector<std::string>& corpus, std::size_t vocab_size) {
  if (corpus.empty()) throw std::invalid_argument("corpus must not be empty");
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) docs.push_back(text::stem_tokens(d));
  return build_word_queryset_from_stems(docs, vocab_size);
}

Answer answer_query(const QuerySet& qset, const Instance& instance, QueryId q) {
  return qset.answer(instance, q);
}

std::vector<std::uint32_t> covered_pixels(const QuerySet& qset, QueryId q) {
  if (qset.kind() != QueryKind::patch) throw std::invalid_argument("covered_pixels needs a patch query set");
  auto sl = qset.slots(q);
  return {sl.begin(), sl.end()};
}

std::vector<std::int8_t> observed_primitives(const QuerySet& qset, const History& history) {
  std::vector<std::int8_t> obs(qset.primitive_count(), -1);
  for (const auto& step : history.steps()) {
    auto sl = qset.slots(step.query);
    if (step.answer.size() != sl.size()) throw std::invalid_argument("answer arity does not match query");
    for (std::size_t i = 0; i < sl.size(); ++i) {
      auto v = static_cast<std::int8_t>(step.answer[i]);
      if (obs[sl[i]] >= 0 && obs[sl[i]] != v) throw DegenerateHistory("history contradicts itself");
      obs[sl[i]] = v;
    }
  }
  return obs;
}

}  // namespace ip
