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

#include "ip/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ip/rng.hpp"
#include "ip/text.hpp"
#include "json.hpp"

namespace ip {

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> c(labels.size(), 0);
  for (const auto& item : items) ++c.at(item.label);
  return c;
}

void Dataset::validate() const {
  if (items.empty()) throw DataError("dataset is empty");
  for (const auto& item : items)
    if (item.label >= labels.size()) throw DataError("instance " + item.instance.id + " has an out-of-range label");
}

std::uint8_t binarization_cut(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("threshold must lie strictly inside (0, 1)");
  return static_cast<std::uint8_t>(std::lround(255.0 * threshold));
}

namespace {

// Whole file through zlib, which passes plain files through unchanged.
std::vector<std::uint8_t> read_maybe_gzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw DataError("cannot open " + path);
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 16];
  for (;;) {
    const int got = gzread(f, buf, sizeof buf);
    if (got < 0) {
      gzclose(f);
      throw DataError("read error in " + path);
    }
    if (got == 0) break;
    out.insert(out.end(), buf, buf + got);
  }
  gzclose(f);
  return out;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) | (std::uint32_t{b[off + 2]} << 8) |
         std::uint32_t{b[off + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// RFC-4180 subset: comma separated, optional double quotes with "" escapes.
std::vector<std::string> csv_fields(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else if (c == '\r' && i + 1 == line.size()) {
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quote on CSV line " + std::to_string(line_no));
  out.push_back(std::move(cur));
  return out;
}

LabelSpace sorted_labels(const std::vector<std::string>& raw) {
  std::set<std::string> s(raw.begin(), raw.end());
  if (s.size() < 2) throw DataError("dataset needs at least two distinct labels");
  return LabelSpace(std::vector<std::string>(s.begin(), s.end()));
}

}  // namespace

Dataset load_idx_images(const std::string& images_path, const std::string& labels_path, double threshold,
                        std::size_t limit) {
  const std::uint8_t cut = binarization_cut(threshold);
  const auto img = read_maybe_gzip(images_path);
  const auto lab = read_maybe_gzip(labels_path);
  if (img.size() < 16 || be32(img, 0) != 0x00000803) throw DataError(images_path + ": not an IDX image file");
  if (lab.size() < 8 || be32(lab, 0) != 0x00000801) throw DataError(labels_path + ": not an IDX label file");
  const std::uint32_t n = be32(img, 4), h = be32(img, 8), w = be32(img, 12);
  if (be32(lab, 4) != n) throw DataError("image and label counts differ");
  if (h == 0 || w == 0) throw DataError(images_path + ": empty image dimensions");
  const std::size_t px = std::size_t{h} * w;
  if (img.size() != 16 + std::size_t{n} * px) throw DataError(images_path + ": size does not match the header");
  if (lab.size() != 8 + std::size_t{n}) throw DataError(labels_path + ": size does not match the header");
  const std::size_t keep = limit > 0 ? std::min<std::size_t>(limit, n) : n;
  if (keep == 0) throw DataError("IDX file holds no images");

  std::uint8_t max_label = 0;
  for (std::size_t i = 0; i < keep; ++i) max_label = std::max(max_label, lab[8 + i]);
  std::vector<std::string> names;
  for (unsigned y = 0; y <= std::max<unsigned>(max_label, 1); ++y) names.push_back(std::to_string(y));

  Dataset d;
  d.labels = LabelSpace(names);
  d.kind = QueryKind::patch;
  d.provenance.source = images_path + "," + labels_path;
  d.provenance.threshold = threshold;
  if (keep < n) d.provenance.note = "first " + std::to_string(keep) + " of " + std::to_string(n);
  d.items.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    BinaryImage b{h, w, std::vector<std::uint8_t>(px)};
    const std::uint8_t* src = img.data() + 16 + i * px;
    for (std::size_t j = 0; j < px; ++j) b.pixels[j] = src[j] >= cut ? 1 : 0;
    d.items.push_back({Instance{std::to_string(i), std::move(b)}, lab[8 + i]});
  }
  return d;
}

void write_idx_images(const std::string& path, std::uint32_t height, std::uint32_t width,
                      const std::vector<std::vector<std::uint8_t>>& images) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  put_be32(out, 0x00000803);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  put_be32(out, height);
  put_be32(out, width);
  for (const auto& im : images) {
    if (im.size() != std::size_t{height} * width) throw std::invalid_argument("image size mismatch");
    out.write(reinterpret_cast<const char*>(im.data()), static_cast<std::streamsize>(im.size()));
  }
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  put_be32(out, 0x00000801);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

Dataset load_attribute_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": missing header");
  auto header = csv_fields(line, 1);
  if (header.size() < 2) throw DataError(path + ": need at least one attribute and a label column");
  const std::size_t d = header.size() - 1;
  std::vector<AttributeVector> rows;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = csv_fields(line, line_no);
    if (f.size() != header.size())
      throw DataError(path + ": line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                      " fields, expected " + std::to_string(header.size()));
    AttributeVector v;
    for (std::size_t j = 0; j < d; ++j) {
      if (f[j] != "0" && f[j] != "1")
        throw DataError(path + ": line " + std::to_string(line_no) + " column '" + header[j] + "' is not 0/1");
      v.bits.push_back(f[j] == "1");
    }
    rows.push_back(std::move(v));
    raw_labels.push_back(f[d]);
  }
  if (rows.empty()) throw DataError(path + ": no records");
  Dataset ds;
  ds.labels = sorted_labels(raw_labels);
  ds.kind = QueryKind::attribute;
  ds.provenance.source = path;
  header.pop_back();
  ds.attribute_names = header;
  std::string joined;
  for (const auto& h : header) joined += h + "\n";
  ds.provenance.vocab_hash = hex64(rng::fnv1a(joined));
  for (std::size_t i = 0; i < rows.size(); ++i)
    ds.items.push_back({Instance{std::to_string(i), std::move(rows[i])}, ds.labels.index(raw_labels[i])});
  return ds;
}

Dataset majority_vote_attributes(const Dataset& data) {
  data.validate();
  const std::size_t L = data.labels.size();
  std::size_t d = 0;
  for (const auto& item : data.items) {
    const auto* v = std::get_if<AttributeVector>(&item.instance.raw);
    if (!v) throw DataError("majority vote needs attribute vectors");
    if (d == 0) d = v->bits.size();
    if (v->bits.size() != d) throw DataError("attribute vectors differ in length");
  }
  std::vector<std::size_t> ones(L * d, 0), counts = data.class_counts();
  for (const auto& item : data.items) {
    const auto& bits = std::get<AttributeVector>(item.instance.raw).bits;
    for (std::size_t j = 0; j < d; ++j) ones[item.label * d + j] += bits[j];
  }
  Dataset out = data;
  for (auto& item : out.items) {
    auto& bits = std::get<AttributeVector>(item.instance.raw).bits;
    for (std::size_t j = 0; j < d; ++j) bits[j] = 2 * ones[item.label * d + j] > counts[item.label] ? 1 : 0;
  }
  out.provenance.note += out.provenance.note.empty() ? "class majority vote" : "; class majority vote";
  return out;
}

CategoryMap load_category_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  CategoryMap m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw DataError(path + ": line " + std::to_string(line_no) + " is not 'old<TAB>new'");
    const std::string from = line.substr(0, tab), to = line.substr(tab + 1);
    if (m.count(from)) throw DataError(path + ": category '" + from + "' mapped twice");
    m[from] = to == "DROP" ? std::nullopt : std::optional<std::string>(to);
  }
  return m;
}

namespace {

struct RawDoc {
  std::vector<std::string> stems;
  std::string label;
};

std::vector<RawDoc> read_jsonl_docs(const std::string& path, const TextOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<RawDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw DataError(path + ": line " + std::to_string(line_no) + " is not valid JSON");
    }
    if (!obj.is_object() || !obj.contains(opts.text_field) || !obj.contains(opts.label_field) ||
        !obj[opts.text_field].is_string() || !obj[opts.label_field].is_string())
      throw DataError(path + ": line " + std::to_string(line_no) + " lacks string fields '" + opts.text_field +
                      "' and '" + opts.label_field + "'");
    std::string label = obj[opts.label_field].get<std::string>();
    if (opts.category_map) {
      auto it = opts.category_map->find(label);
      if (it != opts.category_map->end()) {
        if (!it->second) continue;
        label = *it->second;
      }
    }
    docs.push_back({text::stem_tokens(obj[opts.text_field].get<std::string>()), std::move(label)});
  }
  if (docs.empty()) throw DataError(path + ": no records");
  return docs;
}

TextCorpus assemble(const std::string& path, std::vector<RawDoc> docs, QuerySet vocab, const TextOptions& opts) {
  std::vector<std::string> raw_labels;
  for (const auto& d : docs) raw_labels.push_back(d.label);
  TextCorpus c{Dataset{}, std::move(vocab), 0.0};
  c.dataset.labels = opts.labels ? *opts.labels : sorted_labels(raw_labels);
  c.dataset.kind = QueryKind::word;
  c.dataset.provenance.source = path;
  std::string joined;
  for (const auto& w : c.queryset.names()) joined += w + "\n";
  c.dataset.provenance.vocab_hash = hex64(rng::fnv1a(joined));
  double present = 0.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!c.dataset.labels.contains(docs[i].label)) throw DataError(path + ": unknown label '" + docs[i].label + "'");
    std::sort(docs[i].stems.begin(), docs[i].stems.end());
    docs[i].stems.erase(std::unique(docs[i].stems.begin(), docs[i].stems.end()), docs[i].stems.end());
    Instance inst{std::to_string(i), TokenSet{std::move(docs[i].stems)}};
    const auto prims = c.queryset.primitives(inst);
    present += static_cast<double>(std::count(prims.begin(), prims.end(), 1));
    c.dataset.items.push_back({std::move(inst), c.dataset.labels.index(docs[i].label)});
  }
  c.mean_present_words = present / static_cast<double>(docs.size());
  return c;
}

}  // namespace

TextCorpus load_text_jsonl(const std::string& path, std::size_t vocab_size, const TextOptions& opts) {
  auto docs = read_jsonl_docs(path, opts);
  std::vector<std::vector<std::string>> stems;
  for (const auto& d : docs) stems.push_back(d.stems);
  auto vocab = build_word_queryset_from_stems(stems, vocab_size);
  return assemble(path, std::move(docs), std::move(vocab), opts);
}

TextCorpus load_text_jsonl(const std::string& path, const QuerySet& vocabulary, const TextOptions& opts) {
  if (vocabulary.kind() != QueryKind::word) throw std::invalid_argument("vocabulary must be a word query set");
  return assemble(path, read_jsonl_docs(path, opts), vocabulary, opts);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  data.validate();
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) throw std::invalid_argument("train fraction must lie in [0, 1]");
  auto eng = rng::engine(seed, "split");
  std::vector<std::vector<std::size_t>> by_class(data.labels.size());
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.items[i].label].push_back(i);
  std::vector<char> in_train(data.size(), 0);
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[eng() % i]);
    const auto take = static_cast<std::size_t>(std::llround(static_cast<double>(members.size()) * train_fraction));
    for (std::size_t i = 0; i < take; ++i) in_train[members[i]] = 1;
  }
  Dataset train, test;
  for (auto* d : {&train, &test}) {
    d->labels = data.labels;
    d->kind = data.kind;
    d->provenance = data.provenance;
    d->provenance.split_seed = seed;
    d->attribute_names = data.attribute_names;
  }
  for (std::size_t i = 0; i < data.size(); ++i) (in_train[i] ? train : test).items.push_back(data.items[i]);
  return {std::move(train), std::move(test)};
}

Dataset relabel(const Dataset& data, const LabelSpace& labels) {
  Dataset out = data;
  out.labels = labels;
  for (auto& item : out.items) {
    const auto& name = data.labels.name(item.label);
    if (!labels.contains(name)) throw DataError("label '" + name + "' is not among the training labels");
    item.label = labels.index(name);
  }
  return out;
}

Dataset head(const Dataset& data, std::size_t n) {
  if (n == 0 || n >= data.size()) return data;
  Dataset out;
  out.labels = data.labels;
  out.kind = data.kind;
  out.provenance = data.provenance;
  out.attribute_names = data.attribute_names;
  out.provenance.note += (out.provenance.note.empty() ? "" : "; ") + std::string("first ") + std::to_string(n);
  out.items.assign(data.items.begin(), data.items.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace ip
