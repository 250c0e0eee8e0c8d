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

#include "ip/model_io.hpp"

#include <fstream>
#include <sstream>

namespace ip::io {

namespace {

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw DataError(std::string("model file lacks field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("model file field '") + key + "' has the wrong type");
  }
}

void expect_format(const json& doc, const char* format) {
  if (field<std::string>(doc, "format") != format)
    throw DataError(std::string("expected a file of format '") + format + "'");
  if (field<int>(doc, "version") != 1) throw DataError("unsupported model file version");
}

json labels_json(const LabelSpace& labels) {
  json out = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back(labels.name(static_cast<LabelIndex>(i)));
  return out;
}

}  // namespace

std::string dump(const json& value) { return value.dump(2) + "\n"; }

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(what + " is not valid JSON: " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

json to_json(const BernoulliMixtureModel& model, const json& config) {
  json doc;
  doc["format"] = "ip-model";
  doc["version"] = 1;
  doc["kind"] = "bernoulli_mixture";
  doc["labels"] = labels_json(model.labels());
  doc["components_per_class"] = model.components();
  doc["slots"] = model.slots();
  doc["theta_min"] = model.theta_min();
  doc["prior"] = std::vector<double>(model.prior_probs().begin(), model.prior_probs().end());
  doc["weights"] = std::vector<double>(model.weights().begin(), model.weights().end());
  doc["theta"] = std::vector<double>(model.theta().begin(), model.theta().end());
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

BernoulliMixtureModel mixture_from_json(const json& doc) {
  expect_format(doc, "ip-model");
  if (field<std::string>(doc, "kind") != "bernoulli_mixture") throw DataError("unknown model kind");
  return BernoulliMixtureModel(LabelSpace(field<std::vector<std::string>>(doc, "labels")),
                               field<std::size_t>(doc, "components_per_class"), field<std::size_t>(doc, "slots"),
                               field<std::vector<double>>(doc, "prior"), field<std::vector<double>>(doc, "weights"),
                               field<std::vector<double>>(doc, "theta"), field<double>(doc, "theta_min"));
}

json to_json(const LatentGaussianModel& model, const json& config) {
  const Decoder& dec = model.decoder();
  json doc;
  doc["format"] = "ip-decoder";
  doc["version"] = 1;
  doc["latent_dim"] = dec.latent_dim();
  doc["label_count"] = dec.label_count();
  doc["output_slots"] = dec.output_slots();
  doc["labels"] = labels_json(model.labels());
  const Posterior prior = model.prior();
  doc["prior"] = std::vector<double>(prior.probs().begin(), prior.probs().end());
  json layers = json::array();
  for (const auto& L : dec.layers())
    layers.push_back({{"activation", to_string(L.activation)},
                      {"in", L.in},
                      {"out", L.out},
                      {"weights", L.weights},
                      {"bias", L.bias}});
  doc["layers"] = layers;
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

LatentGaussianModel latent_from_json(const json& doc) {
  expect_format(doc, "ip-decoder");
  const auto latent_dim = field<std::size_t>(doc, "latent_dim");
  const auto label_count = field<std::size_t>(doc, "label_count");
  std::vector<DenseLayer> layers;
  for (const auto& l : field<json>(doc, "layers")) {
    DenseLayer L;
    L.activation = parse_activation(field<std::string>(l, "activation"));
    L.in = field<std::size_t>(l, "in");
    L.out = field<std::size_t>(l, "out");
    L.weights = field<std::vector<double>>(l, "weights");
    L.bias = field<std::vector<double>>(l, "bias");
    layers.push_back(std::move(L));
  }
  Decoder dec(latent_dim, label_count, std::move(layers));
  if (doc.contains("output_slots") && field<std::size_t>(doc, "output_slots") != dec.output_slots())
    throw DataError("decoder output_slots disagrees with its last layer");
  return LatentGaussianModel(LabelSpace(field<std::vector<std::string>>(doc, "labels")), std::move(dec),
                             field<std::vector<double>>(doc, "prior"));
}

void save_model(const std::string& path, const BernoulliMixtureModel& model, const json& config) {
  write_text_file(path, dump(to_json(model, config)));
}

void save_model(const std::string& path, const LatentGaussianModel& model, const json& config) {
  write_text_file(path, dump(to_json(model, config)));
}

std::unique_ptr<GenerativeModel> load_model(const std::string& path) {
  const json doc = read_json_file(path);
  const auto format = field<std::string>(doc, "format");
  if (format == "ip-model") return std::make_unique<BernoulliMixtureModel>(mixture_from_json(doc));
  if (format == "ip-decoder") return std::make_unique<LatentGaussianModel>(latent_from_json(doc));
  throw DataError(path + ": unknown model format '" + format + "'");
}

}  // namespace ip::io
