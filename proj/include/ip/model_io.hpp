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

#include <memory>
#include <string>

#include "ip/models.hpp"
#include "json.hpp"

namespace ip::io {

using json = nlohmann::json;

/// Canonical text of a JSON value: sorted keys, two-space indent, shortest
/// round-trip doubles, trailing newline.
std::string dump(const json& value);
json parse(const std::string& text, const std::string& what);
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"format": "ip-model", "kind": "bernoulli_mixture", ...}. A null config is omitted.
json to_json(const BernoulliMixtureModel& model, const json& config = nullptr);
BernoulliMixtureModel mixture_from_json(const json& doc);

/// {"format": "ip-decoder", "latent_dim", "labels", "prior", "layers": [...]}.
json to_json(const LatentGaussianModel& model, const json& config = nullptr);
LatentGaussianModel latent_from_json(const json& doc);

void save_model(const std::string& path, const BernoulliMixtureModel& model, const json& config = nullptr);
void save_model(const std::string& path, const LatentGaussianModel& model, const json& config = nullptr);

/// Loads either file kind; DataError on anything malformed.
std::unique_ptr<GenerativeModel> load_model(const std::string& path);

}  // namespace ip::io
