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

#include <string>
#include <vector>

#include "ip/model_io.hpp"
#include "ip/pursuit.hpp"

namespace ip::io {

/// Nearest double to the 9-significant-digit decimal rendering of v.
double round9(double v);

/// One trace as a JSON object; labels are written by name, posteriors in
/// label order rounded to 9 significant digits.
json trace_to_json(const ExplanationTrace& trace, const LabelSpace& labels);
ExplanationTrace trace_from_json(const json& obj, const LabelSpace& labels);

/// JSON Lines: a {"config": ...} header line, then one trace per line.
std::string traces_to_jsonl(const json& config, const std::vector<ExplanationTrace>& traces,
                            const LabelSpace& labels);

struct TraceFile {
  json config;
  std::vector<ExplanationTrace> traces;
};
/// Labels come from config["labels"].
TraceFile traces_from_jsonl(const std::string& text);

}  // namespace ip::io
