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

#include "ip/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace ip::io {

double round9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

namespace {

json rounded(std::span<const double> p) {
  json out = json::array();
  for (double v : p) out.push_back(round9(v));
  return out;
}

Posterior posterior_from(const json& arr) {
  auto w = arr.get<std::vector<double>>();
  return Posterior::from_weights(std::move(w));
}

}  // namespace

json trace_to_json(const ExplanationTrace& trace, const LabelSpace& labels) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json answer = json::array();
    for (auto v : s.answer.values()) answer.push_back(static_cast<int>(v));
    steps.push_back({{"k", s.k},
                     {"query_id", s.query},
                     {"answer", answer},
                     {"mi_bits", round9(s.mi_bits)},
                     {"max_mi_bits", round9(s.max_mi_bits)},
                     {"posterior", rounded(s.posterior.probs())},
                     {"in_window", s.in_window}});
  }
  json obj = {{"instance_id", trace.instance_id},
              {"prior", rounded(trace.prior.probs())},
              {"steps", steps},
              {"predicted_label", labels.name(trace.predicted_label)},
              {"true_label", trace.true_label ? json(labels.name(*trace.true_label)) : json(nullptr)},
              {"stop_reason", to_string(trace.stop_reason)},
              {"explanation_length", trace.explanation_length},
              {"final_max_mi_bits", round9(trace.final_max_mi)}};
  if (!trace.error.empty()) obj["error"] = trace.error;
  return obj;
}

ExplanationTrace trace_from_json(const json& obj, const LabelSpace& labels) {
  try {
    ExplanationTrace t;
    t.instance_id = obj.at("instance_id").get<std::string>();
    t.prior = posterior_from(obj.at("prior"));
    for (const auto& s : obj.at("steps")) {
      TraceStep step;
      step.k = s.at("k").get<std::size_t>();
      step.query = s.at("query_id").get<QueryId>();
      step.answer = Answer(s.at("answer").get<std::vector<std::uint8_t>>());
      step.mi_bits = s.at("mi_bits").get<double>();
      step.max_mi_bits = s.value("max_mi_bits", step.mi_bits);
      step.posterior = posterior_from(s.at("posterior"));
      step.in_window = s.at("in_window").get<bool>();
      t.steps.push_back(std::move(step));
    }
    t.predicted_label = labels.index(obj.at("predicted_label").get<std::string>());
    if (!obj.at("true_label").is_null()) t.true_label = labels.index(obj.at("true_label").get<std::string>());
    t.stop_reason = parse_stop_reason(obj.at("stop_reason").get<std::string>());
    t.explanation_length = obj.at("explanation_length").get<std::size_t>();
    t.final_max_mi = obj.at("final_max_mi_bits").get<double>();
    if (obj.contains("error")) t.error = obj.at("error").get<std::string>();
    return t;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed trace: ") + e.what());
  }
}

std::string traces_to_jsonl(const json& config, const std::vector<ExplanationTrace>& traces,
                            const LabelSpace& labels) {
  std::string out = json{{"config", config}}.dump() + "\n";
  for (const auto& t : traces) out += trace_to_json(t, labels).dump() + "\n";
  return out;
}

TraceFile traces_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  TraceFile f;
  if (!std::getline(in, line)) throw DataError("empty trace file");
  const json header = parse(line, "trace header");
  if (!header.contains("config")) throw DataError("trace header lacks config");
  f.config = header.at("config");
  if (!f.config.contains("labels")) throw DataError("trace config lacks labels");
  const LabelSpace labels(f.config.at("labels").get<std::vector<std::string>>());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    f.traces.push_back(trace_from_json(parse(line, "trace line"), labels));
  }
  return f;
}

}  // namespace ip::io
