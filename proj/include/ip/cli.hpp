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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ip/model_io.hpp"
#include "ip/pursuit.hpp"
#include "ip/theory.hpp"

namespace ip::cli {

using io::json;

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kVerifyFailed = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuerySetSpec {
  QueryKind kind = QueryKind::patch;
  std::size_t param = 3;  // patch side or vocabulary size
};

struct ModelSpec {
  enum class Kind { tabular, mixture, latent } kind = Kind::mixture;
  std::size_t components = 8;
  std::string decoder_path;
};

struct RunConfig {
  std::string subcommand;
  std::string dataset;
  std::string test_dataset;
  std::string format = "idx";
  double threshold = 0.5;
  double train_fraction = 0.8;
  std::size_t limit_train = 0;
  std::size_t limit_test = 0;
  std::string category_map;
  std::string queryset_text = "patch:3";
  QuerySetSpec queryset;
  std::string model_text = "mixture:8";
  ModelSpec model;
  std::string model_file;
  std::size_t em_iters = 100;
  double em_tol = 1e-6;
  double alpha = 1e-3;
  std::string term_text = "conf:0.01:1";
  TerminationConfig term;
  std::vector<double> eps;
  std::size_t cart_depth = 0;
  std::size_t cart_min_leaf = 1;
  SamplerConfig sampler;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  bool corrupt_huffman = false;
  std::size_t verify_priors = 200;

  /// Parses the spec strings and checks cross-field compatibility; throws UsageError.
  void finalize();
  /// Every setting that affects results (not worker count or output paths).
  json echo() const;
};

QuerySetSpec parse_queryset(const std::string& text);
ModelSpec parse_model(const std::string& text);
TerminationConfig parse_term(const std::string& text);

/// Parses argv into a RunConfig; throws UsageError. Returns std::nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

int cmd_fit(const RunConfig& cfg, std::ostream& out);
int cmd_pursue(const RunConfig& cfg, std::ostream& out);
int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Parses, dispatches and maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ip::cli
