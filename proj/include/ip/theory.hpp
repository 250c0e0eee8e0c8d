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
#include <string>
#include <vector>

#include "ip/core.hpp"
#include "ip/data.hpp"
#include "ip/models.hpp"
#include "ip/pursuit.hpp"
#include "ip/querysets.hpp"

namespace ip {

struct StrategyEvaluation {
  /// Mean number of queries over the instances, each weighted 1/n.
  double expected_length = 0.0;
  /// Mean KL(p(Y | x) || p(Y | explanation of x)) in bits.
  double sufficiency_gap = 0.0;
  /// Decision-tree form, e.g. "q2{0:stop,1:q0{0:stop,1:stop}}".
  std::string description;
};

/// KL budget resolution of the exhaustive search, in bits.
inline constexpr double kKlBudgetUnit = 1e-4;

/// Shortest expected explanation with mean KL at most epsilon over the
/// model's own instances (uniform weight), by dynamic programming over
/// (consistent instance set, remaining KL budget). Limited to |Q| <= 8 and
/// |X| <= 64.
StrategyEvaluation exhaustive_optimal_strategy(const TabularJointModel& model, const QuerySet& qset, double epsilon);

/// Runs IP on every instance of the dataset and averages the explanation length.
StrategyEvaluation ip_expected_length(const GenerativeModel& model, const QuerySet& qset, const Dataset& data,
                                      const TerminationConfig& term, const PursuitOptions& opts = {});

/// Expected codeword length of the Huffman code of the prior (zero entries
/// dropped, ties merged in insertion order). corrupt_merge >= 0 replaces the
/// merge with that index by one of the smallest and the largest node; it exists
/// only to exercise the verification suite.
double huffman_expected_length(const Posterior& prior, int corrupt_merge = -1);

/// Expected number of queries of IP with one query per subset of labels: every
/// step asks for the subset whose mass within the active labels is closest to
/// 1/2 (ties to the smallest bitmask). At most 12 labels with positive mass.
double ip_complete_queryset_length(const Posterior& prior);

/// argmax_y p(y | every query answered), ties to the lowest label index.
LabelIndex map_using_full_q(const GenerativeModel& model, const QuerySet& qset, const Instance& instance,
                            const InferenceOptions& opts = {});

// ---------------------------------------------------------------------------

struct CartNode {
  bool leaf = true;
  LabelIndex label = 0;  // majority label of the node's training instances
  QueryId query = 0;
  std::size_t count = 0;
  /// Child node per answer index; -1 for answers no training instance took.
  std::vector<std::int32_t> children;
};

struct CartTree {
  std::vector<CartNode> nodes;  // nodes[0] is the root
  std::size_t depth() const;
  std::size_t leaves() const;
};

/// Greedy multiway splits on query answers by information gain. Impure nodes
/// split even when the best gain is zero; a node stays a leaf when it is pure,
/// at max_depth, or when no query separates its instances.
/// max_depth == 0 means unlimited; every child of a split needs min_leaf instances.
CartTree cart_train(const Dataset& data, const QuerySet& qset, std::size_t max_depth = 0, std::size_t min_leaf = 1);
LabelIndex cart_predict(const CartTree& tree, const QuerySet& qset, const Instance& instance);
double cart_accuracy(const CartTree& tree, const QuerySet& qset, const Dataset& data);

// ---------------------------------------------------------------------------

/// Binary attribute dataset with n instances over `queries` attributes and
/// `label_count` labels. The label is a random function of the attribute
/// vector (noise_free) or drawn independently per instance.
std::pair<Dataset, QuerySet> random_tabular(std::uint64_t seed, std::size_t n, std::size_t queries,
                                            std::size_t label_count, bool noise_free = true);

/// XOR toy: two attributes, label = a0 xor a1, all four inputs once.
std::pair<Dataset, QuerySet> xor_toy();

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t priors = 200;
  std::size_t max_labels = 10;
  std::size_t strategy_instances = 20;
  std::size_t lemma_histories = 20;
  bool corrupt_huffman = false;
};

struct VerifyCheck {
  std::string name;
  bool passed = true;
  /// Smallest slack seen; negative means a violation.
  double margin = 0.0;
  std::string detail;
};

struct PriorRow {
  std::vector<double> prior;
  double entropy = 0.0;
  double huffman = 0.0;
  double complete_ip = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::vector<PriorRow> priors;
  bool passed() const;
  std::string text() const;
};

VerifyReport run_verification(const VerifyOptions& opts);

/// Plain sort-and-merge Huffman cost used as the suite's reference.
double reference_huffman_cost(std::vector<double> weights);

}  // namespace ip
