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
#include <optional>
#include <string>
#include <vector>

#include "ip/core.hpp"
#include "ip/models.hpp"
#include "ip/querysets.hpp"

namespace ip {

/// Queries scoring within this of the best are tied; the lowest id wins.
inline constexpr double kMiTieTolerance = 1e-12;

enum class TerminationKind { confidence, mutual_information };

/// Stopping rule. The condition is evaluated on the history after every
/// m = 0, 1, ... answers:
///   confidence: max_y p(y | S_m) >= 1 - epsilon, held for `window` evaluations in a row
///   mutual_information: max unasked-query MI <= epsilon bits, held for
///     window + 1 evaluations in a row (m = L .. L + window), so later
///     queries keep being asked while the window is checked.
/// max_queries == 0 means |Q|.
struct TerminationConfig {
  TerminationKind kind = TerminationKind::confidence;
  double epsilon = 0.01;
  std::size_t window = 1;
  std::size_t max_queries = 0;

  void validate() const;
  std::size_t budget(std::size_t query_count) const;
  /// Consecutive evaluations the condition must hold for.
  std::size_t required_run() const { return kind == TerminationKind::confidence ? window : window + 1; }
};

enum class StopReason { confidence_stable, mi_stable, query_budget_exhausted, error };

const char* to_string(TerminationKind k);
const char* to_string(StopReason r);
StopReason parse_stop_reason(const std::string& s);

struct TraceStep {
  std::size_t k = 0;  // 1-based position
  QueryId query = 0;
  Answer answer;
  double mi_bits = 0.0;      // MI of the selected query before it was asked
  double max_mi_bits = 0.0;  // largest unasked MI at that point, within the tie tolerance of mi_bits
  Posterior posterior;   // after the update
  bool in_window = false;
};

struct ExplanationTrace {
  std::string instance_id;
  Posterior prior;
  std::vector<TraceStep> steps;
  LabelIndex predicted_label = 0;
  std::optional<LabelIndex> true_label;
  StopReason stop_reason = StopReason::query_budget_exhausted;
  std::size_t explanation_length = 0;
  /// Largest MI over the queries still unasked after the last step (0 when none
  /// remain). Only the MI rule needs it; confidence runs leave it at 0.
  double final_max_mi = 0.0;
  std::string error;

  /// Posterior after the first `length` answers.
  const Posterior& posterior_at(std::size_t length) const { return length == 0 ? prior : steps[length - 1].posterior; }
  History history() const;
  History explanation() const;
  bool correct() const { return true_label && *true_label == predicted_label; }
};

struct Selection {
  QueryId query = 0;
  double mi_bits = 0.0;
  double max_mi_bits = 0.0;
  /// MI of every query, 0 for those already asked.
  std::vector<double> scores;
};

/// Argmax over unasked queries with ties to the lowest id.
Selection select_from_scores(std::vector<double> scores, const History& history);
Selection select_next_query(const InferenceState& state, const QuerySet& qset);
/// Replays the history through a fresh state of the model.
Selection select_next_query(const GenerativeModel& model, const QuerySet& qset, const History& history,
                            const InferenceOptions& opts = {});

/// Scores of the empty history, identical for every input; computing them once
/// and passing them to run_ip saves the most expensive step.
std::vector<double> first_step_scores(const GenerativeModel& model, const QuerySet& qset,
                                      const InferenceOptions& opts = {});

struct PursuitOptions {
  InferenceOptions inference;
  const std::vector<double>* first_scores = nullptr;
};

ExplanationTrace run_ip(const GenerativeModel& model, const QuerySet& qset, const Instance& instance,
                        const TerminationConfig& term, const PursuitOptions& opts = {});

/// One trace per labeled instance, in input order. Instances run in parallel on
/// `workers` threads (0 keeps the OpenMP default); a failing instance records
/// its error and the batch continues.
std::vector<ExplanationTrace> run_ip_batch(const GenerativeModel& model, const QuerySet& qset,
                                           const std::vector<LabeledInstance>& items,
                                           const TerminationConfig& term, const PursuitOptions& opts = {},
                                           int workers = 0);

/// Stopping point a looser rule of the same kind, window and budget would have
/// chosen on this trace. Query choice does not depend on epsilon, so a trace
/// run at the smallest epsilon yields the trace for every larger one.
ExplanationTrace retarget(const ExplanationTrace& trace, const TerminationConfig& from, const TerminationConfig& to);

struct TraceSummary {
  std::size_t count = 0;
  double mean_length = 0.0;
  double accuracy = 0.0;
  double mean_revealed = 0.0;  // primitives observed by the explanation
  std::size_t stops[4] = {0, 0, 0, 0};
};
TraceSummary summarize(const std::vector<ExplanationTrace>& traces, const QuerySet& qset);

/// Largest exact MI over the unasked queries of a tabular model.
double check_lemma1_termination(const TabularJointModel& model, const QuerySet& qset, const History& history);

}  // namespace ip
