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

#include "ip/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "ip/information.hpp"

namespace ip {

void TerminationConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be a finite value >= 0");
  if (window < 1) throw std::invalid_argument("stability window must be at least 1");
}

std::size_t TerminationConfig::budget(std::size_t query_count) const {
  return max_queries == 0 ? query_count : std::min(max_queries, query_count);
}

const char* to_string(TerminationKind k) {
  return k == TerminationKind::confidence ? "confidence" : "mutual_information";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::confidence_stable: return "confidence_stable";
    case StopReason::mi_stable: return "mi_stable";
    case StopReason::query_budget_exhausted: return "query_budget_exhausted";
    case StopReason::error: return "error";
  }
  return "?";
}

StopReason parse_stop_reason(const std::string& s) {
  for (auto r : {StopReason::confidence_stable, StopReason::mi_stable, StopReason::query_budget_exhausted,
                 StopReason::error})
    if (s == to_string(r)) return r;
  throw DataError("unknown stop reason: " + s);
}

History ExplanationTrace::history() const {
  History h;
  for (const auto& s : steps) h = h.extended(s.query, s.answer);
  return h;
}

History ExplanationTrace::explanation() const {
  History h;
  for (std::size_t i = 0; i < explanation_length && i < steps.size(); ++i) h = h.extended(steps[i].query, steps[i].answer);
  return h;
}

Selection select_from_scores(std::vector<double> scores, const History& history) {
  Selection sel;
  bool found = false;
  double best = 0.0;
  for (QueryId q = 0; q < scores.size(); ++q) {
    if (history.contains(q)) {
      scores[q] = 0.0;
    } else if (!found || scores[q] > best) {
      best = scores[q];
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("every query has already been asked");
  sel.max_mi_bits = best;
  for (QueryId q = 0; q < scores.size(); ++q) {
    if (!history.contains(q) && scores[q] >= best - kMiTieTolerance) {
      sel.query = q;
      sel.mi_bits = scores[q];
      break;
    }
  }
  sel.scores = std::move(scores);
  return sel;
}

namespace {

std::vector<QueryId> unasked(const QuerySet& qset, const History& history) {
  std::vector<QueryId> out;
  for (QueryId q = 0; q < qset.size(); ++q)
    if (!history.contains(q)) out.push_back(q);
  return out;
}

std::vector<double> full_scores(const InferenceState& state, const QuerySet& qset, bool screened = false) {
  const auto cand = unasked(qset, state.history());
  const auto s = screened ? state.selection_scores(cand) : state.score(cand);
  std::vector<double> scores(qset.size(), 0.0);
  for (std::size_t i = 0; i < cand.size(); ++i) scores[cand[i]] = s[i];
  return scores;
}

bool condition_holds(const TerminationConfig& term, const Posterior& post, double max_mi, bool any_unasked) {
  if (term.kind == TerminationKind::confidence) return post.max() >= 1.0 - term.epsilon;
  return !any_unasked || max_mi <= term.epsilon;
}

void finish(ExplanationTrace& t, const TerminationConfig& term, StopReason reason) {
  t.stop_reason = reason;
  const std::size_t m = t.steps.size();
  if (reason == StopReason::query_budget_exhausted || reason == StopReason::error)
    t.explanation_length = m;
  else
    t.explanation_length = m + 1 - term.required_run();
  for (std::size_t i = 0; i < m; ++i) t.steps[i].in_window = i >= t.explanation_length;
  t.predicted_label = t.posterior_at(m).argmax();
}

}  // namespace

Selection select_next_query(const InferenceState& state, const QuerySet& qset) {
  return select_from_scores(full_scores(state, qset), state.history());
}

Selection select_next_query(const GenerativeModel& model, const QuerySet& qset, const History& history,
                            const InferenceOptions& opts) {
  auto state = model.start(qset, opts);
  for (const auto& s : history.steps()) state->condition(s.query, s.answer);
  return select_next_query(*state, qset);
}

std::vector<double> first_step_scores(const GenerativeModel& model, const QuerySet& qset,
                                      const InferenceOptions& opts) {
  return full_scores(*model.start(qset, opts), qset);
}

ExplanationTrace run_ip(const GenerativeModel& model, const QuerySet& qset, const Instance& instance,
                        const TerminationConfig& term, const PursuitOptions& opts) {
  term.validate();
  model.check_compatible(qset);
  auto state = model.start(qset, opts.inference);
  ExplanationTrace t;
  t.instance_id = instance.id;
  t.prior = state->posterior();
  const std::size_t budget = term.budget(qset.size());
  std::size_t run = 0;
  for (;;) {
    const std::size_t m = t.steps.size();
    const bool any_unasked = m < qset.size();
    std::vector<double> scores;
    double max_mi = 0.0;
    // Scores are needed to pick the next query and, for the MI rule, to test
    // the condition. The confidence rule is tested first so a stopping
    // evaluation scores nothing.
    const bool may_ask = any_unasked && m < budget;
    const bool mi_kind = term.kind == TerminationKind::mutual_information;
    const bool stops = !mi_kind && (condition_holds(term, state->posterior(), 0.0, any_unasked) ? run + 1 : 0) >=
                                       term.required_run();
    if (any_unasked && !stops && (may_ask || mi_kind)) {
      if (m == 0 && opts.first_scores && opts.first_scores->size() == qset.size())
        scores = *opts.first_scores;
      else
        scores = full_scores(*state, qset, true);
      for (QueryId q = 0; q < qset.size(); ++q)
        if (!state->history().contains(q)) max_mi = std::max(max_mi, scores[q]);
    }
    t.final_max_mi = max_mi;
    run = condition_holds(term, state->posterior(), max_mi, any_unasked) ? run + 1 : 0;
    if (run >= term.required_run()) {
      finish(t, term,
             term.kind == TerminationKind::confidence ? StopReason::confidence_stable : StopReason::mi_stable);
      return t;
    }
    if (!may_ask) {
      finish(t, term, StopReason::query_budget_exhausted);
      return t;
    }
    const auto sel = select_from_scores(std::move(scores), state->history());
    Answer a = qset.answer(instance, sel.query);
    state->condition(sel.query, a);
    t.steps.push_back({m + 1, sel.query, std::move(a), sel.mi_bits, sel.max_mi_bits, state->posterior(), false});
  }
}

std::vector<ExplanationTrace> run_ip_batch(const GenerativeModel& model, const QuerySet& qset,
                                           const std::vector<LabeledInstance>& items,
                                           const TerminationConfig& term, const PursuitOptions& opts,
                                           int workers) {
  term.validate();
  model.check_compatible(qset);
  std::vector<ExplanationTrace> out(items.size());
  const auto n = static_cast<std::ptrdiff_t>(items.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  // With several workers, each instance scores its queries serially.
  PursuitOptions per = opts;
  if (threads > 1 && per.inference.mode == ExecutionMode::parallel) per.inference.mode = ExecutionMode::serial;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& item = items[i];
    try {
      out[i] = run_ip(model, qset, item.instance, term, per);
    } catch (const std::exception& e) {
      ExplanationTrace t;
      t.instance_id = item.instance.id;
      t.prior = model.prior();
      t.error = e.what();
      finish(t, term, StopReason::error);
      out[i] = std::move(t);
    }
    out[i].true_label = item.label;
  }
  return out;
}

ExplanationTrace retarget(const ExplanationTrace& trace, const TerminationConfig& from, const TerminationConfig& to) {
  to.validate();
  if (from.kind != to.kind || from.window != to.window || from.max_queries != to.max_queries)
    throw std::invalid_argument("retarget only changes epsilon");
  if (to.epsilon < from.epsilon) throw std::invalid_argument("retarget needs an epsilon no smaller than the original");
  if (trace.stop_reason == StopReason::error) return trace;
  // Recover the evaluation sequence: the MI of step m + 1 is the largest score
  // at m, and final_max_mi covers the last evaluation. With no query left it
  // is 0, which satisfies every MI threshold just as the empty candidate set does.
  ExplanationTrace t = trace;
  const std::size_t m_end = trace.steps.size();
  std::size_t run = 0;
  for (std::size_t m = 0; m <= m_end; ++m) {
    const double max_mi = m < m_end ? trace.steps[m].max_mi_bits : trace.final_max_mi;
    run = condition_holds(to, trace.posterior_at(m), max_mi, true) ? run + 1 : 0;
    if (run >= to.required_run()) {
      t.steps.resize(m);
      t.final_max_mi = to.kind == TerminationKind::mutual_information ? max_mi : 0.0;
      finish(t, to, to.kind == TerminationKind::confidence ? StopReason::confidence_stable : StopReason::mi_stable);
      return t;
    }
  }
  finish(t, to, trace.stop_reason);
  return t;
}

TraceSummary summarize(const std::vector<ExplanationTrace>& traces, const QuerySet& qset) {
  TraceSummary s;
  s.count = traces.size();
  if (traces.empty()) return s;
  double len = 0.0, correct = 0.0, revealed = 0.0;
  for (const auto& t : traces) {
    len += static_cast<double>(t.explanation_length);
    correct += t.correct() ? 1.0 : 0.0;
    const auto obs = observed_primitives(qset, t.explanation());
    revealed += static_cast<double>(std::count_if(obs.begin(), obs.end(), [](std::int8_t v) { return v >= 0; }));
    ++s.stops[static_cast<int>(t.stop_reason)];
  }
  const double n = static_cast<double>(traces.size());
  s.mean_length = len / n;
  s.accuracy = correct / n;
  s.mean_revealed = revealed / n;
  return s;
}

double check_lemma1_termination(const TabularJointModel& model, const QuerySet& qset, const History& history) {
  double best = 0.0;
  for (QueryId q = 0; q < qset.size(); ++q) {
    if (history.contains(q)) continue;
    best = std::max(best, mutual_information(model.estimate_joint(qset, q, history, {})));
  }
  return best;
}

}  // namespace ip
