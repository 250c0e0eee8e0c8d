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

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "ip/information.hpp"
#include "ip/pursuit.hpp"
#include "ip/theory.hpp"
#include "ip/trace_io.hpp"

using namespace ip;

namespace {

// Exact IP over a finite instance list with uniform weights, written from the
// counting definitions alone.
struct CountingOracle {
  std::vector<std::vector<std::uint8_t>> x;
  std::vector<LabelIndex> y;
  std::size_t labels = 0;

  std::vector<std::size_t> consistent(const std::map<QueryId, std::uint8_t>& h) const {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool ok = true;
      for (auto [q, a] : h) ok = ok && x[i][q] == a;
      if (ok) c.push_back(i);
    }
    return c;
  }
  std::vector<double> posterior(const std::vector<std::size_t>& c) const {
    std::vector<double> p(labels, 0.0);
    for (auto i : c) p[y[i]] += 1.0 / static_cast<double>(c.size());
    return p;
  }
  double mi(const std::vector<std::size_t>& c, QueryId q) const {
    double pay[2][16] = {}, pa[2] = {}, py[16] = {};
    const double w = 1.0 / static_cast<double>(c.size());
    for (auto i : c) {
      pay[x[i][q]][y[i]] += w;
      pa[x[i][q]] += w;
      py[y[i]] += w;
    }
    double s = 0.0;
    for (int a = 0; a < 2; ++a)
      for (std::size_t l = 0; l < labels; ++l)
        if (pay[a][l] > 0) s += pay[a][l] * std::log2(pay[a][l] / (pa[a] * py[l]));
    return s;
  }
  // Greedy trace for the confidence rule with window 1.
  std::pair<std::vector<QueryId>, std::vector<std::vector<double>>> trace(std::size_t inst, double eps) const {
    std::map<QueryId, std::uint8_t> h;
    std::vector<QueryId> qs;
    std::vector<std::vector<double>> posts;
    const auto nq = static_cast<QueryId>(x[0].size());
    for (;;) {
      const auto c = consistent(h);
      const auto p = posterior(c);
      if (*std::max_element(p.begin(), p.end()) >= 1 - eps || h.size() == nq) break;
      double bv = -1.0;
      for (QueryId q = 0; q < nq; ++q)
        if (!h.count(q)) bv = std::max(bv, mi(c, q));
      QueryId best = 0;
      while (h.count(best) || mi(c, best) < bv - kMiTieTolerance) ++best;
      h[best] = x[inst][best];
      qs.push_back(best);
      posts.push_back(posterior(consistent(h)));
    }
    return {qs, posts};
  }
};

CountingOracle oracle_of(const Dataset& d) {
  CountingOracle o;
  o.labels = d.labels.size();
  for (const auto& it : d.items) {
    o.x.push_back(std::get<AttributeVector>(it.instance.raw).bits);
    o.y.push_back(it.label);
  }
  return o;
}

Dataset attribute_data(const std::vector<std::vector<std::uint8_t>>& rows, const std::vector<LabelIndex>& ys,
                       std::size_t labels) {
  Dataset d;
  std::vector<std::string> names;
  for (std::size_t y = 0; y < labels; ++y) names.push_back("y" + std::to_string(y));
  d.labels = LabelSpace(names);
  for (std::size_t j = 0; j < rows[0].size(); ++j) d.attribute_names.push_back("a" + std::to_string(j));
  for (std::size_t i = 0; i < rows.size(); ++i)
    d.items.push_back({Instance{"i" + std::to_string(i), AttributeVector{rows[i]}}, ys[i]});
  return d;
}

BernoulliMixtureModel random_mixture(std::uint64_t seed, std::size_t L, std::size_t K, std::size_t d) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<std::string> names;
  std::vector<double> prior(L, 1.0 / static_cast<double>(L)), weights(L * K, 1.0 / static_cast<double>(K)),
      theta(L * K * d);
  for (std::size_t y = 0; y < L; ++y) names.push_back(std::to_string(y));
  for (double& t : theta) t = u(gen);
  return BernoulliMixtureModel(LabelSpace(names), K, d, prior, weights, theta);
}

Instance random_image(std::uint64_t seed, std::uint32_t h, std::uint32_t w) {
  std::mt19937_64 gen(seed);
  BinaryImage img{h, w, {}};
  for (std::uint32_t i = 0; i < h * w; ++i) img.pixels.push_back(static_cast<std::uint8_t>(gen() & 1U));
  return {"img" + std::to_string(seed), img};
}

TerminationConfig conf(double eps, std::size_t window = 1) {
  TerminationConfig t;
  t.kind = TerminationKind::confidence;
  t.epsilon = eps;
  t.window = window;
  return t;
}

TerminationConfig mi_rule(double eps, std::size_t window = 1) {
  TerminationConfig t;
  t.kind = TerminationKind::mutual_information;
  t.epsilon = eps;
  t.window = window;
  return t;
}

}  // namespace

TEST_CASE("first selection does not depend on the input") {
  const auto m = random_mixture(3, 3, 2, 36);
  const auto qs = build_patch_queryset(6, 6, 3);
  auto t = conf(0.01);
  t.max_queries = 2;
  const auto ref = run_ip(m, qs, random_image(100, 6, 6), t);
  PursuitOptions cached;
  const auto first = first_step_scores(m, qs, cached.inference);
  cached.first_scores = &first;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = random_image(s, 6, 6);
    const auto tr = run_ip(m, qs, inst, t);
    REQUIRE(!tr.steps.empty());
    CHECK(tr.steps[0].query == ref.steps[0].query);
    CHECK(tr.steps[0].mi_bits == ref.steps[0].mi_bits);
    const auto tc = run_ip(m, qs, inst, t, cached);
    CHECK(io::dump(io::trace_to_json(tc, m.labels())) == io::dump(io::trace_to_json(tr, m.labels())));
  }
}

TEST_CASE("screened selection gives the exact traces") {
  const auto m = random_mixture(9, 4, 3, 64);
  const auto qs = build_patch_queryset(8, 8, 4);
  PursuitOptions exact;
  exact.inference.mode = ExecutionMode::serial;
  exact.inference.prune.screen_floors.clear();
  PursuitOptions screened;
  screened.inference.mode = ExecutionMode::serial;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto inst = random_image(200 + s, 8, 8);
    const auto a = run_ip(m, qs, inst, conf(0.001), exact);
    const auto b = run_ip(m, qs, inst, conf(0.001), screened);
    CHECK(io::dump(io::trace_to_json(a, m.labels())) == io::dump(io::trace_to_json(b, m.labels())));
  }
}

TEST_CASE("a determining query is asked first and alone") {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<LabelIndex> ys;
  for (std::uint8_t v = 0; v < 8; ++v) {
    rows.push_back({static_cast<std::uint8_t>(v & 1), static_cast<std::uint8_t>((v >> 1) & 1),
                    static_cast<std::uint8_t>((v >> 2) & 1)});
    ys.push_back((v >> 1) & 1);
  }
  const auto d = attribute_data(rows, ys, 2);
  const auto qs = build_attribute_queryset(d.attribute_names);
  TabularJointModel m(d, qs, 0.0);
  const auto sel = select_next_query(m, qs, History());
  CHECK(sel.query == 1);
  CHECK(sel.mi_bits == doctest::Approx(1.0));
  CHECK(sel.scores[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& it : d.items) {
    const auto tr = run_ip(m, qs, it.instance, conf(0.01));
    CHECK(tr.explanation_length == 1);
    CHECK(tr.stop_reason == StopReason::confidence_stable);
    CHECK(tr.posterior_at(1).max() == 1.0);
    CHECK(tr.predicted_label == it.label);
  }
}

TEST_CASE("selection equals the brute-force MI maximizer") {
  const auto [d, qs] = random_tabular(21, 8, 5, 3, false);
  TabularJointModel m(d, qs, 0.0);
  const auto o = oracle_of(d);
  const auto all = o.consistent({});
  const auto sel = select_next_query(m, qs, History());
  double top = 0.0;
  for (QueryId q = 0; q < 5; ++q) {
    CHECK(sel.scores[q] == doctest::Approx(o.mi(all, q)).epsilon(1e-12));
    top = std::max(top, o.mi(all, q));
  }
  QueryId best = 0;
  while (o.mi(all, best) < top - kMiTieTolerance) ++best;
  CHECK(sel.query == best);
  // And after one answer.
  const auto a = o.x[0][best];
  const auto sel2 = select_next_query(m, qs, History().extended(best, Answer{a}));
  const auto c = o.consistent({{best, a}});
  for (QueryId q = 0; q < 5; ++q)
    if (q != best) CHECK(std::abs(sel2.scores[q] - o.mi(c, q)) <= 1e-12);
}

TEST_CASE("full traces equal the counting oracle") {
  const auto [d, qs] = random_tabular(5, 16, 5, 3, false);
  TabularJointModel m(d, qs, 0.0);
  const auto o = oracle_of(d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto tr = run_ip(m, qs, d.items[i].instance, conf(0.01));
    const auto [queries, posts] = o.trace(i, 0.01);
    REQUIRE(tr.steps.size() == queries.size());
    for (std::size_t k = 0; k < queries.size(); ++k) {
      CHECK(tr.steps[k].query == queries[k]);
      for (std::size_t y = 0; y < 3; ++y) CHECK(std::abs(tr.steps[k].posterior[y] - posts[k][y]) <= 1e-12);
    }
  }
}

TEST_CASE("xor is not stopped early by the MI rule") {
  const auto [d, qs] = xor_toy();
  TabularJointModel m(d, qs, 0.0);
  for (const auto& it : d.items) {
    const auto tr = run_ip(m, qs, it.instance, mi_rule(1e-6));
    CHECK(tr.steps.size() == 2);
    CHECK(tr.explanation_length == 2);
    CHECK(tr.predicted_label == it.label);
    CHECK(tr.steps[0].query == 0);  // both score 0; lowest id wins
    CHECK(tr.steps[1].mi_bits == doctest::Approx(1.0));
  }
}

TEST_CASE("MI window keeps asking and trims the window") {
  // q0 determines Y; q1, q2 carry nothing once q0 is known.
  const auto d = attribute_data({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}, {0, 0, 1, 1}, 2);
  const auto qs = build_attribute_queryset(d.attribute_names);
  TabularJointModel m(d, qs, 0.0);
  const auto tr = run_ip(m, qs, d.items[2].instance, mi_rule(1e-9, 2));
  // Holds at m = 1, 2, 3 (the last because nothing is left).
  CHECK(tr.steps.size() == 3);
  CHECK(tr.explanation_length == 1);
  CHECK(tr.stop_reason == StopReason::mi_stable);
  CHECK_FALSE(tr.steps[0].in_window);
  CHECK(tr.steps[1].in_window);
  CHECK(tr.steps[2].in_window);
  const auto c = run_ip(m, qs, d.items[2].instance, conf(0.0, 2));
  // Confidence holds at m = 1 and 2: L = 1, one window step.
  CHECK(c.steps.size() == 2);
  CHECK(c.explanation_length == 1);
  const auto u = run_ip(m, qs, d.items[2].instance, conf(-0.0));
  CHECK(u.explanation_length == 1);
  CHECK_THROWS_AS(run_ip(m, qs, d.items[2].instance, conf(-1.0)), std::invalid_argument);
}

TEST_CASE("budget exhaustion is a stop reason") {
  const auto [d, qs] = random_tabular(8, 30, 4, 3, false);
  TabularJointModel m(d, qs, 1e-3);
  auto t = conf(0.0);
  t.max_queries = 2;
  for (const auto& it : d.items) {
    const auto tr = run_ip(m, qs, it.instance, t);
    if (tr.stop_reason == StopReason::query_budget_exhausted) {
      CHECK(tr.steps.size() == 2);
      CHECK(tr.explanation_length == 2);
    }
    CHECK(tr.steps.size() <= 2);
  }
}

TEST_CASE("lemma 1 residual") {
  // History isolating one instance.
  const auto [d, qs] = random_tabular(2, 16, 6, 3, true);
  TabularJointModel m(d, qs, 0.0);
  const auto& x = std::get<AttributeVector>(d.items[0].instance.raw).bits;
  History full;
  for (QueryId q = 0; q < 6; ++q) {
    full = full.extended(q, Answer{x[q]});
    if (m.consistent(full).size() == 1) break;
  }
  REQUIRE(m.consistent(full).size() >= 1);
  if (m.consistent(full).size() == 1) CHECK(check_lemma1_termination(m, qs, full) <= 1e-12);

  // Two distinct instances with the same label mix after a0 = 1.
  const auto d2 = attribute_data({{1, 0, 0}, {1, 0, 0}, {1, 1, 1}, {1, 1, 1}, {0, 0, 1}, {0, 1, 0}},
                                 {0, 1, 0, 1, 0, 0}, 2);
  const auto q2 = build_attribute_queryset(d2.attribute_names);
  TabularJointModel m2(d2, q2, 0.0);
  const History h = History().extended(0, Answer{1});
  CHECK(m2.posterior(q2, h, {})[0] == doctest::Approx(0.5));
  CHECK(check_lemma1_termination(m2, q2, h) <= 1e-12);
  // Premise fails at the empty history: the residual is positive.
  CHECK(check_lemma1_termination(m2, q2, History()) > 1e-3);
}

TEST_CASE("MI bounds and data processing on patch answers") {
  const auto m = random_mixture(12, 3, 3, 25);
  const auto qs = build_patch_queryset(5, 5, 3);
  InferenceOptions o;
  o.mode = ExecutionMode::reference;
  auto st = m.start(qs, o);
  const auto inst = random_image(7, 5, 5);
  st->condition(4, qs.answer(inst, 4));
  st->condition(0, qs.answer(inst, 0));
  const double hy = st->posterior().entropy_bits();
  for (QueryId q = 0; q < qs.size(); ++q) {
    const auto j = st->joint(q);
    const double mi = mutual_information(j);
    const auto pa = j.answer_marginal();
    CHECK(mi >= 0.0);
    CHECK(mi <= std::min(entropy_bits(pa), hy) + 1e-9);
    // OR of the patch bits.
    JointTable coarse(2, 3);
    for (std::size_t a = 0; a < j.answers(); ++a)
      for (std::size_t y = 0; y < 3; ++y) coarse.at(a == 0 ? 0 : 1, y) += j.at(a, y);
    CHECK(mutual_information(coarse) <= mi + 1e-12);
  }
}

TEST_CASE("retarget equals direct runs") {
  const auto [d, qs] = random_tabular(13, 40, 6, 3, false);
  TabularJointModel m(d, qs, 0.05);
  for (auto kind : {TerminationKind::confidence, TerminationKind::mutual_information}) {
    for (std::size_t window : {1, 2}) {
      TerminationConfig base;
      base.kind = kind;
      base.window = window;
      base.epsilon = 1e-3;
      for (const auto& it : d.items) {
        const auto tight = run_ip(m, qs, it.instance, base);
        for (double eps : {0.01, 0.05, 0.2, 0.6}) {
          auto to = base;
          to.epsilon = eps;
          const auto direct = run_ip(m, qs, it.instance, to);
          const auto derived = retarget(tight, base, to);
          CHECK(io::dump(io::trace_to_json(derived, m.labels())) == io::dump(io::trace_to_json(direct, m.labels())));
        }
      }
    }
  }
  CHECK_THROWS_AS(retarget(run_ip(m, qs, d.items[0].instance, conf(0.1)), conf(0.1), conf(0.01)),
                  std::invalid_argument);
}

TEST_CASE("trace serialization round trip and determinism") {
  const auto m = random_mixture(4, 2, 2, 16);
  const auto qs = build_patch_queryset(4, 4, 2);
  std::vector<LabeledInstance> items;
  for (std::uint64_t s = 0; s < 6; ++s) items.push_back({random_image(s, 4, 4), static_cast<LabelIndex>(s % 2)});
  const auto a = run_ip_batch(m, qs, items, conf(0.05), {}, 1);
  const auto b = run_ip_batch(m, qs, items, conf(0.05), {}, 0);
  const io::json cfg{{"seed", 1}, {"labels", m.labels().names()}};
  const auto text = io::traces_to_jsonl(cfg, a, m.labels());
  CHECK(text == io::traces_to_jsonl(cfg, b, m.labels()));
  const auto back = io::traces_from_jsonl(text);
  CHECK(back.config == cfg);
  REQUIRE(back.traces.size() == a.size());
  CHECK(io::traces_to_jsonl(back.config, back.traces, m.labels()) == text);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(back.traces[i].steps.size() == a[i].steps.size());
    CHECK(back.traces[i].true_label == a[i].true_label);
    CHECK(back.traces[i].stop_reason == a[i].stop_reason);
  }
  CHECK(io::round9(0.1234567891234) == 0.123456789);
}

TEST_CASE("a failing instance is recorded and the batch continues") {
  const auto d = attribute_data({{0, 0}, {1, 1}}, {0, 1}, 2);
  const auto qs = build_attribute_queryset(d.attribute_names);
  TabularJointModel m(d, qs, 0.0);
  std::vector<LabeledInstance> items{d.items[0], {Instance{"odd", AttributeVector{{0, 1}}}, 1}, d.items[1]};
  const auto tr = run_ip_batch(m, qs, items, conf(0.0, 2));
  CHECK(tr[0].stop_reason != StopReason::error);
  CHECK(tr[1].stop_reason == StopReason::error);
  CHECK_FALSE(tr[1].error.empty());
  CHECK(tr[2].correct());
  const auto s = summarize(tr, qs);
  CHECK(s.count == 3);
  CHECK(s.stops[static_cast<int>(StopReason::error)] == 1);
}
