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
#include <random>

#include "doctest.h"
#include "ip/model_io.hpp"
#include "ip/models.hpp"

using namespace ip;

namespace {

Dataset attribute_data(const std::vector<std::vector<std::uint8_t>>& rows, const std::vector<LabelIndex>& ys,
                       std::size_t labels) {
  Dataset d;
  std::vector<std::string> names;
  for (std::size_t y = 0; y < labels; ++y) names.push_back("y" + std::to_string(y));
  d.labels = LabelSpace(names);
  d.kind = QueryKind::attribute;
  for (std::size_t j = 0; j < rows[0].size(); ++j) d.attribute_names.push_back("a" + std::to_string(j));
  for (std::size_t i = 0; i < rows.size(); ++i)
    d.items.push_back({Instance{"i" + std::to_string(i), AttributeVector{rows[i]}}, ys[i]});
  return d;
}

// Six instances, three attributes, three labels.
Dataset small_table() {
  return attribute_data({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 0}, {0, 0, 1}, {1, 1, 1}}, {0, 1, 2, 0, 1, 1}, 3);
}

InferenceOptions reference_opts() {
  InferenceOptions o;
  o.mode = ExecutionMode::reference;
  return o;
}

// Component weights p(y, k | observed) by direct enumeration.
std::vector<double> mixture_label_oracle(const BernoulliMixtureModel& m, const std::vector<std::int8_t>& obs) {
  std::vector<double> w(m.labels().size(), 0.0);
  for (LabelIndex y = 0; y < m.labels().size(); ++y)
    for (std::size_t k = 0; k < m.components(); ++k) {
      double p = m.prior_probs()[y] * m.weights()[y * m.components() + k];
      for (std::size_t j = 0; j < m.slots(); ++j)
        if (obs[j] >= 0) p *= obs[j] ? m.theta(y, k, j) : 1 - m.theta(y, k, j);
      w[y] += p;
    }
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  return w;
}

BernoulliMixtureModel random_mixture(std::uint64_t seed, std::size_t L, std::size_t K, std::size_t d) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<std::string> names;
  std::vector<double> prior(L), weights(L * K), theta(L * K * d);
  double ps = 0.0;
  for (std::size_t y = 0; y < L; ++y) {
    names.push_back(std::to_string(y));
    prior[y] = u(gen);
    ps += prior[y];
    double ws = 0.0;
    for (std::size_t k = 0; k < K; ++k) ws += weights[y * K + k] = u(gen);
    for (std::size_t k = 0; k < K; ++k) weights[y * K + k] /= ws;
  }
  for (double& p : prior) p /= ps;
  for (double& t : theta) t = u(gen);
  return BernoulliMixtureModel(LabelSpace(names), K, d, prior, weights, theta);
}

}  // namespace

TEST_CASE("tabular smoothing matches the counting formula") {
  const auto data = small_table();
  const auto qs = build_attribute_queryset(data.attribute_names);
  const double alpha = 0.5;
  TabularJointModel m(data, qs, alpha);
  CHECK(m.size() == 6);
  // Prior: counts (2, 3, 1) over 6.
  const auto prior = m.prior();
  CHECK(prior[0] == doctest::Approx((2 + alpha) / (6 + 3 * alpha)));
  CHECK(prior[2] == doctest::Approx((1 + alpha) / (6 + 3 * alpha)));
  // S = {a0 = 1}: C = {0, 1, 3, 5} with label counts (2, 2, 0).
  History h = History().extended(0, Answer{1});
  auto post = m.posterior(qs, h, {});
  const double den = 4 + 3 * alpha;
  CHECK(post[0] == doctest::Approx((2 + alpha) / den));
  CHECK(post[1] == doctest::Approx((2 + alpha) / den));
  CHECK(post[2] == doctest::Approx(alpha / den));
  // q = a2 over C: label 0 has a2 = (1, 0); label 1 has (0, 1); label 2 none.
  auto j = m.estimate_joint(qs, 2, h, {});
  CHECK(j.at(1, 0) == doctest::Approx(post[0] * (1 + alpha) / (2 + 2 * alpha)));
  CHECK(j.at(0, 1) == doctest::Approx(post[1] * (1 + alpha) / (2 + 2 * alpha)));
  CHECK(j.at(1, 2) == doctest::Approx(post[2] * 0.5));
  CHECK(j.total() == doctest::Approx(1.0));
  CHECK(m.consistent(h) == std::vector<std::size_t>{0, 1, 3, 5});
}

TEST_CASE("tabular filtering equals the from-scratch posterior without smoothing") {
  const auto data = small_table();
  const auto qs = build_attribute_queryset(data.attribute_names);
  TabularJointModel m(data, qs, 0.0);
  for (const auto& item : data.items) {
    auto st = m.start(qs, {});
    History h;
    for (QueryId q : {2U, 0U, 1U}) {
      const auto a = qs.answer(item.instance, q);
      st->condition(q, a);
      h = h.extended(q, a);
      const auto direct = m.posterior(qs, h, {});
      for (std::size_t y = 0; y < 3; ++y) CHECK(std::abs(st->posterior()[y] - direct[y]) <= 1e-12);
    }
    CHECK(st->posterior()[item.label] > 0.0);
  }
  // No instance is consistent with this history.
  History empty = History().extended(0, Answer{0}).extended(1, Answer{1}).extended(2, Answer{0});
  CHECK_THROWS_AS(m.posterior(qs, empty, {}), DegenerateHistory);
}

TEST_CASE("single component mixture answers with theta") {
  std::vector<double> theta{0.2, 0.7, 0.9, 0.4};
  BernoulliMixtureModel m(LabelSpace({"a", "b"}), 1, 2, {0.25, 0.75}, {1.0, 1.0}, theta);
  auto qs = build_attribute_queryset({"p", "q"});
  auto st = m.start(qs, reference_opts());
  auto j = st->joint(1);
  CHECK(j.at(1, 0) == doctest::Approx(0.25 * 0.7));
  CHECK(j.at(0, 1) == doctest::Approx(0.75 * 0.6));
}

TEST_CASE("two component mixture answer probability") {
  // Label a: weights (0.6, 0.4), theta (0.9, 0.3) -> p(on | a) = 0.54 + 0.12 = 0.66.
  BernoulliMixtureModel m(LabelSpace({"a", "b"}), 2, 1, {0.5, 0.5}, {0.6, 0.4, 0.5, 0.5}, {0.9, 0.3, 0.1, 0.1});
  auto qs = build_attribute_queryset({"p"});
  auto j = m.start(qs, reference_opts())->joint(0);
  CHECK(j.at(1, 0) / 0.5 == doctest::Approx(0.66));
  CHECK(j.at(1, 1) / 0.5 == doctest::Approx(0.1));
}

TEST_CASE("mixture conditioning matches enumeration on overlapping patches") {
  const auto m = random_mixture(4, 3, 3, 16);
  const auto qs = build_patch_queryset(4, 4, 2);
  BinaryImage img{4, 4, {1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1}};
  Instance inst{"x", img};
  for (auto mode : {ExecutionMode::reference, ExecutionMode::serial, ExecutionMode::parallel}) {
    InferenceOptions o;
    o.mode = mode;
    auto st = m.start(qs, o);
    std::vector<std::int8_t> obs(16, -1);
    for (QueryId q : {4U, 5U, 0U}) {
      st->condition(q, qs.answer(inst, q));
      for (auto p : covered_pixels(qs, q)) obs[p] = static_cast<std::int8_t>(img.pixels[p]);
      const auto expect = mixture_label_oracle(m, obs);
      for (std::size_t y = 0; y < 3; ++y) CHECK(st->posterior()[y] == doctest::Approx(expect[y]).epsilon(1e-10));
    }
    // Patch 1 shares two observed pixels; contradicting answers get zero.
    auto j = st->joint(1);
    const auto sl = qs.slots(1);
    double total = 0.0;
    for (std::size_t a = 0; a < j.answers(); ++a) {
      const auto ans = Answer::from_index(a, 4, 2);
      bool agrees = true;
      for (std::size_t s = 0; s < 4; ++s)
        if (obs[sl[s]] >= 0 && obs[sl[s]] != ans[s]) agrees = false;
      for (std::size_t y = 0; y < 3; ++y) {
        if (!agrees) CHECK(j.at(a, y) == 0.0);
        total += j.at(a, y);
      }
    }
    CHECK(total == doctest::Approx(1.0));
    auto full_obs = std::vector<std::int8_t>(img.pixels.begin(), img.pixels.end());
    const auto full = m.full_posterior(qs, inst, o);
    const auto expect = mixture_label_oracle(m, full_obs);
    for (std::size_t y = 0; y < 3; ++y) CHECK(full[y] == doctest::Approx(expect[y]).epsilon(1e-10));
  }
}

TEST_CASE("mixture scoring modes agree") {
  const auto m = random_mixture(9, 4, 2, 25);
  const auto qs = build_patch_queryset(5, 5, 3);
  std::vector<QueryId> all(qs.size());
  for (QueryId q = 0; q < qs.size(); ++q) all[q] = q;
  std::vector<std::vector<double>> out;
  for (auto mode : {ExecutionMode::reference, ExecutionMode::serial, ExecutionMode::parallel}) {
    InferenceOptions o;
    o.mode = mode;
    auto st = m.start(qs, o);
    st->condition(4, Answer(std::vector<std::uint8_t>{1, 0, 1, 1, 0, 0, 1, 0, 1}));
    out.push_back(st->score(all));
  }
  for (QueryId q = 0; q < qs.size(); ++q) {
    CHECK(std::abs(out[1][q] - out[0][q]) <= 1e-9);
    CHECK(std::abs(out[2][q] - out[0][q]) <= 1e-9);
  }
  CHECK(out[0][4] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mixture rejects malformed parameters") {
  CHECK_THROWS(BernoulliMixtureModel(LabelSpace({"a", "b"}), 1, 1, {0.5, 0.5}, {1.0, 1.0}, {0.5}));
  CHECK_THROWS(BernoulliMixtureModel(LabelSpace({"a", "b"}), 1, 1, {0.7, 0.5}, {1.0, 1.0}, {0.5, 0.5}));
  CHECK_THROWS(BernoulliMixtureModel(LabelSpace({"a", "b"}), 1, 1, {0.5, 0.5}, {1.0, 1.0}, {1.5, 0.5}));
  BernoulliMixtureModel m(LabelSpace({"a", "b"}), 1, 2, {0.5, 0.5}, {1.0, 1.0}, {0.5, 0.5, 0.5, 0.5});
  CHECK_THROWS_AS(m.check_compatible(build_attribute_queryset({"x", "y", "z"})), std::invalid_argument);
}

TEST_CASE("patch answer probability") {
  std::vector<double> on(9, 0.5);
  std::vector<std::uint32_t> px{0, 1, 2, 3, 4, 5, 6, 7, 8};
  Answer a{1, 0, 1, 0, 1, 0, 1, 0, 1};
  std::vector<std::int8_t> all_obs{1, 0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(patch_answer_prob(on, px, a, all_obs) == 1.0);
  std::vector<std::int8_t> clash{0, 0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(patch_answer_prob(on, px, a, clash) == 0.0);
  std::vector<std::int8_t> four{1, 0, 1, 0, -1, -1, -1, -1, -1};
  CHECK(patch_answer_prob(on, px, a, four) == doctest::Approx(0.03125));
}

TEST_CASE("em with one component gives the clamped mean") {
  const std::size_t d = 4;
  std::vector<std::uint8_t> rows{1, 0, 1, 1,
                                 1, 0, 0, 1,
                                 1, 0, 1, 1,
                                 1, 0, 0, 1};
  EmOptions o;
  o.components = 1;
  o.theta_min = 1e-3;
  auto fit = em_fit_class(rows, d, o, 1);
  REQUIRE(fit.theta.size() == d);
  CHECK(fit.theta[0] == doctest::Approx(1 - 1e-3));
  CHECK(fit.theta[1] == doctest::Approx(1e-3));
  CHECK(fit.theta[2] == doctest::Approx(0.5));
  CHECK(fit.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("em recovers two well separated components") {
  const std::size_t d = 20, n = 2000;
  std::mt19937_64 gen(17);
  std::bernoulli_distribution pick(0.3);
  std::vector<std::uint8_t> rows(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const bool b = pick(gen);
    for (std::size_t j = 0; j < d; ++j) {
      const double t = ((j < d / 2) != b) ? 0.85 : 0.1;
      rows[i * d + j] = std::bernoulli_distribution(t)(gen);
    }
  }
  EmOptions o;
  o.components = 2;
  o.max_iters = 200;
  o.tol = 1e-10;
  auto fit = em_fit_class(rows, d, o, 5);
  const std::size_t b = fit.theta[0] > 0.5 ? 1 : 0;  // component with low first half
  CHECK(std::abs(fit.weights[b] - 0.3) <= 0.05);
  for (std::size_t j = 0; j < d; ++j) {
    const double tb = (j < d / 2) ? 0.1 : 0.85;
    const double ta = (j < d / 2) ? 0.85 : 0.1;
    CHECK(std::abs(fit.theta[b * d + j] - tb) <= 0.05);
    CHECK(std::abs(fit.theta[(1 - b) * d + j] - ta) <= 0.05);
  }
  for (std::size_t t = 1; t < fit.log_likelihood.size(); ++t)
    CHECK(fit.log_likelihood[t] >= fit.log_likelihood[t - 1] - 1e-8 * std::abs(fit.log_likelihood[t - 1]));
}

TEST_CASE("em fit over a dataset and model io round trip") {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<LabelIndex> ys;
  std::mt19937_64 gen(2);
  for (int i = 0; i < 60; ++i) {
    std::vector<std::uint8_t> r(6);
    const LabelIndex y = static_cast<LabelIndex>(i % 3);
    for (std::size_t j = 0; j < 6; ++j) r[j] = std::bernoulli_distribution(j / 2 == y ? 0.9 : 0.2)(gen);
    rows.push_back(r);
    ys.push_back(y);
  }
  const auto data = attribute_data(rows, ys, 3);
  const auto qs = build_attribute_queryset(data.attribute_names);
  EmOptions o;
  o.components = 2;
  o.seed = 3;
  auto fit = em_fit(data, qs, o);
  auto again = em_fit(data, qs, o);
  CHECK(fit.model == again.model);
  CHECK(fit.model.prior_probs()[1] == doctest::Approx(1.0 / 3));
  CHECK(fit.log_likelihood.size() == 3);
  for (const auto& ll : fit.log_likelihood)
    for (std::size_t t = 1; t < ll.size(); ++t) CHECK(ll[t] >= ll[t - 1] - 1e-8 * std::abs(ll[t - 1]));

  const auto doc = io::to_json(fit.model, io::json{{"seed", 3}});
  const auto text = io::dump(doc);
  const auto back = io::mixture_from_json(io::parse(text, "model"));
  CHECK(back == fit.model);
  CHECK(io::dump(io::to_json(back, io::json{{"seed", 3}})) == text);
  CHECK_THROWS_AS(io::mixture_from_json(io::json{{"format", "ip-model"}}), DataError);
}

TEST_CASE("latent model with a latent-blind decoder is a product model") {
  // Logits depend only on the label: slot j of label y has logit b[y][j].
  const std::size_t dim = 2, L = 2, d = 4;
  const double b[2][4] = {{2.0, -1.0, 0.5, 0.0}, {-1.5, 1.0, 0.0, 3.0}};
  DenseLayer layer;
  layer.in = dim + L;
  layer.out = d;
  layer.weights.assign(d * (dim + L), 0.0);
  layer.bias.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t y = 0; y < L; ++y) layer.weights[j * (dim + L) + dim + y] = b[y][j];
  Decoder dec(dim, L, {layer});
  CHECK(dec.ignores_latent());
  LatentGaussianModel m(LabelSpace({"u", "v"}), dec, {0.4, 0.6});
  const auto qs = build_patch_queryset(2, 2, 1);
  InferenceOptions o;
  o.mode = ExecutionMode::serial;
  o.sampler.burn_in = 10;
  o.sampler.n_samples = 40;
  o.sampler.chains = 2;
  o.sampler.seed = 9;
  auto st = m.start(qs, o);
  st->condition(0, Answer{1});
  st->condition(3, Answer{0});
  const double w0 = 0.4 * sigmoid(2.0) * (1 - sigmoid(0.0));
  const double w1 = 0.6 * sigmoid(-1.5) * (1 - sigmoid(3.0));
  CHECK(st->posterior()[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-10));
  auto j = st->joint(1);
  CHECK(j.at(1, 1) == doctest::Approx(st->posterior()[1] * sigmoid(1.0)).epsilon(1e-10));
  CHECK(j.at(0, 0) == doctest::Approx(st->posterior()[0] * (1 - sigmoid(-1.0))).epsilon(1e-10));

  const auto text = io::dump(io::to_json(m));
  CHECK(io::latent_from_json(io::parse(text, "decoder")) == m);
  CHECK_THROWS_AS(m.check_compatible(build_patch_queryset(3, 3, 1)), std::invalid_argument);
}
