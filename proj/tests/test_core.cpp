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
#include <set>

#include "doctest.h"
#include "ip/core.hpp"
#include "ip/information.hpp"
#include "ip/querysets.hpp"
#include "ip/text.hpp"

using namespace ip;

namespace {

BinaryImage image(std::uint32_t h, std::uint32_t w, std::vector<std::uint8_t> px) { return {h, w, std::move(px)}; }

// Direct I = sum p log2(p / (pa py)).
double mi_oracle(const std::vector<std::vector<double>>& t) {
  std::vector<double> pa(t.size(), 0.0), py(t[0].size(), 0.0);
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t y = 0; y < t[a].size(); ++y) {
      pa[a] += t[a][y];
      py[y] += t[a][y];
    }
  double s = 0.0;
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t y = 0; y < t[a].size(); ++y)
      if (t[a][y] > 0) s += t[a][y] * std::log2(t[a][y] / (pa[a] * py[y]));
  return s;
}

JointTable table(const std::vector<std::vector<double>>& t) {
  JointTable j(t.size(), t[0].size());
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t y = 0; y < t[a].size(); ++y) j.at(a, y) = t[a][y];
  return j;
}

}  // namespace

TEST_CASE("label space") {
  LabelSpace ls({"cat", "dog", "emu"});
  CHECK(ls.size() == 3);
  CHECK(ls.index("dog") == 1);
  CHECK(ls.name(2) == "emu");
  CHECK_THROWS_AS(ls.index("yak"), DataError);
  CHECK_THROWS(LabelSpace({"a"}));
  CHECK_THROWS(LabelSpace({"a", "a"}));
}

TEST_CASE("answer index puts slot 0 first") {
  Answer a{1, 0, 1};
  CHECK(a.index(2) == 5);
  CHECK(Answer::from_index(5, 3, 2) == a);
  CHECK(Answer::from_index(0, 9, 2) == Answer(std::vector<std::uint8_t>(9, 0)));
}

TEST_CASE("history") {
  History h;
  auto h1 = h.extended(2, Answer{1});
  auto h2 = h1.extended(0, Answer{0});
  CHECK(h2.size() == 2);
  CHECK(h2.contains(0));
  CHECK_FALSE(h2.contains(1));
  CHECK_THROWS_AS(static_cast<void>(h2.extended(2, Answer{0})), std::invalid_argument);
  auto h3 = History().extended(0, Answer{0}).extended(2, Answer{1});
  CHECK(h2.same_pairs(h3));
  CHECK_FALSE(h2 == h3);
}

TEST_CASE("posterior") {
  auto p = Posterior::from_weights({1.0, 3.0});
  CHECK(p[1] == doctest::Approx(0.75));
  CHECK(p.argmax() == 1);
  CHECK(Posterior::uniform(4).argmax() == 0);
  CHECK(Posterior::uniform(8).entropy_bits() == doctest::Approx(3.0));
  CHECK_THROWS_AS(Posterior::from_weights({0.0, 0.0}), DegenerateHistory);
  CHECK_THROWS(Posterior({0.5, 0.6}));
  std::vector<double> lw{-1000.0, -1000.0 + std::log(3.0)};
  CHECK(Posterior::from_log_weights(lw)[1] == doctest::Approx(0.75));
}

TEST_CASE("mutual information examples") {
  CHECK(mutual_information(table({{0.06, 0.14}, {0.24, 0.56}})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mutual_information(table({{0.5, 0.0}, {0.0, 0.5}})) == doctest::Approx(1.0));
  const std::vector<std::vector<double>> t{{0.2, 0.1, 0.1}, {0.05, 0.25, 0.3}};
  CHECK(mutual_information(table(t)) == doctest::Approx(mi_oracle(t)).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information(table({{0.5, 0.6}})), std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(table({{-0.1, 1.1}})), std::invalid_argument);
}

TEST_CASE("entropy and kl") {
  std::vector<double> p{0.5, 0.25, 0.125, 0.125};
  CHECK(entropy_bits(p) == doctest::Approx(1.75));
  std::vector<double> q{0.25, 0.25, 0.25, 0.25};
  CHECK(kl_divergence_bits(p, q) == doctest::Approx(2.0 - 1.75));
  CHECK(kl_divergence_bits(p, p) == doctest::Approx(0.0));
  std::vector<double> z{1.0, 0.0, 0.0, 0.0};
  CHECK(std::isinf(kl_divergence_bits(p, z)));
}

TEST_CASE("patch query set geometry") {
  auto qs = build_patch_queryset(28, 28, 3);
  CHECK(qs.size() == 676);
  CHECK(qs.query(0).arity == 9);
  CHECK(qs.query(0).answer_cardinality == 2);
  auto px = covered_pixels(qs, 0);
  CHECK(px == std::vector<std::uint32_t>{0, 1, 2, 28, 29, 30, 56, 57, 58});
  auto right = covered_pixels(qs, 1);
  std::set<std::uint32_t> a(px.begin(), px.end()), shared;
  for (auto p : right)
    if (a.count(p)) shared.insert(p);
  CHECK(shared.size() == 6);
  std::set<std::uint32_t> all;
  for (QueryId q = 0; q < qs.size(); ++q)
    for (auto p : covered_pixels(qs, q)) all.insert(p);
  CHECK(all.size() == 784);
  auto w1 = build_patch_queryset(28, 28, 1);
  CHECK(w1.size() == 784);
  std::set<std::uint32_t> part;
  for (QueryId q = 0; q < w1.size(); ++q) part.insert(covered_pixels(w1, q).at(0));
  CHECK(part.size() == 784);
}

TEST_CASE("patch answers read the bitmap row-major") {
  // Hand-written 4x4 bitmap.
  std::vector<std::uint8_t> px{1, 0, 0, 1,
                               0, 1, 1, 0,
                               1, 1, 0, 0,
                               0, 0, 1, 1};
  Instance inst{"toy", image(4, 4, px)};
  auto qs = build_patch_queryset(4, 4, 3);
  CHECK(qs.size() == 4);
  for (QueryId q = 0; q < 4; ++q) {
    const std::uint32_t r0 = q / 2, c0 = q % 2;
    std::vector<std::uint8_t> expect;
    for (std::uint32_t r = 0; r < 3; ++r)
      for (std::uint32_t c = 0; c < 3; ++c) expect.push_back(px[(r0 + r) * 4 + c0 + c]);
    CHECK(answer_query(qs, inst, q) == Answer(expect));
  }
  Instance zero{"z", image(28, 28, std::vector<std::uint8_t>(784, 0))};
  CHECK(answer_query(build_patch_queryset(28, 28, 3), zero, 123) == Answer(std::vector<std::uint8_t>(9, 0)));
  CHECK_THROWS_AS(answer_query(qs, Instance{"bad", AttributeVector{{1}}}, 0), DataError);
}

TEST_CASE("observed primitives is the union of asked patches") {
  auto qs = build_patch_queryset(5, 5, 3);
  std::vector<std::uint8_t> px(25, 0);
  px[6] = 1;
  Instance inst{"i", image(5, 5, px)};
  History h = History().extended(0, answer_query(qs, inst, 0)).extended(8, answer_query(qs, inst, 8));
  auto obs = observed_primitives(qs, h);
  std::set<std::uint32_t> expect;
  for (QueryId q : {0U, 8U})
    for (auto p : covered_pixels(qs, q)) expect.insert(p);
  for (std::uint32_t j = 0; j < 25; ++j) {
    CHECK((obs[j] >= 0) == (expect.count(j) == 1));
    if (obs[j] >= 0) CHECK(obs[j] == px[j]);
  }
  // Overlapping patch with a contradicting value.
  auto bad = h.extended(1, Answer(std::vector<std::uint8_t>(9, 1)));
  CHECK_THROWS_AS(observed_primitives(qs, bad), DegenerateHistory);
}

TEST_CASE("attribute query set") {
  auto qs = build_attribute_queryset({"red", "round", "big"});
  CHECK(qs.size() == 3);
  CHECK(qs.query(1).arity == 1);
  Instance inst{"x", AttributeVector{{0, 1, 1}}};
  CHECK(answer_query(qs, inst, 0) == Answer{0});
  CHECK(answer_query(qs, inst, 2) == Answer{1});
  CHECK_THROWS_AS(answer_query(qs, Instance{"y", AttributeVector{{1}}}, 0), DataError);
}

TEST_CASE("tokenizer and stemmer") {
  CHECK(text::tokenize("Hello, World! x2-ray") == std::vector<std::string>{"hello", "world", "x2", "ray"});
  const std::vector<std::pair<std::string, std::string>> cases{
      {"caresses", "caress"}, {"ponies", "poni"},      {"cats", "cat"},         {"relational", "relat"},
      {"hopping", "hop"},     {"running", "run"},      {"happy", "happi"},      {"generalizations", "gener"},
      {"agreed", "agre"},     {"motoring", "motor"},   {"conditional", "condit"}, {"controlling", "control"},
      {"rate", "rate"},       {"sky", "sky"},          {"a", "a"}};
  for (const auto& [w, s] : cases) CHECK_MESSAGE(text::porter_stem(w) == s, w);
  auto ts = text::stem_set("Cats and cats running");
  CHECK(ts.stems == std::vector<std::string>{"and", "cat", "run"});
}

TEST_CASE("word query set ranks by tf-idf") {
  // Hand computation: 4 docs, idf(w) = ln(4 / (1 + df)).
  const std::vector<std::string> corpus{"apple apple banana", "apple cherry", "banana cherry date", "egg"};
  // appl: tf 3, df 2 -> 3 ln(4/3) = 0.863; date, egg: ln 2 = 0.693;
  // banana, cherri: 2 ln(4/3) = 0.575. Ties lexicographic.
  auto qs = build_word_queryset(corpus, 3);
  REQUIRE(qs.size() == 3);
  CHECK(qs.names() == std::vector<std::string>{"appl", "date", "egg"});
  auto all = build_word_queryset(corpus, 100);
  CHECK(all.names() == std::vector<std::string>{"appl", "date", "egg", "banana", "cherri"});
  Instance doc{"d", text::stem_set("I like cherries and eggs")};
  CHECK(answer_query(all, doc, 4) == Answer{1});
  CHECK(answer_query(all, doc, 2) == Answer{1});
  CHECK(answer_query(all, doc, 0) == Answer{0});
}
