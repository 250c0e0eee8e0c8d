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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

#include "ip/rng.hpp"
#include "ip/theory.hpp"

namespace ip {

namespace {

double uniform01(rng::Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) { c_.name = std::move(name); c_.margin = std::numeric_limits<double>::infinity(); }
  // Records a slack that must not fall below -tol.
  void slack(double s, const std::string& where, double tol = 0.0) {
    if (s < c_.margin) {
      c_.margin = s;
      if (s < -tol) c_.detail = where;
    }
    if (s < -tol) c_.passed = false;
  }
  VerifyCheck done() {
    if (!std::isfinite(c_.margin)) c_.margin = 0.0;
    c_.margin += 0.0;  // no negative zero in reports
    return c_;
  }

 private:
  VerifyCheck c_;
};

Posterior random_prior(rng::Engine& eng, std::size_t max_labels, std::size_t i) {
  const std::size_t k = 2 + static_cast<std::size_t>(eng() % (max_labels - 1));
  std::vector<double> w(k);
  // Alternate flat and sharply skewed priors so both ends of the bound are exercised.
  const double power = (i % 3 == 0) ? 4.0 : 1.0;
  for (auto& v : w) v = std::pow(-std::log(1.0 - uniform01(eng)), power);
  return Posterior::from_weights(std::move(w));
}

}  // namespace

double reference_huffman_cost(std::vector<double> weights) {
  weights.erase(std::remove_if(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); }), weights.end());
  std::sort(weights.begin(), weights.end());
  std::deque<double> leaves(weights.begin(), weights.end()), merged;
  auto pop = [&]() {
    double v;
    if (merged.empty() || (!leaves.empty() && leaves.front() <= merged.front())) {
      v = leaves.front();
      leaves.pop_front();
    } else {
      v = merged.front();
      merged.pop_front();
    }
    return v;
  };
  double cost = 0.0;
  while (leaves.size() + merged.size() > 1) {
    const double w = pop() + pop();
    cost += w;
    merged.push_back(w);
  }
  return cost;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " margin=" << fmt(c.margin);
    if (!c.detail.empty()) out << " at " << c.detail;
    out << "\n";
  }
  out << "prior\tlabels\tH(Y)\thuffman\thuffman_margin_low\thuffman_margin_high\tcomplete_ip\tcomplete_margin_low"
         "\tcomplete_margin_high\n";
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const auto& r = priors[i];
    out << i << "\t" << r.prior.size() << "\t" << fmt(r.entropy) << "\t" << fmt(r.huffman) << "\t"
        << fmt(r.huffman - r.entropy) << "\t" << fmt(r.entropy + 1.0 - r.huffman) << "\t" << fmt(r.complete_ip)
        << "\t" << fmt(r.complete_ip - r.entropy) << "\t" << fmt(r.entropy + 1.0 - r.complete_ip) << "\n";
  }
  out << (passed() ? "verification passed" : "verification FAILED") << "\n";
  return out.str();
}

VerifyReport run_verification(const VerifyOptions& opts) {
  if (opts.max_labels < 2 || opts.max_labels > 12) throw std::invalid_argument("max_labels must lie in [2, 12]");
  VerifyReport rep;
  constexpr double tol = 1e-9;
  const int corrupt = opts.corrupt_huffman ? 0 : -1;

  {
    auto eng = rng::engine(opts.seed, "verify/priors");
    CheckBuilder hb("huffman_within_one_bit"), hr("huffman_matches_reference"), cb("divide_and_conquer_within_one_bit");
    for (std::size_t i = 0; i < opts.priors; ++i) {
      const auto prior = random_prior(eng, opts.max_labels, i);
      PriorRow row;
      row.prior.assign(prior.probs().begin(), prior.probs().end());
      row.entropy = prior.entropy_bits();
      row.huffman = huffman_expected_length(prior, corrupt);
      row.complete_ip = ip_complete_queryset_length(prior);
      const std::string where = "prior " + std::to_string(i);
      hb.slack(row.huffman - row.entropy, where, tol);
      hb.slack(row.entropy + 1.0 - row.huffman, where, tol);
      hr.slack(-std::abs(row.huffman - reference_huffman_cost(row.prior)), where, 1e-12);
      cb.slack(row.complete_ip - row.entropy, where, tol);
      cb.slack(row.entropy + 1.0 - row.complete_ip, where, tol);
      rep.priors.push_back(std::move(row));
    }
    rep.checks.push_back(hb.done());
    rep.checks.push_back(hr.done());
    rep.checks.push_back(cb.done());
  }

  {
    CheckBuilder known("closed_form_cases");
    const Posterior uniform8(std::vector<double>(8, 0.125));
    const Posterior dyadic(std::vector<double>{0.5, 0.25, 0.125, 0.125});
    known.slack(-std::abs(huffman_expected_length(uniform8, corrupt) - 3.0), "huffman uniform 8", 1e-12);
    known.slack(-std::abs(huffman_expected_length(dyadic, corrupt) - 1.75), "huffman dyadic", 1e-12);
    for (int k = 1; k <= 3; ++k) {
      const std::size_t n = std::size_t{1} << k;
      const Posterior u(std::vector<double>(n, 1.0 / static_cast<double>(n)));
      known.slack(-std::abs(ip_complete_queryset_length(u) - k), "divide and conquer uniform " + std::to_string(n), 1e-12);
    }
    const double dc = ip_complete_queryset_length(dyadic);
    known.slack(std::min(dc - 1.75, 2.75 - dc), "divide and conquer dyadic", tol);
    rep.checks.push_back(known.done());
  }

  {
    CheckBuilder opt("optimal_strategy_not_longer_than_ip");
    auto eng = rng::engine(opts.seed, "verify/strategies");
    TerminationConfig term;
    term.kind = TerminationKind::confidence;
    term.epsilon = 0.0;
    term.window = 1;
    PursuitOptions po;
    po.inference.mode = ExecutionMode::serial;
    for (std::size_t i = 0; i < opts.strategy_instances; ++i) {
      const std::size_t n = 4 + eng() % 29, nq = 2 + eng() % 4, labels = 2 + eng() % 3;
      auto [data, qset] = random_tabular(eng(), n, nq, labels, i % 2 == 0);
      const TabularJointModel model(data, qset, 0.0);
      const auto best = exhaustive_optimal_strategy(model, qset, 0.0);
      const auto ip = ip_expected_length(model, qset, data, term, po);
      opt.slack(ip.expected_length - best.expected_length, "instance " + std::to_string(i), 1e-12);
    }
    rep.checks.push_back(opt.done());
  }

  {
    CheckBuilder lemma("residual_mi_vanishes");
    auto eng = rng::engine(opts.seed, "verify/lemma1");
    for (std::size_t i = 0; i < opts.lemma_histories; ++i) {
      auto [data, qset] = random_tabular(eng(), 8 + eng() % 25, 3 + eng() % 3, 2 + eng() % 2, true);
      const TabularJointModel model(data, qset, 0.0);
      // Answer queries of one instance in random order until every consistent
      // instance carries the same label.
      const auto& x = data.items[eng() % data.size()].instance;
      std::vector<QueryId> order(qset.size());
      for (QueryId q = 0; q < order.size(); ++q) order[q] = q;
      std::shuffle(order.begin(), order.end(), eng);
      History h;
      for (std::size_t s = 0;; ++s) {
        const auto members = model.consistent(h);
        bool same = true;
        for (auto m : members) same = same && model.label(m) == model.label(members.front());
        if (same || s == order.size()) break;
        h = h.extended(order[s], qset.answer(x, order[s]));
      }
      lemma.slack(-check_lemma1_termination(model, qset, h), "history " + std::to_string(i), 1e-12);
    }
    rep.checks.push_back(lemma.done());
  }

  {
    CheckBuilder xr("xor_asks_both_queries");
    auto [data, qset] = xor_toy();
    const TabularJointModel model(data, qset, 0.0);
    TerminationConfig term;
    term.kind = TerminationKind::mutual_information;
    term.epsilon = 1e-6;
    term.window = 1;
    PursuitOptions po;
    po.inference.mode = ExecutionMode::serial;
    for (const auto& t : run_ip_batch(model, qset, data.items, term, po, 1)) {
      xr.slack(static_cast<double>(t.steps.size()) - 2.0, "instance " + t.instance_id + " length");
      xr.slack(t.correct() ? 0.0 : -1.0, "instance " + t.instance_id + " label");
    }
    rep.checks.push_back(xr.done());
  }
  return rep;
}

}  // namespace ip
