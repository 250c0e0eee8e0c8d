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
#include <stdexcept>

#include "ip/information.hpp"
#include "ip/theory.hpp"

namespace ip {

namespace {

LabelIndex majority(const std::vector<std::size_t>& counts) {
  return static_cast<LabelIndex>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

class CartBuilder {
 public:
  CartBuilder(const Dataset& data, const QuerySet& qset, std::size_t max_depth, std::size_t min_leaf)
      : data_(data), qset_(qset), max_depth_(max_depth), min_leaf_(std::max<std::size_t>(min_leaf, 1)) {
    const std::size_t n = data.size();
    answers_.resize(qset.size());
    std::vector<std::vector<std::uint8_t>> prims(n);
    for (std::size_t i = 0; i < n; ++i) prims[i] = qset.primitives(data.items[i].instance);
    for (QueryId q = 0; q < qset.size(); ++q) {
      const auto& query = qset.query(q);
      if (query.alphabet_size() > 65536) throw std::invalid_argument("CART supports answer alphabets up to 65536");
      answers_[q].resize(n);
      for (std::size_t i = 0; i < n; ++i)
        answers_[q][i] = static_cast<std::uint16_t>(
            qset.answer_from_primitives(prims[i], q).index(query.answer_cardinality));
    }
  }

  CartTree build() {
    std::vector<std::size_t> all(data_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(all, 0);
    return std::move(tree_);
  }

 private:
  std::int32_t grow(const std::vector<std::size_t>& members, std::size_t depth) {
    const std::size_t L = data_.labels.size();
    std::vector<std::size_t> counts(L, 0);
    for (auto i : members) ++counts[data_.items[i].label];
    const auto id = static_cast<std::int32_t>(tree_.nodes.size());
    CartNode node;
    node.label = majority(counts);
    node.count = members.size();
    tree_.nodes.push_back(node);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || (max_depth_ > 0 && depth >= max_depth_) || members.size() < 2 * min_leaf_) return id;

    // An impure node splits even at zero gain so that parity structure (XOR)
    // can be resolved one level further down.
    double best_gain = -1.0;
    std::int64_t best_q = -1;
    const double n = static_cast<double>(members.size());
    for (QueryId q = 0; q < qset_.size(); ++q) {
      const auto alphabet = qset_.query(q).alphabet_size();
      JointTable joint(alphabet, L);
      std::vector<std::size_t> child(alphabet, 0);
      for (auto i : members) {
        const auto a = answers_[q][i];
        joint.at(a, data_.items[i].label) += 1.0 / n;
        ++child[a];
      }
      bool admissible = true, splits = false;
      std::size_t nonempty = 0;
      for (auto c : child) {
        if (c == 0) continue;
        ++nonempty;
        if (c < min_leaf_) admissible = false;
      }
      splits = nonempty > 1;
      if (!admissible || !splits) continue;
      const double gain = mutual_information(joint);
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_q = q;
      }
    }
    if (best_q < 0) return id;

    const auto q = static_cast<QueryId>(best_q);
    const auto alphabet = qset_.query(q).alphabet_size();
    std::vector<std::vector<std::size_t>> parts(alphabet);
    for (auto i : members) parts[answers_[q][i]].push_back(i);
    std::vector<std::int32_t> kids(alphabet, -1);
    for (std::size_t a = 0; a < alphabet; ++a)
      if (!parts[a].empty()) kids[a] = grow(parts[a], depth + 1);
    tree_.nodes[id].leaf = false;
    tree_.nodes[id].query = q;
    tree_.nodes[id].children = std::move(kids);
    return id;
  }

  const Dataset& data_;
  const QuerySet& qset_;
  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<std::vector<std::uint16_t>> answers_;
  CartTree tree_;
};

}  // namespace

std::size_t CartTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    for (auto c : nodes[i].children)
      if (c >= 0) d[c] = d[i] + 1;
  }
  return best;
}

std::size_t CartTree::leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const CartNode& n) { return n.leaf; }));
}

CartTree cart_train(const Dataset& data, const QuerySet& qset, std::size_t max_depth, std::size_t min_leaf) {
  data.validate();
  return CartBuilder(data, qset, max_depth, min_leaf).build();
}

LabelIndex cart_predict(const CartTree& tree, const QuerySet& qset, const Instance& instance) {
  if (tree.nodes.empty()) throw std::invalid_argument("empty tree");
  const auto prims = qset.primitives(instance);
  std::size_t at = 0;
  for (;;) {
    const auto& node = tree.nodes[at];
    if (node.leaf) return node.label;
    const auto a = qset.answer_from_primitives(prims, node.query).index(qset.query(node.query).answer_cardinality);
    const auto next = node.children[a];
    if (next < 0) return node.label;
    at = static_cast<std::size_t>(next);
  }
}

double cart_accuracy(const CartTree& tree, const QuerySet& qset, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& item : data.items) ok += cart_predict(tree, qset, item.instance) == item.label;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace ip
