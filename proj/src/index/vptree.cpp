// Copyright 2026 The Protvec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "protvec/index/vptree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "protvec/error.hpp"

namespace protvec::index {
namespace {

bool allowed(VPTree::Filter filter, std::uint32_t id) {
  return filter == nullptr || (*filter)[id] != 0;
}

}  // namespace

VPTree VPTree::build(const MetricSpace& space, std::vector<std::uint32_t> ids,
                     std::size_t leaf_size, util::Rng& rng) {
  if (leaf_size == 0) throw ValidationError("leaf_size must be >= 1");
  VPTree tree;
  tree.size_ = ids.size();
  if (ids.empty()) return tree;

  // Work items: a range of `ids` plus the parent link to patch.
  struct Task {
    std::size_t begin, end;
    std::int32_t parent;
    bool inner_side;
  };
  std::vector<Task> stack;
  stack.push_back({0, ids.size(), -1, false});
  std::vector<std::pair<double, std::uint32_t>> scratch;

  while (!stack.empty()) {
    const Task t = stack.back();
    stack.pop_back();
    const auto node_index = static_cast<std::int32_t>(tree.nodes_.size());
    if (t.parent < 0) {
      tree.root_ = node_index;
    } else if (t.inner_side) {
      tree.nodes_[t.parent].inner = node_index;
    } else {
      tree.nodes_[t.parent].outer = node_index;
    }
    const std::size_t n = t.end - t.begin;
    Node node;
    if (n <= leaf_size) {
      node.is_leaf = true;
      node.leaf_begin = static_cast<std::uint32_t>(tree.leaf_ids_.size());
      node.leaf_count = static_cast<std::uint32_t>(n);
      tree.leaf_ids_.insert(tree.leaf_ids_.end(), ids.begin() + t.begin, ids.begin() + t.end);
      tree.nodes_.push_back(node);
      continue;
    }
    // Move the vantage to the front of the range.
    const std::size_t pick = t.begin + util::uniform_index(rng, n);
    std::swap(ids[t.begin], ids[pick]);
    node.vantage = ids[t.begin];

    scratch.clear();
    for (std::size_t i = t.begin + 1; i < t.end; ++i) {
      scratch.emplace_back(space.distance(node.vantage, ids[i]), ids[i]);
    }
    const std::size_t mid = (scratch.size() - 1) / 2;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(mid),
                     scratch.end());
    node.mu = scratch[mid].first;
    auto split = std::partition(scratch.begin(), scratch.end(),
                                [&](const auto& p) { return p.first <= node.mu; });
    const std::size_t inner_n = static_cast<std::size_t>(split - scratch.begin());
    for (std::size_t i = 0; i < scratch.size(); ++i) ids[t.begin + 1 + i] = scratch[i].second;
    tree.nodes_.push_back(node);

    const std::size_t inner_begin = t.begin + 1;
    const std::size_t outer_begin = inner_begin + inner_n;
    // Outer pushed first so the inner subtree gets the lower node indices.
    if (outer_begin < t.end) stack.push_back({outer_begin, t.end, node_index, false});
    if (inner_n > 0) stack.push_back({inner_begin, outer_begin, node_index, true});
  }
  return tree;
}

std::vector<std::pair<double, std::uint32_t>> VPTree::knn(const MetricSpace& space,
                                                          const Vector<double>& q,
                                                          std::size_t k, double slack,
                                                          Filter filter) const {
  std::vector<std::pair<double, std::uint32_t>> heap;  // max-heap on distance
  if (root_ < 0 || k == 0) return heap;
  auto tau = [&] {
    return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front().first;
  };
  auto offer = [&](double d, std::uint32_t id) {
    if (!allowed(filter, id)) return;
    if (heap.size() < k) {
      heap.emplace_back(d, id);
      std::push_heap(heap.begin(), heap.end());
    } else if (std::pair(d, id) < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {d, id};
      std::push_heap(heap.begin(), heap.end());
    }
  };

  std::vector<std::pair<std::int32_t, double>> stack;  // (node, lower bound)
  stack.emplace_back(root_, 0.0);
  while (!stack.empty()) {
    const auto [ni, bound] = stack.back();
    stack.pop_back();
    if (bound > tau() + slack) continue;
    const Node& node = nodes_[ni];
    if (node.is_leaf) {
      for (auto id : leaf_ids(node)) offer(space.distance(id, q), id);
      continue;
    }
    const double d = space.distance(node.vantage, q);
    offer(d, node.vantage);
    const double inner_bound = std::max(0.0, d - node.mu);
    const double outer_bound = std::max(0.0, node.mu - d);
    // Push the farther side first so the nearer side is explored first.
    if (d <= node.mu) {
      if (node.outer >= 0) stack.emplace_back(node.outer, outer_bound);
      if (node.inner >= 0) stack.emplace_back(node.inner, inner_bound);
    } else {
      if (node.inner >= 0) stack.emplace_back(node.inner, inner_bound);
      if (node.outer >= 0) stack.emplace_back(node.outer, outer_bound);
    }
  }
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

std::vector<std::uint32_t> VPTree::range(const MetricSpace& space, const Vector<double>& q,
                                         double radius, Filter filter) const {
  std::vector<std::uint32_t> out;
  if (root_ < 0) return out;
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.is_leaf) {
      for (auto id : leaf_ids(node)) {
        if (allowed(filter, id) && space.distance(id, q) <= radius) out.push_back(id);
      }
      continue;
    }
    const double d = space.distance(node.vantage, q);
    if (allowed(filter, node.vantage) && d <= radius) out.push_back(node.vantage);
    if (node.inner >= 0 && d - node.mu <= radius) stack.push_back(node.inner);
    if (node.outer >= 0 && node.mu - d <= radius) stack.push_back(node.outer);
  }
  return out;
}

std::vector<std::uint32_t> VPTree::topk_candidates(const MetricSpace& space,
                                                   const Vector<double>& q, std::size_t k,
                                                   Filter filter) const {
  const double slack = space.slack(q);
  const auto nearest = knn(space, q, k, slack, filter);
  if (nearest.empty()) return {};
  if (nearest.size() < k) {
    std::vector<std::uint32_t> ids;
    for (const auto& p : nearest) ids.push_back(p.second);
    return ids;
  }
  return range(space, q, nearest.back().first + slack, filter);
}

void VPTree::serialize(util::ByteWriter& w) const {
  w.put(static_cast<std::uint64_t>(size_));
  w.put(root_);
  w.put(static_cast<std::uint64_t>(nodes_.size()));
  for (const auto& n : nodes_) {
    w.put(static_cast<std::uint8_t>(n.is_leaf));
    w.put(n.vantage);
    w.put(n.mu);
    w.put(n.inner);
    w.put(n.outer);
    w.put(n.leaf_begin);
    w.put(n.leaf_count);
  }
  w.put(static_cast<std::uint64_t>(leaf_ids_.size()));
  w.put_span(std::span<const std::uint32_t>(leaf_ids_));
}

VPTree VPTree::deserialize(util::ByteReader& r, std::size_t space_size) {
  VPTree t;
  t.size_ = r.get<std::uint64_t>();
  t.root_ = r.get<std::int32_t>();
  const auto node_count = r.get<std::uint64_t>();
  if (node_count > r.remaining()) throw IoError("corrupt VP-tree node count");
  t.nodes_.resize(node_count);
  for (auto& n : t.nodes_) {
    n.is_leaf = r.get<std::uint8_t>() != 0;
    n.vantage = r.get<std::uint32_t>();
    n.mu = r.get<double>();
    n.inner = r.get<std::int32_t>();
    n.outer = r.get<std::int32_t>();
    n.leaf_begin = r.get<std::uint32_t>();
    n.leaf_count = r.get<std::uint32_t>();
  }
  const auto leaf_count = r.get<std::uint64_t>();
  if (leaf_count > r.remaining()) throw IoError("corrupt VP-tree leaf count");
  t.leaf_ids_.resize(leaf_count);
  r.get_span(std::span<std::uint32_t>(t.leaf_ids_));

  const auto nodes = static_cast<std::int64_t>(node_count);
  if (t.root_ >= nodes || (node_count > 0 && t.root_ < 0)) throw IoError("corrupt VP-tree root");
  for (const auto& n : t.nodes_) {
    if (n.inner >= nodes || n.outer >= nodes) throw IoError("corrupt VP-tree child index");
    if (n.is_leaf && static_cast<std::uint64_t>(n.leaf_begin) + n.leaf_count > leaf_count) {
      throw IoError("corrupt VP-tree leaf range");
    }
    if (!n.is_leaf && n.vantage >= space_size) throw IoError("corrupt VP-tree vantage id");
  }
  for (auto id : t.leaf_ids_) {
    if (id >= space_size) throw IoError("corrupt VP-tree leaf id");
  }
  return t;
}

bool operator==(const VPTree& a, const VPTree& b) {
  if (a.size_ != b.size_ || a.root_ != b.root_ || a.leaf_ids_ != b.leaf_ids_ ||
      a.nodes_.size() != b.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.is_leaf != y.is_leaf || x.vantage != y.vantage || x.mu != y.mu || x.inner != y.inner ||
        x.outer != y.outer || x.leaf_begin != y.leaf_begin || x.leaf_count != y.leaf_count) {
      return false;
    }
  }
  return true;
}

}  // namespace protvec::index
