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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "protvec/index/metric_space.hpp"
#include "protvec/util/binary_io.hpp"
#include "protvec/util/random.hpp"

namespace protvec::index {

// Vantage-point tree over a subset of MetricSpace points.
//
// Internal nodes hold one vantage point and the median distance mu of the
// remaining points to it; points at distance <= mu go to the inner child,
// the rest to the outer child. Leaves hold at most leaf_size points.
class VPTree {
 public:
  struct Node {
    std::uint32_t vantage = 0;
    double mu = 0.0;
    std::int32_t inner = -1;  // node index or -1
    std::int32_t outer = -1;
    std::uint32_t leaf_begin = 0;  // into leaf_ids, leaves only
    std::uint32_t leaf_count = 0;
    bool is_leaf = false;
  };

  // Optional membership mask over space ids; points outside are skipped.
  using Filter = const std::vector<std::uint8_t>*;

  VPTree() = default;

  // Vantage points are drawn uniformly with `rng`. Throws ValidationError
  // when leaf_size is zero.
  static VPTree build(const MetricSpace& space, std::vector<std::uint32_t> ids,
                      std::size_t leaf_size, util::Rng& rng);

  // The k nearest allowed points as (distance, id), nearest first. Pruning
  // is relaxed by `slack` so no point within slack of the k-th distance is
  // lost to rounding.
  std::vector<std::pair<double, std::uint32_t>> knn(const MetricSpace& space,
                                                    const Vector<double>& q, std::size_t k,
                                                    double slack, Filter filter = nullptr) const;

  // Every allowed point with distance <= radius, in unspecified order.
  std::vector<std::uint32_t> range(const MetricSpace& space, const Vector<double>& q,
                                   double radius, Filter filter = nullptr) const;

  // Candidates guaranteed to contain the true top-k under the space's
  // metric: all points within slack of the k-th nearest distance.
  std::vector<std::uint32_t> topk_candidates(const MetricSpace& space, const Vector<double>& q,
                                             std::size_t k, Filter filter = nullptr) const;

  std::size_t size() const noexcept { return size_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::span<const std::uint32_t> leaf_ids(const Node& n) const {
    return {leaf_ids_.data() + n.leaf_begin, n.leaf_count};
  }
  std::int32_t root() const noexcept { return root_; }

  void serialize(util::ByteWriter& w) const;
  static VPTree deserialize(util::ByteReader& r, std::size_t space_size);

  friend bool operator==(const VPTree&, const VPTree&);

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> leaf_ids_;
  std::int32_t root_ = -1;
  std::size_t size_ = 0;
};

}  // namespace protvec::index
