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
#include <vector>

#include "protvec/index/metric_space.hpp"
#include "protvec/util/binary_io.hpp"

namespace protvec::index {

// Inverted file: k-means centroids in the metric space plus, per centroid,
// the ids of the points nearest to it.
class IvfIndex {
 public:
  static constexpr int kMaxIterations = 25;

  IvfIndex() = default;

  // k-means++ seeding, at most 25 Lloyd iterations (earlier on an
  // assignment fixpoint), empty clusters re-seeded from the point farthest
  // from its centroid. A final pass assigns every point to its nearest
  // final centroid. Throws ValidationError unless 1 <= nlist <= N.
  static IvfIndex build(const MetricSpace& space, std::size_t nlist, std::uint64_t seed);

  std::size_t nlist() const noexcept { return lists_.size(); }
  const RowMatrixXd& centroids() const noexcept { return centroids_; }
  const std::vector<std::uint32_t>& list(std::size_t i) const { return lists_[i]; }
  int iterations() const noexcept { return iterations_; }

  // Nearest centroid, ties to the lower index.
  template <typename D>
  std::size_t nearest_list(const Eigen::MatrixBase<D>& x) const {
    std::size_t best = 0;
    double best_d = (centroids_.row(0).transpose() - x).squaredNorm();
    for (Eigen::Index c = 1; c < centroids_.rows(); ++c) {
      const double d = (centroids_.row(c).transpose() - x).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::size_t>(c);
      }
    }
    return best;
  }

  // The nprobe lists with the nearest centroids, nearest first (ties to the
  // lower index). nprobe is clamped to [1, nlist].
  std::vector<std::size_t> probe(const Vector<double>& q, std::size_t nprobe) const;

  void serialize(util::ByteWriter& w) const;
  static IvfIndex deserialize(util::ByteReader& r, std::size_t space_size);

 private:
  RowMatrixXd centroids_;
  std::vector<std::vector<std::uint32_t>> lists_;
  int iterations_ = 0;
};

std::size_t default_nlist(std::size_t n);

}  // namespace protvec::index
