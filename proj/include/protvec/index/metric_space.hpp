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

#include <cstdint>

#include "protvec/simscore/simscore.hpp"
#include "protvec/types.hpp"
#include "protvec/vectorize/store.hpp"

namespace protvec::index {

// The store re-expressed as points in a Euclidean space whose L2 order
// agrees with the index metric: raw vectors for L2, unit vectors for COSINE
// and NORM_L2, MIPS-augmented vectors for IP.
class MetricSpace {
 public:
  MetricSpace() = default;
  MetricSpace(const vectorize::EmbeddingStore& store, simscore::Metric metric);

  simscore::Metric metric() const noexcept { return metric_; }
  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  const RowMatrixXd& points() const noexcept { return points_; }
  auto point(std::uint32_t id) const { return points_.row(id); }

  // Largest point norm, used to scale rounding slack.
  double max_norm() const noexcept { return max_norm_; }

  Vector<double> transform_query(const Vector<float>& q) const;

  template <typename D>
  double distance(std::uint32_t id, const Eigen::MatrixBase<D>& q) const {
    return (points_.row(id).transpose() - q).norm();
  }
  double distance(std::uint32_t a, std::uint32_t b) const {
    return (points_.row(a) - points_.row(b)).norm();
  }

  // Absolute tolerance on space distances that covers the rounding gap
  // between space order and true-metric order.
  double slack(const Vector<double>& transformed_query) const {
    return 1e-6 * (1.0 + max_norm_ + transformed_query.norm());
  }

 private:
  simscore::Metric metric_ = simscore::Metric::kL2;
  RowMatrixXd points_;
  double max_norm_ = 0.0;
};

}  // namespace protvec::index
