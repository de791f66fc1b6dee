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

#include "protvec/index/metric_space.hpp"

namespace protvec::index {

MetricSpace::MetricSpace(const vectorize::EmbeddingStore& store, simscore::Metric metric)
    : metric_(metric) {
  using simscore::Metric;
  switch (metric) {
    case Metric::kL2:
      points_ = store.matrix().cast<double>();
      break;
    case Metric::kCosine:
    case Metric::kNormL2:
      points_ = simscore::normalize_rows(store.matrix());
      break;
    case Metric::kIp:
      points_ = simscore::mips_augment(store.matrix()).rows;
      break;
  }
  max_norm_ = points_.rows() ? points_.rowwise().norm().maxCoeff() : 0.0;
}

Vector<double> MetricSpace::transform_query(const Vector<float>& q) const {
  using simscore::Metric;
  const auto expected = metric_ == Metric::kIp ? dim() - 1 : dim();
  if (q.size() != expected) {
    throw ValidationError("query dimension " + std::to_string(q.size()) + " does not match index " +
                          std::to_string(expected));
  }
  switch (metric_) {
    case Metric::kL2:
      return q.cast<double>();
    case Metric::kCosine:
    case Metric::kNormL2:
      return simscore::normalize(q.cast<double>());
    case Metric::kIp:
      return simscore::mips_augment_query(q);
  }
  return {};
}

}  // namespace protvec::index
