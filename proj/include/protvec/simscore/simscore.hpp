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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "protvec/error.hpp"
#include "protvec/types.hpp"

// Similarity and distance functions over dense vectors. All accumulation is
// done in double regardless of the input scalar type.
namespace protvec::simscore {

enum class Metric : std::uint8_t { kIp = 0, kL2 = 1, kCosine = 2, kNormL2 = 3 };

inline constexpr Metric kAllMetrics[] = {Metric::kIp, Metric::kL2, Metric::kCosine,
                                         Metric::kNormL2};

// IP and COSINE grow with closeness; L2 and NORM_L2 shrink.
constexpr bool is_similarity(Metric m) { return m == Metric::kIp || m == Metric::kCosine; }

constexpr std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kIp: return "ip";
    case Metric::kL2: return "l2";
    case Metric::kCosine: return "cosine";
    case Metric::kNormL2: return "norm_l2";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

// True when score a ranks strictly ahead of score b under m.
constexpr bool better(Metric m, double a, double b) {
  return is_similarity(m) ? a > b : a < b;
}

namespace detail {

template <typename DX, typename DY>
void check_dims(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  if (x.size() != y.size()) {
    throw ValidationError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  }
  if (x.size() < 1) throw ValidationError("empty vector");
}

template <typename D>
double norm_or_throw(const Eigen::MatrixBase<D>& x) {
  const double n = x.template cast<double>().norm();
  if (!(n > 0.0)) throw ValidationError("zero vector has no direction");
  return n;
}

}  // namespace detail

template <typename DX, typename DY>
double inner_product(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  detail::check_dims(x, y);
  return x.template cast<double>().dot(y.template cast<double>());
}

template <typename DX, typename DY>
double l2_distance(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  detail::check_dims(x, y);
  return (x.template cast<double>() - y.template cast<double>()).norm();
}

template <typename DX, typename DY>
double cosine_similarity(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  detail::check_dims(x, y);
  const double nx = detail::norm_or_throw(x);
  const double ny = detail::norm_or_throw(y);
  return x.template cast<double>().dot(y.template cast<double>()) / (nx * ny);
}

// L2 distance between x/|x| and y/|y|.
template <typename DX, typename DY>
double normalized_l2_distance(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  detail::check_dims(x, y);
  const double nx = detail::norm_or_throw(x);
  const double ny = detail::norm_or_throw(y);
  return (x.template cast<double>() / nx - y.template cast<double>() / ny).norm();
}

template <typename DX, typename DY>
double score(Metric m, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  switch (m) {
    case Metric::kIp: return inner_product(x, y);
    case Metric::kL2: return l2_distance(x, y);
    case Metric::kCosine: return cosine_similarity(x, y);
    case Metric::kNormL2: return normalized_l2_distance(x, y);
  }
  throw ValidationError("unknown metric");
}

// x / |x| with the norm taken in double. Keeps the scalar type of x.
template <typename D>
Vector<typename D::Scalar> normalize(const Eigen::MatrixBase<D>& x) {
  if (x.size() < 1) throw ValidationError("empty vector");
  const double n = detail::norm_or_throw(x);
  return (x.template cast<double>() / n).template cast<typename D::Scalar>();
}

// Row-wise normalize into double precision.
template <typename D>
RowMatrixXd normalize_rows(const Eigen::MatrixBase<D>& rows) {
  RowMatrixXd out = rows.template cast<double>();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (!(n > 0.0)) throw ValidationError("zero vector at row " + std::to_string(i));
    out.row(i) /= n;
  }
  return out;
}

// Maximum-inner-product to nearest-neighbor reduction. Each database row x
// becomes (x, sqrt(phi^2 - |x|^2)) with phi the largest row norm; a query q
// becomes (q, 0). Then |q' - x'|^2 = |q|^2 + phi^2 - 2 q.x, so ascending L2
// over augmented rows is descending inner product over the originals.
struct MipsAugmented {
  RowMatrixXd rows;  // N x (d + 1)
  double phi = 0.0;
};

template <typename D>
MipsAugmented mips_augment(const Eigen::MatrixBase<D>& db) {
  if (db.rows() < 1) throw ValidationError("mips_augment: empty database");
  MipsAugmented out;
  const Eigen::Index n = db.rows();
  const Eigen::Index d = db.cols();
  out.rows.resize(n, d + 1);
  out.rows.leftCols(d) = db.template cast<double>();
  Vector<double> sq = out.rows.leftCols(d).rowwise().squaredNorm();
  const double phi_sq = sq.maxCoeff();
  out.phi = std::sqrt(phi_sq);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.rows(i, d) = std::sqrt(std::max(0.0, phi_sq - sq[i]));
  }
  return out;
}

template <typename D>
Vector<double> mips_augment_query(const Eigen::MatrixBase<D>& q) {
  Vector<double> out(q.size() + 1);
  out.head(q.size()) = q.template cast<double>();
  out[q.size()] = 0.0;
  return out;
}

}  // namespace protvec::simscore
