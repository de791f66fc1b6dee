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

#include <doctest.h>

#include <random>

#include "protvec/error.hpp"
#include "protvec/simscore/simscore.hpp"
#include "test_support.hpp"

using namespace protvec;
using namespace protvec::simscore;

TEST_CASE("metric names") {
  for (Metric m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
  CHECK(metric_name(Metric::kNormL2) == "norm_l2");
  CHECK_FALSE(parse_metric("COSINE"));
  CHECK(is_similarity(Metric::kIp));
  CHECK_FALSE(is_similarity(Metric::kL2));
}

TEST_CASE("reference values") {
  Vector<double> x(3), y(3);
  x << 1, 2, 3;
  y << 4, 5, 6;
  CHECK(inner_product(x, y) == 32.0);
  CHECK(l2_distance(x, y) == doctest::Approx(std::sqrt(27.0)).epsilon(1e-15));
  CHECK(cosine_similarity(x, y) == doctest::Approx(0.9746318461970762).epsilon(1e-12));
  CHECK(normalized_l2_distance(x, y) == doctest::Approx(0.225247214424169).epsilon(1e-12));
  CHECK(score(Metric::kCosine, x, y) == cosine_similarity(x, y));
}

TEST_CASE("errors") {
  Vector<double> x(3), y(2), z = Vector<double>::Zero(3);
  x << 1, 2, 3;
  y << 1, 2;
  CHECK_THROWS_AS(inner_product(x, y), ValidationError);
  CHECK_THROWS_AS(cosine_similarity(x, z), ValidationError);
  CHECK_THROWS_AS(normalized_l2_distance(z, x), ValidationError);
  CHECK_THROWS_AS(normalize(z), ValidationError);
}

TEST_CASE("norm_l2 squared is 2 - 2 cos") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_vector(1 + rng() % 64, rng);
    const auto b = testing::random_vector(static_cast<std::size_t>(a.size()), rng);
    const double c = cosine_similarity(a, b);
    const double n = normalized_l2_distance(a, b);
    REQUIRE(n * n == doctest::Approx(2.0 - 2.0 * c).epsilon(1e-9));
    REQUIRE(l2_distance(normalize(a.cast<double>()), normalize(b.cast<double>())) ==
            doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("mips augmentation turns inner product order into L2 order") {
  std::mt19937_64 rng(2);
  RowMatrixXf db(50, 8);
  for (Eigen::Index i = 0; i < db.rows(); ++i) db.row(i) = testing::random_vector(8, rng).transpose() * float(1 + i % 5);
  const auto aug = mips_augment(db);
  CHECK(aug.rows.cols() == 9);
  for (Eigen::Index i = 0; i < aug.rows.rows(); ++i) {
    CHECK(aug.rows.row(i).norm() == doctest::Approx(aug.phi).epsilon(1e-12));
  }
  const auto q = testing::random_vector(8, rng);
  const Vector<double> qa = mips_augment_query(q);
  for (Eigen::Index i = 0; i < db.rows(); ++i) {
    const double l2sq = (qa - aug.rows.row(i).transpose()).squaredNorm();
    const double expect = q.cast<double>().squaredNorm() + aug.phi * aug.phi -
                          2.0 * inner_product(q, db.row(i).transpose());
    CHECK(l2sq == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("normalize_rows") {
  RowMatrixXf m(2, 2);
  m << 3, 4, 0, 2;
  const auto n = normalize_rows(m);
  CHECK(n(0, 0) == doctest::Approx(0.6));
  CHECK(n(1, 1) == 1.0);
  m.row(1).setZero();
  CHECK_THROWS_AS(normalize_rows(m), ValidationError);
}
