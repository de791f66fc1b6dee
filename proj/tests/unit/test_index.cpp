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

#include <cmath>
#include <numbers>
#include <random>

#include "protvec/error.hpp"
#include "protvec/index/layered_index.hpp"
#include "protvec/util/file_io.hpp"
#include "test_support.hpp"

using namespace protvec;
using namespace protvec::index;
using simscore::Metric;

namespace {

void check_matches_brute_force(const LayeredIndex& idx, const Vector<float>& q, std::size_t k) {
  const auto got = idx.search(q, k);
  const auto want = testing::brute_force(idx.store(), idx.metric(), q, k);
  REQUIRE(got.hits.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    REQUIRE(got.hits[i].accession == want[i].first);
    REQUIRE(got.hits[i].rank == i + 1);
    REQUIRE(got.hits[i].score == doctest::Approx(want[i].second).epsilon(1e-6));
  }
}

// Every point under an internal node's inner child is within mu of the
// vantage point; every point under the outer child is farther.
void check_vp_invariant(const VPTree& tree, const MetricSpace& space) {
  const auto& nodes = tree.nodes();
  std::function<void(std::int32_t, std::vector<std::uint32_t>&)> collect =
      [&](std::int32_t n, std::vector<std::uint32_t>& out) {
        if (n < 0) return;
        const auto& node = nodes[static_cast<std::size_t>(n)];
        if (node.is_leaf) {
          for (auto id : tree.leaf_ids(node)) out.push_back(id);
          return;
        }
        out.push_back(node.vantage);
        collect(node.inner, out);
        collect(node.outer, out);
      };
  std::size_t total = 0;
  for (const auto& node : nodes) {
    if (node.is_leaf) {
      total += node.leaf_count;
      continue;
    }
    ++total;
    std::vector<std::uint32_t> inner, outer;
    collect(node.inner, inner);
    collect(node.outer, outer);
    for (auto id : inner) REQUIRE(space.distance(id, node.vantage) <= node.mu);
    for (auto id : outer) REQUIRE(space.distance(id, node.vantage) > node.mu);
  }
  CHECK(total == tree.size());
}

}  // namespace

TEST_CASE("singleton database") {
  vectorize::EmbeddingStore store(3);
  Vector<float> x(3);
  x << 1, 2, 3;
  store.add("X", x);
  for (Metric m : simscore::kAllMetrics) {
    for (auto mode : {IndexMode::kExact, IndexMode::kVpTree, IndexMode::kLsh, IndexMode::kIvf,
                      IndexMode::kLayered}) {
      const auto idx = LayeredIndex::build(store, mode, m, {}, 1);
      Vector<float> q(3);
      q << -1, 0.5, 2;
      const auto hits = idx.search(q, 5);
      if (mode == IndexMode::kExact || mode == IndexMode::kVpTree || mode == IndexMode::kIvf) {
        REQUIRE(hits.hits.size() == 1);
      }
      if (!hits.hits.empty()) {
        CHECK(hits.hits[0].accession == "X");
        CHECK(hits.hits[0].rank == 1);
        CHECK(hits.hits[0].score == doctest::Approx(simscore::score(m, q, x)));
      }
      CHECK(hits.shortfall);
    }
  }
  const auto idx = LayeredIndex::build(store, IndexMode::kLayered, Metric::kL2, {.nlist = 1}, 1);
  CHECK(idx.vptree()->nodes().size() == 1);
  CHECK(idx.vptree()->nodes()[0].is_leaf);
  CHECK(idx.ivf()->nlist() == 1);
  CHECK(idx.ivf()->list(0).size() == 1);
}

TEST_CASE("k = N gives the whole database in order with accession tie-break") {
  vectorize::EmbeddingStore store(2);
  std::mt19937_64 rng(4);
  Vector<float> dup = testing::random_vector(2, rng);
  for (int i = 0; i < 40; ++i) {
    store.add(testing::accession_for(static_cast<std::size_t>(39 - i)),
              i % 4 == 0 ? dup : testing::random_vector(2, rng));
  }
  for (Metric m : simscore::kAllMetrics) {
    for (auto mode : {IndexMode::kExact, IndexMode::kVpTree}) {
      const auto idx = LayeredIndex::build(store, mode, m, {.leaf_size = 3}, 2);
      check_matches_brute_force(idx, dup, 40);
      check_matches_brute_force(idx, testing::random_vector(2, rng), 40);
    }
  }
}

TEST_CASE("vptree equals brute force for every metric") {
  const auto store = testing::random_store(1000, 64, 21);
  std::mt19937_64 rng(22);
  for (Metric m : simscore::kAllMetrics) {
    const auto idx = LayeredIndex::build(store, IndexMode::kVpTree, m, {.leaf_size = 8}, 7);
    check_vp_invariant(*idx.vptree(), idx.space());
    for (int i = 0; i < 100; ++i) check_matches_brute_force(idx, testing::random_vector(64, rng), 10);
    check_matches_brute_force(idx, store.row(5), 1);
  }
}

TEST_CASE("vptree equals brute force on a large low-dimensional store") {
  const auto store = testing::random_store(10000, 8, 31);
  std::mt19937_64 rng(32);
  for (Metric m : simscore::kAllMetrics) {
    const auto idx = LayeredIndex::build(store, IndexMode::kVpTree, m, {}, 3);
    check_vp_invariant(*idx.vptree(), idx.space());
    for (int i = 0; i < 10; ++i) check_matches_brute_force(idx, testing::random_vector(8, rng), 25);
  }
}

TEST_CASE("ivf probing every list is exact") {
  const auto store = testing::random_store(600, 16, 41);
  std::mt19937_64 rng(42);
  for (Metric m : simscore::kAllMetrics) {
    const auto idx = LayeredIndex::build(store, IndexMode::kIvf, m, {.nlist = 12, .nprobe = 12}, 5);
    CHECK(idx.ivf()->iterations() <= IvfIndex::kMaxIterations);
    std::size_t total = 0;
    for (std::size_t l = 0; l < idx.ivf()->nlist(); ++l) total += idx.ivf()->list(l).size();
    CHECK(total == store.size());
    for (int i = 0; i < 30; ++i) check_matches_brute_force(idx, testing::random_vector(16, rng), 10);
  }
}

TEST_CASE("ivf with one list holds every point") {
  const auto store = testing::random_store(50, 4, 43);
  const auto idx = LayeredIndex::build(store, IndexMode::kIvf, Metric::kL2, {.nlist = 1}, 5);
  REQUIRE(idx.ivf()->nlist() == 1);
  CHECK(idx.ivf()->list(0).size() == 50);
  CHECK(default_nlist(100) == 10);
  CHECK(default_nlist(1) == 1);
  CHECK(default_nlist(2) == 1);
  CHECK(default_nlist(3) == 2);
}

TEST_CASE("lsh codes: identity and negation") {
  const LshTables lsh(12, 4, 20, 99);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Vector<double> x = testing::random_vector(12, rng).cast<double>();
    const Vector<double> y = x;
    for (std::size_t t = 0; t < lsh.tables(); ++t) {
      REQUIRE(lsh.code(t, x) == lsh.code(t, y));
      const std::uint64_t mask = (std::uint64_t{1} << lsh.bits()) - 1;
      REQUIRE(lsh.code(t, Vector<double>(-x)) == (~lsh.code(t, x) & mask));
    }
  }
  CHECK_THROWS_AS(LshTables(4, 1, 64, 0), ValidationError);
  CHECK_THROWS_AS(LshTables(4, 0, 8, 0), ValidationError);
  CHECK_NOTHROW(LshTables(4, 1, 63, 0));
}

TEST_CASE("single hyperplane collision rate is 1 - angle/pi") {
  // 10,000 independent one-bit tables; each pair is hashed by all of them.
  const std::size_t trials = 10000;
  std::mt19937_64 rng(12);
  for (int pair = 0; pair < 8; ++pair) {
    const std::size_t dim = 16;
    const LshTables lsh(dim, trials, 1, 1000 + static_cast<std::uint64_t>(pair));
    const Vector<double> x = testing::random_vector(dim, rng).cast<double>();
    Vector<double> y = testing::random_vector(dim, rng).cast<double>();
    y = y * (pair / 8.0) + x * (1.0 - pair / 8.0);  // spread of angles
    const double theta = std::acos(std::clamp(x.dot(y) / (x.norm() * y.norm()), -1.0, 1.0));
    std::size_t same = 0;
    for (std::size_t t = 0; t < trials; ++t) same += lsh.code(t, x) == lsh.code(t, y);
    const double rate = static_cast<double>(same) / static_cast<double>(trials);
    CHECK(std::abs(rate - (1.0 - theta / std::numbers::pi)) <= 0.03);
  }
}

TEST_CASE("lsh with one hyperplane finds a whole antipodal cluster") {
  vectorize::EmbeddingStore store(4);
  std::mt19937_64 rng(13);
  std::normal_distribution<float> g(0.0f, 0.05f);
  Vector<float> c(4);
  c << 1, 1, 1, 1;
  for (int i = 0; i < 40; ++i) {
    Vector<float> v = (i < 20 ? c : Vector<float>(-c));
    for (auto& x : v) x += g(rng);
    store.add(testing::accession_for(static_cast<std::size_t>(i)), v);
  }
  const auto idx = LayeredIndex::build(store, IndexMode::kLsh, Metric::kCosine,
                                       {.tables = 1, .bits = 1}, 3);
  const auto& planes_code = *idx.lsh();
  const Vector<double> q = idx.space().transform_query(store.row(0));
  bool cluster_shares_bit = true;
  for (std::uint32_t i = 0; i < 20; ++i) {
    cluster_shares_bit &= planes_code.code(0, idx.space().point(i)) == planes_code.code(0, q);
  }
  if (cluster_shares_bit) {
    RowMatrixXf queries = store.row(0).transpose();
    CHECK(recall_vs_exact(idx, queries, 10) == 1.0);
  }
}

TEST_CASE("approximate modes rerank exactly and flag shortfall honestly") {
  const auto store = testing::random_store(500, 16, 51);
  std::mt19937_64 rng(52);
  for (auto mode : {IndexMode::kLsh, IndexMode::kIvf, IndexMode::kLayered}) {
    for (Metric m : simscore::kAllMetrics) {
      const auto idx = LayeredIndex::build(store, mode, m, {.tables = 4, .bits = 8, .nprobe = 2}, 9);
      for (int i = 0; i < 10; ++i) {
        const auto q = testing::random_vector(16, rng);
        const auto r = idx.search(q, 20);
        CHECK(r.shortfall == (r.hits.size() < 20));
        for (std::size_t j = 0; j < r.hits.size(); ++j) {
          const auto row = store.find(r.hits[j].accession);
          REQUIRE(row);
          REQUIRE(r.hits[j].score == doctest::Approx(simscore::score(m, q, store.row(*row))));
          if (j > 0) {
            REQUIRE(ranks_before(m, r.hits[j - 1].score, r.hits[j - 1].accession, r.hits[j].score,
                                 r.hits[j].accession));
          }
        }
      }
    }
  }
}

TEST_CASE("exact mode recall is one") {
  const auto store = testing::random_store(200, 8, 61);
  const auto idx = LayeredIndex::build(store, IndexMode::kExact, Metric::kCosine, {}, 1);
  RowMatrixXf queries = store.matrix().topRows(20);
  CHECK(recall_vs_exact(idx, queries, 10) == 1.0);
}

TEST_CASE("build and search errors") {
  CHECK_THROWS_AS(LayeredIndex::build(vectorize::EmbeddingStore(4), IndexMode::kExact,
                                      Metric::kL2, {}, 1),
                  ValidationError);
  const auto store = testing::random_store(10, 4, 1);
  CHECK_THROWS_AS(LayeredIndex::build(store, IndexMode::kIvf, Metric::kL2, {.nlist = 11}, 1),
                  ValidationError);
  CHECK_THROWS_AS(LayeredIndex::build(store, IndexMode::kLsh, Metric::kL2, {.bits = 64}, 1),
                  ValidationError);
  CHECK_THROWS_AS(LayeredIndex::build(store, IndexMode::kVpTree, Metric::kL2, {.leaf_size = 0}, 1),
                  ValidationError);
  const auto idx = LayeredIndex::build(store, IndexMode::kVpTree, Metric::kL2, {}, 1);
  CHECK_THROWS_AS(idx.search(Vector<float>::Ones(5), 3), ValidationError);
  CHECK_THROWS_AS(idx.search(Vector<float>::Ones(4), 0), ValidationError);
  CHECK_THROWS_AS(idx.search_accession("nope", 3), ValidationError);
  CHECK(idx.search_accession("P00003", 1).hits[0].accession == "P00003");
}

TEST_CASE("index bytes are deterministic and round trip") {
  const auto store = testing::random_store(300, 12, 71);
  std::mt19937_64 rng(72);
  for (auto mode : {IndexMode::kExact, IndexMode::kVpTree, IndexMode::kLsh, IndexMode::kIvf,
                    IndexMode::kLayered}) {
    for (Metric m : simscore::kAllMetrics) {
      const IndexParams p{.leaf_size = 4, .tables = 3, .bits = 10, .nprobe = 3, .multiprobe = true};
      const auto a = LayeredIndex::build(store, mode, m, p, 11);
      const auto b = LayeredIndex::build(store, mode, m, p, 11);
      const auto bytes = a.serialize();
      REQUIRE(bytes == b.serialize());
      const auto back = LayeredIndex::deserialize(bytes);
      REQUIRE(back.serialize() == bytes);
      for (int i = 0; i < 20; ++i) {
        const auto q = testing::random_vector(12, rng);
        REQUIRE(a.search(q, 7) == back.search(q, 7));
      }
    }
  }
}

TEST_CASE("index files reject corruption") {
  const auto store = testing::random_store(100, 8, 81);
  const auto idx = LayeredIndex::build(store, IndexMode::kLayered, Metric::kCosine, {}, 3);
  const auto dir = testing::scratch_dir("index");
  index_save(idx, dir / "i.pidx");
  const auto bytes = util::read_file(dir / "i.pidx");
  CHECK(index_load(dir / "i.pidx").serialize() == bytes);

  auto bad = bytes;
  bad.replace(0, 4, "XIDX");
  CHECK_THROWS_WITH_AS(LayeredIndex::deserialize(bad), doctest::Contains("magic"), IoError);

  bad = bytes;
  bad[4] = static_cast<char>(kPidxVersion + 1);
  CHECK_THROWS_WITH_AS(LayeredIndex::deserialize(bad), doctest::Contains("version"), IoError);

  CHECK_THROWS_WITH_AS(LayeredIndex::deserialize(bytes.substr(0, bytes.size() - 10)),
                       doctest::Contains("checksum"), IoError);

  for (std::size_t pos : {std::size_t{12}, bytes.size() / 2, bytes.size() - 5}) {
    bad = bytes;
    bad[pos] = static_cast<char>(bad[pos] ^ 0x40);
    CHECK_THROWS_WITH_AS(LayeredIndex::deserialize(bad), doctest::Contains("checksum"), IoError);
  }
}
