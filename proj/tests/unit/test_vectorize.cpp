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
#include <cstring>
#include <limits>
#include <numeric>
#include <random>

#include "protvec/core/sequence.hpp"
#include "protvec/error.hpp"
#include "protvec/simscore/simscore.hpp"
#include "protvec/util/file_io.hpp"
#include "protvec/vectorize/embedder.hpp"
#include "protvec/vectorize/store.hpp"
#include "protvec/vectorize/tokens.hpp"
#include "test_support.hpp"

using namespace protvec;
using namespace protvec::vectorize;
using R = TokenRole;

namespace {

TokenEmbeddingMatrix make_matrix(std::vector<TokenRole> roles, std::vector<std::vector<float>> rows) {
  TokenEmbeddingMatrix m;
  m.roles = std::move(roles);
  m.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

bool bit_equal(const Vector<float>& a, const Vector<float>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(float) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("pad_or_truncate keeps room for the two special tokens") {
  CHECK(pad_or_truncate(10, 1024) == TokenWindow{0, 10});
  CHECK(pad_or_truncate(2000, 1024) == TokenWindow{0, 1022});
  CHECK(pad_or_truncate(7000, 7002) == TokenWindow{0, 7000});
  CHECK(pad_or_truncate(7001, 7002) == TokenWindow{0, 7000});
  CHECK(pad_or_truncate(5, 3) == TokenWindow{0, 1});
  CHECK_THROWS_AS(pad_or_truncate(5, 2), ValidationError);
  CHECK(default_token_cap(PositionEncoding::kAbsolute) == 1024);
  CHECK(default_token_cap(PositionEncoding::kRotary) == 7002);
}

TEST_CASE("frame_roles lays out CLS, residues, SEP, PAD") {
  CHECK(frame_roles(2, 1024) == std::vector<R>{R::kCls, R::kResidue, R::kResidue, R::kSep});
  CHECK(frame_roles(2, 1024, 6) ==
        std::vector<R>{R::kCls, R::kResidue, R::kResidue, R::kSep, R::kPad, R::kPad});
  CHECK(frame_roles(10, 4).size() == 4);
  CHECK_THROWS_AS(frame_roles(3, 1024, 4), ValidationError);
}

TEST_CASE("pool_tokens averages residue rows only") {
  auto m = make_matrix({R::kCls, R::kResidue, R::kResidue, R::kSep},
                       {{9, 9}, {1, 1}, {3, 3}, {-7, 5}});
  const auto v = pool_tokens(m);
  CHECK(v[0] == 2.0f);
  CHECK(v[1] == 2.0f);

  auto single = make_matrix({R::kResidue}, {{0.25f, -1.5f}});
  CHECK(bit_equal(pool_tokens(single), single.rows.row(0).transpose()));

  auto padded = make_matrix({R::kCls, R::kResidue, R::kPad, R::kPad}, {{1, 1}, {4, 0}, {8, 8}, {8, 8}});
  const auto p = pool_tokens(padded);
  CHECK(p[0] == 4.0f);
  CHECK(p[1] == 0.0f);

  auto none = make_matrix({R::kCls, R::kSep}, {{1}, {2}});
  CHECK_THROWS_AS(pool_tokens(none), ValidationError);
}

TEST_CASE("pool_tokens ignores PAD suffixes and residue order") {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t d = 1 + rng() % 16;
    auto roles = frame_roles(n, 1024);
    TokenEmbeddingMatrix m;
    m.roles = roles;
    m.rows.resize(static_cast<Eigen::Index>(roles.size()), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows.size(); ++i) m.rows.data()[i] = g(rng);
    const auto base = pool_tokens(m);

    auto padded = m;
    const std::size_t extra = 1 + rng() % 5;
    padded.roles.insert(padded.roles.end(), extra, R::kPad);
    padded.rows.conservativeResize(padded.rows.rows() + static_cast<Eigen::Index>(extra), Eigen::NoChange);
    padded.rows.bottomRows(static_cast<Eigen::Index>(extra)).setConstant(1e6f);
    REQUIRE(bit_equal(pool_tokens(padded), base));

    auto shuffled = m;
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      shuffled.rows.row(static_cast<Eigen::Index>(i) + 1) = m.rows.row(perm[i]);
    }
    REQUIRE(bit_equal(pool_tokens(shuffled), base));
  }
}

TEST_CASE("token matrix validation") {
  make_matrix({R::kCls, R::kResidue, R::kSep, R::kPad}, {{1}, {1}, {1}, {1}}).validate();
  CHECK_THROWS_AS(make_matrix({R::kResidue, R::kCls}, {{1}, {1}}).validate(), ValidationError);
  CHECK_THROWS_AS(make_matrix({R::kResidue, R::kPad, R::kResidue}, {{1}, {1}, {1}}).validate(),
                  ValidationError);
  CHECK_THROWS_AS(make_matrix({R::kResidue, R::kSep, R::kResidue}, {{1}, {1}, {1}}).validate(),
                  ValidationError);
  CHECK_THROWS_AS(make_matrix({R::kCls, R::kSep}, {{1}, {1}}).validate(), ValidationError);
  CHECK_THROWS_AS(make_matrix({R::kResidue, R::kResidue, R::kResidue, R::kResidue},
                              {{1}, {1}, {1}, {1}}).validate(3),
                  ValidationError);
}

TEST_CASE("kmer embedding of a single k-mer is a basis vector") {
  // Buckets computed separately with a Python FNV-1a over (seed LE bytes, "AAA").
  const core::ProteinSequence aaa("AAA");
  struct Case { std::uint64_t seed; std::size_t dim; std::size_t bucket; };
  for (const auto c : {Case{7, 16, 11}, Case{7, 256, 107}, Case{0, 256, 34}, Case{42, 8, 0}}) {
    const auto v = kmer_hash_embed(aaa, c.dim, 3, c.seed);
    CHECK(kmer_bucket("AAA", c.dim, c.seed) == c.bucket);
    Vector<float> e = Vector<float>::Zero(static_cast<Eigen::Index>(c.dim));
    e[static_cast<Eigen::Index>(c.bucket)] = 1.0f;
    CHECK(bit_equal(v, e));
  }
  CHECK(util::fnv1a64("") == 14695981039346656037ull);
  CHECK(util::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("kmer embedding is deterministic and unit length") {
  std::mt19937_64 rng(9);
  const std::string alphabet = "ACDEFGHIKLMNPQRSTVWY";
  for (int trial = 0; trial < 100; ++trial) {
    std::string s;
    const std::size_t len = 3 + rng() % 200;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    const core::ProteinSequence seq(s);
    const auto a = kmer_hash_embed(seq, 64, 3, 7);
    const auto b = kmer_hash_embed(seq, 64, 3, 7);
    REQUIRE(bit_equal(a, b));
    REQUIRE(std::abs(a.cast<double>().norm() - 1.0) <= 1e-6);
  }
}

TEST_CASE("kmer embedding depends only on the k-mer multiset") {
  CHECK(bit_equal(kmer_hash_embed(core::ProteinSequence("ACDA"), 32, 2, 1),
                  kmer_hash_embed(core::ProteinSequence("CDAC"), 32, 2, 1)));
  // s and s+s have proportional k-mer counts when k = 1, or for a homopolymer.
  auto self_concat_cos = [](const std::string& s, std::size_t k) {
    return simscore::cosine_similarity(kmer_hash_embed(core::ProteinSequence(s), 128, k, 7),
                                       kmer_hash_embed(core::ProteinSequence(s + s), 128, k, 7));
  };
  CHECK(std::abs(self_concat_cos("MKVLAAGICWYQ", 1) - 1.0) <= 1e-6);
  CHECK(std::abs(self_concat_cos("GGGGGGG", 3) - 1.0) <= 1e-6);
}

TEST_CASE("kmer embedding errors") {
  const core::ProteinSequence s("ACDE");
  CHECK_THROWS_AS(kmer_hash_embed(s, 7, 3, 0), ValidationError);
  CHECK_THROWS_AS(kmer_hash_embed(s, 8, 5, 0), ValidationError);
  CHECK_THROWS_AS(kmer_hash_embed(s, 8, 0, 0), ValidationError);
  CHECK_NOTHROW(kmer_hash_embed(s, 8, 4, 0));
}

TEST_CASE("empty store is header only") {
  // magic + version + dim + count
  constexpr std::size_t header = 4 + sizeof(std::uint32_t) + sizeof(std::uint32_t) + sizeof(std::uint64_t);
  const auto bytes = store_serialize(EmbeddingStore(4));
  CHECK(bytes.size() == header);
  CHECK(bytes.size() == 20);
  CHECK(bytes.substr(0, 4) == "PVEC");
  CHECK(store_deserialize(bytes) == EmbeddingStore(4));
}

TEST_CASE("store round trip is bit exact") {
  const auto store = testing::random_store(1000, 24, 17);
  const auto bytes = store_serialize(store);
  CHECK(bytes.size() == 20 + 1000 * (2 + 6 + 24 * 4));
  const auto back = store_deserialize(bytes);
  CHECK(back == store);
  CHECK(store_serialize(back) == bytes);
  CHECK(back.find("P00999") == std::optional<std::size_t>(999));

  const auto dir = testing::scratch_dir("store");
  store_write(store, dir / "sub" / "s.pvec");
  CHECK(store_read(dir / "sub" / "s.pvec") == store);
}

TEST_CASE("store rejects malformed streams") {
  EmbeddingStore store(2);
  store.add("P1", Vector<float>::Constant(2, 1.0f));
  store.add("P2", Vector<float>::Constant(2, 2.0f));
  const auto good = store_serialize(store);

  auto bad = good;
  bad.replace(0, 4, "XXXX");
  CHECK_THROWS_WITH_AS(store_deserialize(bad), doctest::Contains("magic"), IoError);

  bad = good;
  bad[4] = 2;
  CHECK_THROWS_AS(store_deserialize(bad), IoError);

  CHECK_THROWS_AS(store_deserialize(good.substr(0, good.size() - 1)), IoError);
  CHECK_THROWS_AS(store_deserialize(good + "x"), IoError);

  bad = good;
  bad.replace(bad.find("P2"), 2, "P1");
  CHECK_THROWS_WITH_AS(store_deserialize(bad), doctest::Contains("duplicate"), ValidationError);

  bad = good;
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(bad.data() + bad.size() - 4, &nan, 4);
  CHECK_THROWS_AS(store_deserialize(bad), ValidationError);
}

TEST_CASE("store add validates") {
  EmbeddingStore store(3);
  store.add("A", Vector<float>::Ones(3));
  CHECK_THROWS_AS(store.add("A", Vector<float>::Ones(3)), ValidationError);
  CHECK_THROWS_AS(store.add("B", Vector<float>::Ones(4)), ValidationError);
  Vector<float> inf = Vector<float>::Ones(3);
  inf[1] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(store.add("C", inf), ValidationError);
  CHECK(store.size() == 1);
}

TEST_CASE("tsv import") {
  const auto s = store_import_tsv("# c\nP1\t1,2,3\n\nP2\t-0.5, 0, 1e-3\n");
  REQUIRE(s.size() == 2);
  CHECK(s.dim() == 3);
  CHECK(s.row(1)[0] == -0.5f);
  CHECK_THROWS_AS(store_import_tsv("P1\t1,2\nP2\t1,2,3\n"), ValidationError);
  CHECK_THROWS_AS(store_import_tsv("P1\t1,x\n"), ValidationError);
}

TEST_CASE("token store round trip") {
  std::vector<TokenMatrixRecord> recs;
  recs.push_back({"P1", make_matrix({R::kCls, R::kResidue, R::kSep, R::kPad},
                                    {{1, 2}, {3, 4}, {5, 6}, {0, 0}})});
  recs.push_back({"P2", make_matrix({R::kResidue}, {{7, 8}})});
  const auto bytes = token_store_serialize(2, recs);
  CHECK(bytes.substr(0, 4) == "PVEM");
  std::size_t dim = 0;
  const auto back = token_store_deserialize(bytes, &dim);
  CHECK(dim == 2);
  REQUIRE(back.size() == 2);
  CHECK(back[0].matrix.roles == recs[0].matrix.roles);
  CHECK(back[0].matrix.rows == recs[0].matrix.rows);
  CHECK(back[1].accession == "P2");
  auto bad = bytes;
  bad[bytes.find("P1") + 2 + 4] = 9;  // first role byte
  CHECK_THROWS(token_store_deserialize(bad));
}
