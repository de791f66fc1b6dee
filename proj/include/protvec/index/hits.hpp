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
#include <span>
#include <string>
#include <vector>

#include "protvec/simscore/simscore.hpp"
#include "protvec/types.hpp"
#include "protvec/vectorize/store.hpp"

namespace protvec::index {

struct Hit {
  std::string accession;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct RankedHits {
  std::string query;
  simscore::Metric metric = simscore::Metric::kCosine;
  std::size_t requested = 0;  // k asked for
  bool shortfall = false;     // fewer than `requested` candidates were available
  std::vector<Hit> hits;

  friend bool operator==(const RankedHits&, const RankedHits&) = default;
};

// Strict weak order: better score first, then accession ascending.
bool ranks_before(simscore::Metric metric, double score_a, const std::string& acc_a,
                  double score_b, const std::string& acc_b);

struct ScoredId {
  std::uint32_t id;
  double score;
};

// Scores candidate rows of `store` against q with the true metric and keeps
// the best k in ranking order. Candidates must be distinct.
std::vector<ScoredId> rerank(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                             const Vector<float>& q, std::span<const std::uint32_t> candidates,
                             std::size_t k);

// Brute-force top-k over the whole store.
std::vector<ScoredId> exact_topk(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                                 const Vector<float>& q, std::size_t k);

RankedHits to_ranked_hits(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                          std::span<const ScoredId> scored, std::size_t k, std::string query);

}  // namespace protvec::index
