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

#include "protvec/index/hits.hpp"

#include <algorithm>
#include <numeric>

namespace protvec::index {

bool ranks_before(simscore::Metric metric, double score_a, const std::string& acc_a,
                  double score_b, const std::string& acc_b) {
  if (score_a != score_b) return simscore::better(metric, score_a, score_b);
  return acc_a < acc_b;
}

std::vector<ScoredId> rerank(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                             const Vector<float>& q, std::span<const std::uint32_t> candidates,
                             std::size_t k) {
  std::vector<ScoredId> scored;
  scored.reserve(candidates.size());
  for (auto id : candidates) scored.push_back({id, simscore::score(metric, q, store.row(id))});
  auto cmp = [&](const ScoredId& a, const ScoredId& b) {
    return ranks_before(metric, a.score, store.accession(a.id), b.score, store.accession(b.id));
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), cmp);
  scored.resize(keep);
  return scored;
}

std::vector<ScoredId> exact_topk(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                                 const Vector<float>& q, std::size_t k) {
  std::vector<std::uint32_t> all(store.size());
  std::iota(all.begin(), all.end(), 0u);
  return rerank(store, metric, q, all, k);
}

RankedHits to_ranked_hits(const vectorize::EmbeddingStore& store, simscore::Metric metric,
                          std::span<const ScoredId> scored, std::size_t k, std::string query) {
  RankedHits out;
  out.query = std::move(query);
  out.metric = metric;
  out.requested = k;
  out.shortfall = scored.size() < k;
  out.hits.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    out.hits.push_back({store.accession(scored[i].id), scored[i].score, i + 1});
  }
  return out;
}

}  // namespace protvec::index
