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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protvec/index/hits.hpp"
#include "protvec/index/ivf.hpp"
#include "protvec/index/lsh.hpp"
#include "protvec/index/metric_space.hpp"
#include "protvec/index/vptree.hpp"
#include "protvec/vectorize/store.hpp"

namespace protvec::index {

enum class IndexMode : std::uint8_t { kExact = 0, kVpTree = 1, kLsh = 2, kIvf = 3, kLayered = 4 };

std::string_view mode_name(IndexMode mode);
std::optional<IndexMode> parse_mode(std::string_view name);

struct IndexParams {
  std::size_t leaf_size = 32;
  std::size_t tables = 8;
  std::size_t bits = 16;
  std::size_t nlist = 0;  // 0 = round(sqrt(N))
  std::size_t nprobe = 8;
  bool multiprobe = false;

  friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

// Per-query overrides of the build defaults.
struct SearchParams {
  std::optional<std::size_t> nprobe;
  std::optional<bool> multiprobe;
};

// Multi-layer accelerated index over an embedding store.
//
//   exact    brute force
//   vptree   one VP-tree over the metric space; exact
//   lsh      union of matching LSH buckets, reranked
//   ivf      union of the nprobe nearest inverted lists, reranked
//   layered  LSH candidates intersected with the probed IVF lists, searched
//            through per-list VP-trees; when the intersection holds fewer
//            than k points the LSH candidate union is reranked instead
//
// Every mode reranks its candidates with the true metric. COSINE and NORM_L2
// run over unit vectors, IP over MIPS-augmented vectors. Immutable after
// build and safe for concurrent searches.
class LayeredIndex {
 public:
  // Throws ValidationError on an empty store, nlist > N, bits > 63 or other
  // out-of-range parameters.
  static LayeredIndex build(vectorize::EmbeddingStore store, IndexMode mode,
                            simscore::Metric metric, IndexParams params, std::uint64_t seed);

  RankedHits search(const Vector<float>& q, std::size_t k, const SearchParams& sp = {},
                    std::string query_accession = {}) const;

  // Convenience: query with a stored vector.
  RankedHits search_accession(std::string_view accession, std::size_t k,
                              const SearchParams& sp = {}) const;

  IndexMode mode() const noexcept { return mode_; }
  simscore::Metric metric() const noexcept { return metric_; }
  const IndexParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const vectorize::EmbeddingStore& store() const noexcept { return store_; }
  const MetricSpace& space() const noexcept { return space_; }
  const std::optional<VPTree>& vptree() const noexcept { return vptree_; }
  const std::optional<LshTables>& lsh() const noexcept { return lsh_; }
  const std::optional<IvfIndex>& ivf() const noexcept { return ivf_; }
  const std::vector<VPTree>& list_trees() const noexcept { return list_trees_; }

  std::string serialize() const;
  // Throws IoError on bad magic, version mismatch, checksum failure or a
  // malformed payload.
  static LayeredIndex deserialize(std::string_view bytes);

 private:
  LayeredIndex() = default;
  std::vector<std::uint32_t> candidates(const Vector<double>& qt, std::size_t k,
                                        const SearchParams& sp) const;

  IndexMode mode_ = IndexMode::kExact;
  simscore::Metric metric_ = simscore::Metric::kCosine;
  IndexParams params_;
  std::uint64_t seed_ = 0;
  vectorize::EmbeddingStore store_;
  MetricSpace space_;
  std::optional<VPTree> vptree_;
  std::optional<LshTables> lsh_;
  std::optional<IvfIndex> ivf_;
  std::vector<VPTree> list_trees_;
};

inline constexpr std::uint32_t kPidxVersion = 1;

void index_save(const LayeredIndex& index, const std::filesystem::path& path);
LayeredIndex index_load(const std::filesystem::path& path);

// Mean over query rows of |approx top-k ∩ exact top-k| / k.
double recall_vs_exact(const LayeredIndex& index, const RowMatrixXf& queries, std::size_t k,
                       const SearchParams& sp = {});

}  // namespace protvec::index
