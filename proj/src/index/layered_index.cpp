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

#include "protvec/index/layered_index.hpp"

#include <algorithm>
#include <numeric>
#include <zlib.h>

#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"
#include "protvec/util/random.hpp"

namespace protvec::index {
namespace {

constexpr std::string_view kPidxMagic = "PIDX";

enum Stream : std::uint64_t { kVpStream = 1, kLshStream = 2, kIvfStream = 3, kListStream = 100 };

std::uint32_t crc32_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

void validate_params(const IndexParams& p, std::size_t n, IndexMode mode) {
  if (p.leaf_size < 1) throw ValidationError("leaf_size must be >= 1");
  if (mode == IndexMode::kLsh || mode == IndexMode::kLayered) {
    if (p.tables < 1) throw ValidationError("tables must be >= 1");
    if (p.bits < 1 || p.bits > LshTables::kMaxBits) {
      throw ValidationError("bits must be in [1, 63], got " + std::to_string(p.bits));
    }
  }
  if (mode == IndexMode::kIvf || mode == IndexMode::kLayered) {
    if (p.nlist > n) {
      throw ValidationError("nlist " + std::to_string(p.nlist) + " exceeds store size " +
                            std::to_string(n));
    }
    if (p.nprobe < 1) throw ValidationError("nprobe must be >= 1");
  }
}

}  // namespace

std::string_view mode_name(IndexMode mode) {
  switch (mode) {
    case IndexMode::kExact: return "exact";
    case IndexMode::kVpTree: return "vptree";
    case IndexMode::kLsh: return "lsh";
    case IndexMode::kIvf: return "ivf";
    case IndexMode::kLayered: return "layered";
  }
  return "?";
}

std::optional<IndexMode> parse_mode(std::string_view name) {
  for (auto m : {IndexMode::kExact, IndexMode::kVpTree, IndexMode::kLsh, IndexMode::kIvf,
                 IndexMode::kLayered}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

LayeredIndex LayeredIndex::build(vectorize::EmbeddingStore store, IndexMode mode,
                                 simscore::Metric metric, IndexParams params, std::uint64_t seed) {
  if (store.empty()) throw ValidationError("cannot build an index over an empty store");
  const std::size_t n = store.size();
  if (params.nlist == 0) params.nlist = default_nlist(n);
  validate_params(params, n, mode);

  LayeredIndex idx;
  idx.mode_ = mode;
  idx.metric_ = metric;
  idx.params_ = params;
  idx.seed_ = seed;
  idx.store_ = std::move(store);
  idx.space_ = MetricSpace(idx.store_, metric);

  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);

  if (mode == IndexMode::kVpTree) {
    util::Rng rng(util::derive_seed(seed, kVpStream));
    idx.vptree_ = VPTree::build(idx.space_, all, params.leaf_size, rng);
  }
  if (mode == IndexMode::kLsh || mode == IndexMode::kLayered) {
    idx.lsh_ = LshTables(static_cast<std::size_t>(idx.space_.dim()), params.tables, params.bits,
                         util::derive_seed(seed, kLshStream));
    idx.lsh_->insert_all(idx.space_.points());
  }
  if (mode == IndexMode::kIvf || mode == IndexMode::kLayered) {
    idx.ivf_ = IvfIndex::build(idx.space_, params.nlist, util::derive_seed(seed, kIvfStream));
  }
  if (mode == IndexMode::kLayered) {
    for (std::size_t l = 0; l < idx.ivf_->nlist(); ++l) {
      util::Rng rng(util::derive_seed(seed, kListStream + l));
      idx.list_trees_.push_back(VPTree::build(idx.space_, idx.ivf_->list(l), params.leaf_size, rng));
    }
  }
  return idx;
}

std::vector<std::uint32_t> LayeredIndex::candidates(const Vector<double>& qt, std::size_t k,
                                                    const SearchParams& sp) const {
  const std::size_t nprobe = sp.nprobe.value_or(params_.nprobe);
  const bool multiprobe = sp.multiprobe.value_or(params_.multiprobe);
  switch (mode_) {
    case IndexMode::kExact: {
      std::vector<std::uint32_t> all(store_.size());
      std::iota(all.begin(), all.end(), 0u);
      return all;
    }
    case IndexMode::kVpTree:
      return vptree_->topk_candidates(space_, qt, k);
    case IndexMode::kLsh:
      return lsh_->candidates(qt, multiprobe);
    case IndexMode::kIvf: {
      std::vector<std::uint32_t> out;
      for (auto l : ivf_->probe(qt, nprobe)) {
        const auto& ids = ivf_->list(l);
        out.insert(out.end(), ids.begin(), ids.end());
      }
      return out;
    }
    case IndexMode::kLayered: {
      auto lsh_ids = lsh_->candidates(qt, multiprobe);
      std::vector<std::uint8_t> mask(store_.size(), 0);
      for (auto id : lsh_ids) mask[id] = 1;
      const auto probed = ivf_->probe(qt, nprobe);
      std::size_t overlap = 0;
      for (auto l : probed) {
        for (auto id : ivf_->list(l)) overlap += mask[id];
      }
      if (overlap < k) return lsh_ids;
      std::vector<std::uint32_t> out;
      for (auto l : probed) {
        auto part = list_trees_[l].topk_candidates(space_, qt, k, &mask);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
  }
  return {};
}

RankedHits LayeredIndex::search(const Vector<float>& q, std::size_t k, const SearchParams& sp,
                                std::string query_accession) const {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (static_cast<std::size_t>(q.size()) != store_.dim()) {
    throw ValidationError("query dimension " + std::to_string(q.size()) + " does not match index " +
                          std::to_string(store_.dim()));
  }
  const auto qt = space_.transform_query(q);
  const auto cand = candidates(qt, k, sp);
  const auto scored = rerank(store_, metric_, q, cand, k);
  return to_ranked_hits(store_, metric_, scored, k, std::move(query_accession));
}

RankedHits LayeredIndex::search_accession(std::string_view accession, std::size_t k,
                                          const SearchParams& sp) const {
  const auto i = store_.find(accession);
  if (!i) throw ValidationError("accession '" + std::string(accession) + "' not in the index");
  return search(store_.row(*i), k, sp, std::string(accession));
}

std::string LayeredIndex::serialize() const {
  util::ByteWriter w;
  w.put_bytes(kPidxMagic);
  w.put(kPidxVersion);
  w.put(static_cast<std::uint8_t>(mode_));
  w.put(static_cast<std::uint8_t>(metric_));
  w.put(static_cast<std::uint32_t>(params_.leaf_size));
  w.put(static_cast<std::uint32_t>(params_.tables));
  w.put(static_cast<std::uint32_t>(params_.bits));
  w.put(static_cast<std::uint32_t>(params_.nlist));
  w.put(static_cast<std::uint32_t>(params_.nprobe));
  w.put(static_cast<std::uint8_t>(params_.multiprobe));
  w.put(seed_);

  const auto store_bytes = vectorize::store_serialize(store_);
  w.put(static_cast<std::uint64_t>(store_bytes.size()));
  w.put_bytes(store_bytes);
  if (vptree_) vptree_->serialize(w);
  if (lsh_) lsh_->serialize(w);
  if (ivf_) ivf_->serialize(w);
  for (const auto& t : list_trees_) t.serialize(w);

  w.put(crc32_of(w.bytes()));
  return std::move(w).take();
}

LayeredIndex LayeredIndex::deserialize(std::string_view bytes) {
  util::ByteReader head(bytes);
  if (bytes.size() < 8) throw IoError("truncated stream");
  if (head.get_bytes(4) != kPidxMagic) throw IoError("bad magic: expected PIDX");
  const auto version = head.get<std::uint32_t>();
  if (version != kPidxVersion) throw IoError("unsupported PIDX version " + std::to_string(version));
  if (bytes.size() < 12) throw IoError("checksum failure: stream too short");
  const auto body = bytes.substr(0, bytes.size() - 4);
  util::ByteReader tail(bytes.substr(bytes.size() - 4));
  if (crc32_of(body) != tail.get<std::uint32_t>()) throw IoError("checksum failure");

  util::ByteReader r(body);
  r.get_bytes(8);
  LayeredIndex idx;
  const auto mode = r.get<std::uint8_t>();
  const auto metric = r.get<std::uint8_t>();
  if (mode > static_cast<std::uint8_t>(IndexMode::kLayered)) throw IoError("bad index mode byte");
  if (metric > static_cast<std::uint8_t>(simscore::Metric::kNormL2)) throw IoError("bad metric byte");
  idx.mode_ = static_cast<IndexMode>(mode);
  idx.metric_ = static_cast<simscore::Metric>(metric);
  idx.params_.leaf_size = r.get<std::uint32_t>();
  idx.params_.tables = r.get<std::uint32_t>();
  idx.params_.bits = r.get<std::uint32_t>();
  idx.params_.nlist = r.get<std::uint32_t>();
  idx.params_.nprobe = r.get<std::uint32_t>();
  idx.params_.multiprobe = r.get<std::uint8_t>() != 0;
  idx.seed_ = r.get<std::uint64_t>();

  const auto store_len = r.get<std::uint64_t>();
  if (store_len > r.remaining()) throw IoError("truncated stream");
  idx.store_ = vectorize::store_deserialize(r.get_bytes(store_len));
  if (idx.store_.empty()) throw IoError("PIDX holds an empty store");
  idx.space_ = MetricSpace(idx.store_, idx.metric_);
  const std::size_t n = idx.store_.size();

  if (idx.mode_ == IndexMode::kVpTree) idx.vptree_ = VPTree::deserialize(r, n);
  if (idx.mode_ == IndexMode::kLsh || idx.mode_ == IndexMode::kLayered) {
    idx.lsh_ = LshTables::deserialize(r, n);
    if (idx.lsh_->dim() != static_cast<std::size_t>(idx.space_.dim())) {
      throw IoError("LSH dimension does not match the store");
    }
  }
  if (idx.mode_ == IndexMode::kIvf || idx.mode_ == IndexMode::kLayered) {
    idx.ivf_ = IvfIndex::deserialize(r, n);
    if (idx.ivf_->centroids().cols() != idx.space_.dim()) {
      throw IoError("IVF dimension does not match the store");
    }
  }
  if (idx.mode_ == IndexMode::kLayered) {
    for (std::size_t l = 0; l < idx.ivf_->nlist(); ++l) {
      idx.list_trees_.push_back(VPTree::deserialize(r, n));
    }
  }
  if (!r.at_end()) throw IoError("trailing bytes in PIDX payload");
  return idx;
}

void index_save(const LayeredIndex& index, const std::filesystem::path& path) {
  util::write_file(path, index.serialize());
}

LayeredIndex index_load(const std::filesystem::path& path) {
  return LayeredIndex::deserialize(util::read_file(path));
}

double recall_vs_exact(const LayeredIndex& index, const RowMatrixXf& queries, std::size_t k,
                       const SearchParams& sp) {
  if (queries.rows() == 0 || k == 0) return 1.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    const Vector<float> q = queries.row(i).transpose();
    const auto approx = index.search(q, k, sp);
    auto exact = exact_topk(index.store(), index.metric(), q, k);
    std::vector<std::uint32_t> truth;
    for (const auto& s : exact) truth.push_back(s.id);
    std::sort(truth.begin(), truth.end());
    std::size_t found = 0;
    for (const auto& h : approx.hits) {
      const auto id = static_cast<std::uint32_t>(*index.store().find(h.accession));
      found += std::binary_search(truth.begin(), truth.end(), id) ? 1 : 0;
    }
    total += static_cast<double>(found) / static_cast<double>(k);
  }
  return total / static_cast<double>(queries.rows());
}

}  // namespace protvec::index
