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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "protvec/types.hpp"
#include "protvec/vectorize/tokens.hpp"

namespace protvec::vectorize {

// Fixed-dimension float vectors keyed by unique accession, stored row-wise.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim = 0);

  // Throws ValidationError on dimension mismatch, duplicate accession or a
  // non-finite value.
  template <typename Derived>
  void add(std::string accession, const Eigen::MatrixBase<Derived>& values) {
    add_row(std::move(accession), values.template cast<float>().eval());
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return accessions_.size(); }
  bool empty() const noexcept { return accessions_.empty(); }

  const std::string& accession(std::size_t i) const { return accessions_[i]; }
  const std::vector<std::string>& accessions() const noexcept { return accessions_; }

  // Column-vector view of record i.
  Eigen::Map<const Vector<float>> row(std::size_t i) const {
    return Eigen::Map<const Vector<float>>(values_.data() + i * dim_,
                                           static_cast<Eigen::Index>(dim_));
  }

  // N x dim row-major view.
  Eigen::Map<const RowMatrixXf> matrix() const {
    return Eigen::Map<const RowMatrixXf>(values_.data(), static_cast<Eigen::Index>(size()),
                                         static_cast<Eigen::Index>(dim_));
  }

  std::optional<std::size_t> find(std::string_view accession) const;

  friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b);

 private:
  void add_row(std::string accession, const Vector<float>& values);

  std::size_t dim_;
  std::vector<std::string> accessions_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> values_;
};

// PVEC: "PVEC" | u32 version=1 | u32 dim | u64 count, then per record
// u16 accession length | accession bytes | dim x f32. Little-endian.
inline constexpr std::uint32_t kPvecVersion = 1;

std::string store_serialize(const EmbeddingStore& store);
// Throws IoError on bad magic, unknown version, truncation or trailing
// bytes; ValidationError on duplicate accession or NaN/Inf payload.
EmbeddingStore store_deserialize(std::string_view bytes);

void store_write(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore store_read(const std::filesystem::path& path);

// "accession<TAB>v1,v2,..." per line; '#' lines and blank lines skipped.
EmbeddingStore store_import_tsv(std::string_view text);

struct TokenMatrixRecord {
  std::string accession;
  TokenEmbeddingMatrix matrix;
};

// PVEM: "PVEM" | u32 version=1 | u32 dim | u64 count, then per record
// u16 accession length | accession | u32 T | T role bytes | T x dim x f32.
std::string token_store_serialize(std::size_t dim, const std::vector<TokenMatrixRecord>& records);
std::vector<TokenMatrixRecord> token_store_deserialize(std::string_view bytes,
                                                       std::size_t* dim_out = nullptr);

}  // namespace protvec::vectorize
