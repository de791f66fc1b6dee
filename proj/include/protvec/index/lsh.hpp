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
#include <unordered_map>
#include <vector>

#include "protvec/types.hpp"
#include "protvec/util/binary_io.hpp"

namespace protvec::index {

// Random-hyperplane (sign) LSH with several independent tables. Bit j of a
// table's code is set when the j-th hyperplane has a positive dot product
// with the vector. Hyperplanes for table t depend only on (seed, t).
class LshTables {
 public:
  static constexpr std::size_t kMaxBits = 63;

  LshTables() = default;
  // Throws ValidationError when tables or bits is zero, or bits > 63.
  LshTables(std::size_t dim, std::size_t tables, std::size_t bits, std::uint64_t seed);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t tables() const noexcept { return tables_; }
  std::size_t bits() const noexcept { return bits_; }

  template <typename D>
  std::uint64_t code(std::size_t table, const Eigen::MatrixBase<D>& x) const {
    std::uint64_t c = 0;
    for (std::size_t b = 0; b < bits_; ++b) {
      const double proj = planes_.row(static_cast<Eigen::Index>(table * bits_ + b)).dot(
          x.template cast<double>().transpose());
      if (proj > 0.0) c |= (std::uint64_t{1} << b);
    }
    return c;
  }

  // Inserts rows of `points` with ids 0..N-1.
  void insert_all(const RowMatrixXd& points);

  // Sorted distinct ids sharing a bucket with x in some table; with
  // multiprobe, buckets at Hamming distance 1 are probed too.
  std::vector<std::uint32_t> candidates(const Vector<double>& x, bool multiprobe) const;

  // Number of (table, id) entries; N * tables after insert_all.
  std::size_t entry_count() const;
  const std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>& buckets(std::size_t table) const {
    return buckets_[table];
  }

  void serialize(util::ByteWriter& w) const;
  static LshTables deserialize(util::ByteReader& r, std::size_t space_size);

 private:
  void make_planes(std::uint64_t seed);

  std::size_t dim_ = 0;
  std::size_t tables_ = 0;
  std::size_t bits_ = 0;
  std::uint64_t seed_ = 0;
  RowMatrixXd planes_;  // (tables * bits) x dim
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> buckets_;
};

}  // namespace protvec::index
