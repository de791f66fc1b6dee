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

#include "protvec/index/lsh.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "protvec/error.hpp"
#include "protvec/util/random.hpp"

namespace protvec::index {

LshTables::LshTables(std::size_t dim, std::size_t tables, std::size_t bits, std::uint64_t seed)
    : dim_(dim), tables_(tables), bits_(bits), seed_(seed) {
  if (dim == 0) throw ValidationError("LSH dimension must be >= 1");
  if (tables == 0) throw ValidationError("LSH table count must be >= 1");
  if (bits == 0 || bits > kMaxBits) {
    throw ValidationError("LSH bits must be in [1, 63], got " + std::to_string(bits));
  }
  make_planes(seed);
  buckets_.resize(tables_);
}

void LshTables::make_planes(std::uint64_t seed) {
  planes_.resize(static_cast<Eigen::Index>(tables_ * bits_), static_cast<Eigen::Index>(dim_));
  for (std::size_t t = 0; t < tables_; ++t) {
    util::Rng rng(util::derive_seed(seed, t));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t b = 0; b < bits_; ++b) {
      for (std::size_t j = 0; j < dim_; ++j) {
        planes_(static_cast<Eigen::Index>(t * bits_ + b), static_cast<Eigen::Index>(j)) = normal(rng);
      }
    }
  }
}

void LshTables::insert_all(const RowMatrixXd& points) {
  if (static_cast<std::size_t>(points.cols()) != dim_) {
    throw ValidationError("LSH insert dimension mismatch");
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (std::size_t t = 0; t < tables_; ++t) {
      buckets_[t][code(t, points.row(i).transpose())].push_back(static_cast<std::uint32_t>(i));
    }
  }
}

std::vector<std::uint32_t> LshTables::candidates(const Vector<double>& x, bool multiprobe) const {
  std::vector<std::uint32_t> out;
  auto take = [&](std::size_t t, std::uint64_t c) {
    auto it = buckets_[t].find(c);
    if (it != buckets_[t].end()) out.insert(out.end(), it->second.begin(), it->second.end());
  };
  for (std::size_t t = 0; t < tables_; ++t) {
    const auto c = code(t, x);
    take(t, c);
    if (multiprobe) {
      for (std::size_t b = 0; b < bits_; ++b) take(t, c ^ (std::uint64_t{1} << b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t LshTables::entry_count() const {
  std::size_t n = 0;
  for (const auto& table : buckets_) {
    for (const auto& [code, ids] : table) n += ids.size();
  }
  return n;
}

void LshTables::serialize(util::ByteWriter& w) const {
  w.put(static_cast<std::uint32_t>(dim_));
  w.put(static_cast<std::uint32_t>(tables_));
  w.put(static_cast<std::uint32_t>(bits_));
  w.put(seed_);
  w.put_span(std::span<const double>(planes_.data(), static_cast<std::size_t>(planes_.size())));
  for (const auto& table : buckets_) {
    std::vector<std::uint64_t> codes;
    codes.reserve(table.size());
    for (const auto& [c, ids] : table) codes.push_back(c);
    std::sort(codes.begin(), codes.end());
    w.put(static_cast<std::uint64_t>(codes.size()));
    for (auto c : codes) {
      const auto& ids = table.at(c);
      w.put(c);
      w.put(static_cast<std::uint64_t>(ids.size()));
      w.put_span(std::span<const std::uint32_t>(ids));
    }
  }
}

LshTables LshTables::deserialize(util::ByteReader& r, std::size_t space_size) {
  LshTables t;
  t.dim_ = r.get<std::uint32_t>();
  t.tables_ = r.get<std::uint32_t>();
  t.bits_ = r.get<std::uint32_t>();
  t.seed_ = r.get<std::uint64_t>();
  if (t.tables_ == 0 || t.bits_ == 0 || t.bits_ > kMaxBits || t.dim_ == 0) {
    throw IoError("corrupt LSH parameters");
  }
  if (t.tables_ * t.bits_ * t.dim_ * sizeof(double) > r.remaining()) {
    throw IoError("truncated stream");
  }
  t.planes_.resize(static_cast<Eigen::Index>(t.tables_ * t.bits_), static_cast<Eigen::Index>(t.dim_));
  r.get_span(std::span<double>(t.planes_.data(), static_cast<std::size_t>(t.planes_.size())));
  t.buckets_.resize(t.tables_);
  for (auto& table : t.buckets_) {
    const auto n = r.get<std::uint64_t>();
    if (n > r.remaining()) throw IoError("corrupt LSH bucket count");
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto c = r.get<std::uint64_t>();
      const auto m = r.get<std::uint64_t>();
      if (m > r.remaining()) throw IoError("corrupt LSH bucket size");
      std::vector<std::uint32_t> ids(m);
      r.get_span(std::span<std::uint32_t>(ids));
      for (auto id : ids) {
        if (id >= space_size) throw IoError("corrupt LSH id");
      }
      table.emplace(c, std::move(ids));
    }
  }
  return t;
}

}  // namespace protvec::index
