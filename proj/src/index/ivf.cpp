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

#include "protvec/index/ivf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "protvec/error.hpp"
#include "protvec/util/random.hpp"

namespace protvec::index {

std::size_t default_nlist(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(r, 1, std::max<std::size_t>(n, 1));
}

IvfIndex IvfIndex::build(const MetricSpace& space, std::size_t nlist, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(space.size());
  if (n == 0) throw ValidationError("IVF build on an empty store");
  if (nlist < 1 || nlist > n) {
    throw ValidationError("nlist must be in [1, " + std::to_string(n) + "], got " +
                          std::to_string(nlist));
  }
  const RowMatrixXd& x = space.points();
  util::Rng rng(seed);

  IvfIndex ivf;
  ivf.centroids_.resize(static_cast<Eigen::Index>(nlist), x.cols());

  // k-means++ seeding
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = util::uniform_index(rng, n);
  ivf.centroids_.row(0) = x.row(static_cast<Eigen::Index>(first));
  for (std::size_t c = 1; c < nlist; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(static_cast<Eigen::Index>(i)) - ivf.centroids_.row(static_cast<Eigen::Index>(c - 1))).squaredNorm());
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = util::uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > u && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = util::uniform_index(rng, n);
    }
    ivf.centroids_.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
  }

  std::vector<std::size_t> assign(n, nlist);  // nlist = unassigned
  auto assign_all = [&] {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = ivf.nearest_list(x.row(static_cast<Eigen::Index>(i)).transpose());
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }
    return changed;
  };

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const bool changed = assign_all();
    ivf.iterations_ = iter + 1;
    if (!changed) break;

    RowMatrixXd sums = RowMatrixXd::Zero(static_cast<Eigen::Index>(nlist), x.cols());
    std::vector<std::size_t> counts(nlist, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(assign[i])) += x.row(static_cast<Eigen::Index>(i));
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < nlist; ++c) {
      if (counts[c] > 0) {
        ivf.centroids_.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
      }
    }
    // Re-seed empty clusters from the point farthest from its centroid,
    // taken only from clusters that can spare a member.
    for (std::size_t c = 0; c < nlist; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        const double d = (x.row(static_cast<Eigen::Index>(i)) - ivf.centroids_.row(static_cast<Eigen::Index>(assign[i]))).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      ivf.centroids_.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
    }
  }
  assign_all();

  ivf.lists_.assign(nlist, {});
  for (std::size_t i = 0; i < n; ++i) ivf.lists_[assign[i]].push_back(static_cast<std::uint32_t>(i));
  return ivf;
}

std::vector<std::size_t> IvfIndex::probe(const Vector<double>& q, std::size_t nprobe) const {
  const std::size_t nl = nlist();
  nprobe = std::clamp<std::size_t>(nprobe, 1, nl);
  std::vector<std::pair<double, std::size_t>> d(nl);
  for (std::size_t c = 0; c < nl; ++c) {
    d[c] = {(centroids_.row(static_cast<Eigen::Index>(c)).transpose() - q).squaredNorm(), c};
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(nprobe), d.end());
  std::vector<std::size_t> out(nprobe);
  for (std::size_t i = 0; i < nprobe; ++i) out[i] = d[i].second;
  return out;
}

void IvfIndex::serialize(util::ByteWriter& w) const {
  w.put(static_cast<std::uint32_t>(centroids_.rows()));
  w.put(static_cast<std::uint32_t>(centroids_.cols()));
  w.put(static_cast<std::int32_t>(iterations_));
  w.put_span(std::span<const double>(centroids_.data(), static_cast<std::size_t>(centroids_.size())));
  for (const auto& l : lists_) {
    w.put(static_cast<std::uint64_t>(l.size()));
    w.put_span(std::span<const std::uint32_t>(l));
  }
}

IvfIndex IvfIndex::deserialize(util::ByteReader& r, std::size_t space_size) {
  IvfIndex ivf;
  const auto rows = r.get<std::uint32_t>();
  const auto cols = r.get<std::uint32_t>();
  ivf.iterations_ = r.get<std::int32_t>();
  if (rows == 0 || static_cast<std::uint64_t>(rows) * cols * sizeof(double) > r.remaining()) {
    throw IoError("corrupt IVF header");
  }
  ivf.centroids_.resize(rows, cols);
  r.get_span(std::span<double>(ivf.centroids_.data(), static_cast<std::size_t>(ivf.centroids_.size())));
  ivf.lists_.resize(rows);
  for (auto& l : ivf.lists_) {
    const auto m = r.get<std::uint64_t>();
    if (m > r.remaining()) throw IoError("corrupt IVF list size");
    l.resize(m);
    r.get_span(std::span<std::uint32_t>(l));
    for (auto id : l) {
      if (id >= space_size) throw IoError("corrupt IVF id");
    }
  }
  return ivf;
}

}  // namespace protvec::index
