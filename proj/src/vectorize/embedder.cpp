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

#include "protvec/vectorize/embedder.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::vectorize {
namespace {

std::uint64_t seed_state(std::uint64_t seed) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  return util::fnv1a64(std::string_view(bytes, 8));
}

}  // namespace

std::size_t kmer_bucket(std::string_view kmer, std::size_t dim, std::uint64_t seed) {
  return static_cast<std::size_t>(util::fnv1a64(kmer, seed_state(seed)) % dim);
}

Vector<float> kmer_hash_embed(const core::ProteinSequence& seq, std::size_t dim,
                              std::size_t k, std::uint64_t seed) {
  if (dim < 8) throw ValidationError("embedding dimension must be >= 8, got " + std::to_string(dim));
  if (k < 1) throw ValidationError("k-mer length must be >= 1");
  if (seq.size() < k) {
    throw ValidationError("sequence of length " + std::to_string(seq.size()) +
                          " is shorter than k=" + std::to_string(k));
  }
  const std::uint64_t state = seed_state(seed);
  std::vector<double> counts(dim, 0.0);
  const auto res = seq.residues();
  for (std::size_t i = 0; i + k <= res.size(); ++i) {
    counts[util::fnv1a64(res.substr(i, k), state) % dim] += 1.0;
  }
  double sq = 0.0;
  for (double c : counts) sq += c * c;
  const double norm = std::sqrt(sq);
  Vector<float> out(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) out[static_cast<Eigen::Index>(i)] = static_cast<float>(counts[i] / norm);
  return out;
}

}  // namespace protvec::vectorize
