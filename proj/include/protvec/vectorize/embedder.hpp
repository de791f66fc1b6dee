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

#include "protvec/core/sequence.hpp"
#include "protvec/types.hpp"

namespace protvec::vectorize {

// Deterministic stand-in for a protein language model: hashed k-mer counts.
//
// Each k-mer is hashed with FNV-1a 64 over the 8 little-endian seed bytes
// followed by the k-mer bytes; bucket (hash mod dim) is incremented and the
// count vector is L2-normalized in double before rounding to float.
//
// Throws ValidationError when dim < 8, k < 1 or the sequence is shorter
// than k.
Vector<float> kmer_hash_embed(const core::ProteinSequence& seq, std::size_t dim,
                              std::size_t k, std::uint64_t seed);

// Bucket a single k-mer lands in.
std::size_t kmer_bucket(std::string_view kmer, std::size_t dim, std::uint64_t seed);

}  // namespace protvec::vectorize
