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
#include <span>
#include <string>
#include <vector>

#include "protvec/align/substitution_matrix.hpp"
#include "protvec/core/fasta.hpp"

namespace protvec::align {

struct BlastParams {
  std::size_t word = 3;  // k-mer length, 1..5
  int threshold = 11;    // neighborhood word score T
  int xdrop = 20;        // stop extending once the running score falls more than X below the best
  int min_score = 30;    // report HSPs scoring at least S
};

// Ungapped high-scoring segment pair; spans are half-open and equal length.
struct Hsp {
  std::size_t q_begin = 0, q_end = 0;
  std::size_t t_begin = 0, t_end = 0;
  int score = 0;
  long diagonal = 0;  // t_begin - q_begin
  std::size_t identities = 0;

  std::size_t length() const noexcept { return q_end - q_begin; }
  double identity_pct() const noexcept {
    return length() ? 100.0 * static_cast<double>(identities) / static_cast<double>(length()) : 0.0;
  }
};

struct BlastHit {
  std::string accession;
  Hsp hsp;
};

// Words over the 20 canonical residues scoring >= threshold against each
// query word, as a table from word code to query offsets.
class NeighborhoodTable {
 public:
  NeighborhoodTable(std::string_view query, const SubstitutionMatrix& matrix,
                    std::size_t word, int threshold);

  // Base-20 code of the canonical word at s, or -1 when it contains a
  // non-canonical residue.
  static long word_code(std::string_view s);

  std::span<const std::uint32_t> offsets(long code) const {
    return {positions_.data() + starts_[code], starts_[code + 1] - starts_[code]};
  }
  std::size_t word() const noexcept { return word_; }
  std::size_t entries() const noexcept { return positions_.size(); }

 private:
  std::size_t word_;
  std::vector<std::uint32_t> starts_;     // CSR row starts, 20^word + 1
  std::vector<std::uint32_t> positions_;  // query offsets
};

// One-hit seeding, ungapped bidirectional X-drop extension, best HSP per
// target. Results are ordered by score descending, then accession.
// Throws ValidationError when the query is shorter than the word, the
// database is empty or the word length is outside 1..5.
std::vector<BlastHit> blast_search(const core::ProteinSequence& query,
                                   std::span<const core::FastaRecord> db,
                                   const SubstitutionMatrix& matrix = SubstitutionMatrix::blosum62(),
                                   BlastParams params = {});

}  // namespace protvec::align
