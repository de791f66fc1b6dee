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
#include <string>

#include "protvec/align/substitution_matrix.hpp"
#include "protvec/core/sequence.hpp"

namespace protvec::align {

// Positive magnitudes. A gap of length L costs open + (L - 1) * extend.
struct GapPenalties {
  int open = 11;
  int extend = 1;
};

struct AlignmentResult {
  int score = 0;
  std::string aligned_a;  // residues and '-'
  std::string aligned_b;
  double identity_pct = 0.0;  // 100 * identical columns / columns
  std::size_t columns = 0;
  // Half-open residue spans covered by the alignment, 0-based.
  std::size_t a_begin = 0, a_end = 0;
  std::size_t b_begin = 0, b_end = 0;
};

// Global alignment with affine gaps (Gotoh). Ties in the traceback prefer
// diagonal, then up (gap in b), then left (gap in a). Throws
// ValidationError on an empty sequence or gap_open < gap_extend or
// negative penalties.
AlignmentResult nw_align(const core::ProteinSequence& a, const core::ProteinSequence& b,
                         const SubstitutionMatrix& matrix = SubstitutionMatrix::blosum62(),
                         GapPenalties gaps = {});

// Best local alignment with affine gaps. Score 0 and an empty alignment
// when no pair scores positive.
AlignmentResult sw_align(const core::ProteinSequence& a, const core::ProteinSequence& b,
                         const SubstitutionMatrix& matrix = SubstitutionMatrix::blosum62(),
                         GapPenalties gaps = {});

// identity_pct of the global alignment, gap columns in the denominator.
// The lexicographically smaller sequence is aligned first, which makes the
// value symmetric in its arguments.
double percent_identity(const core::ProteinSequence& a, const core::ProteinSequence& b,
                        const SubstitutionMatrix& matrix = SubstitutionMatrix::blosum62(),
                        GapPenalties gaps = {});

}  // namespace protvec::align
