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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protvec/align/pairwise.hpp"
#include "protvec/core/labels.hpp"
#include "protvec/core/sequence.hpp"
#include "protvec/index/hits.hpp"

namespace protvec::evalbench {

// EC match level of every hit against the query. Unlabeled hits get level
// 0 and are listed in `unlabeled`.
struct AnnotatedHits {
  std::vector<int> levels;
  std::vector<std::string> unlabeled;
};

// Throws ValidationError when the query itself is unlabeled.
AnnotatedHits annotate(const index::RankedHits& hits, const core::LabelTable& labels);

// Positives among the first min(k, |levels|) entries, divided by k.
double hit_rate_at_k(std::span<const int> levels, std::size_t k, int level);
double hit_rate_at_k(const index::RankedHits& hits, const core::LabelTable& labels,
                     std::size_t k, int level);

// Length of the leading run of positives.
std::size_t tp_until_first_fp(std::span<const int> levels, int level);
std::size_t tp_until_first_fp(const index::RankedHits& hits, const core::LabelTable& labels,
                              int level);

// Positive accessions in the top-k of two rankings for the same query,
// split into exclusive and shared sets (each sorted).
struct VennSets {
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;
  std::vector<std::string> both;
};

VennSets venn_compare(const index::RankedHits& a, const index::RankedHits& b,
                      const core::LabelTable& labels, int level, std::size_t k);

enum class PimSort { kRank, kIdentity };

struct PimRow {
  std::string accession;
  std::size_t rank = 0;
  std::optional<double> identity_pct;  // empty when the sequence is missing
  int match_level = 0;
  bool labeled = true;
};

using SequenceMap = std::map<std::string, core::ProteinSequence, std::less<>>;

// Percent identity (global alignment) of each hit against the query. Rows
// with missing sequences keep their place in rank order and sort last by
// identity. Throws ValidationError when the query sequence is missing.
std::vector<PimRow> pim_matrix(const index::RankedHits& hits, const SequenceMap& seqs,
                               const core::LabelTable& labels, PimSort sort,
                               const align::SubstitutionMatrix& matrix = align::SubstitutionMatrix::blosum62(),
                               align::GapPenalties gaps = {});

}  // namespace protvec::evalbench
