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

#include "protvec/evalbench/metrics.hpp"

#include <algorithm>
#include <set>

#include "protvec/core/ec_number.hpp"
#include "protvec/error.hpp"

namespace protvec::evalbench {
namespace {

void check_level(int level) {
  if (level < 1 || level > core::ECNumber::kLevels) {
    throw ValidationError("match level must be in 1..4, got " + std::to_string(level));
  }
}

const core::ECSet& query_labels(const index::RankedHits& hits, const core::LabelTable& labels) {
  const auto* ecs = labels.find(hits.query);
  if (!ecs) throw ValidationError("query '" + hits.query + "' has no EC labels");
  return *ecs;
}

std::set<std::string> positives(const index::RankedHits& hits, const core::LabelTable& labels,
                                int level, std::size_t k) {
  const auto ann = annotate(hits, labels);
  std::set<std::string> out;
  const std::size_t n = std::min(k, hits.hits.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ann.levels[i] >= level) out.insert(hits.hits[i].accession);
  }
  return out;
}

}  // namespace

AnnotatedHits annotate(const index::RankedHits& hits, const core::LabelTable& labels) {
  const auto& q = query_labels(hits, labels);
  AnnotatedHits out;
  out.levels.reserve(hits.hits.size());
  for (const auto& h : hits.hits) {
    const auto* ecs = labels.find(h.accession);
    if (!ecs) {
      out.levels.push_back(0);
      out.unlabeled.push_back(h.accession);
      continue;
    }
    out.levels.push_back(core::ec_match_level(q, *ecs));
  }
  return out;
}

double hit_rate_at_k(std::span<const int> levels, std::size_t k, int level) {
  check_level(level);
  if (k < 1) throw ValidationError("k must be >= 1");
  const std::size_t n = std::min(k, levels.size());
  const auto pos = std::count_if(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n),
                                 [&](int l) { return l >= level; });
  return static_cast<double>(pos) / static_cast<double>(k);
}

double hit_rate_at_k(const index::RankedHits& hits, const core::LabelTable& labels,
                     std::size_t k, int level) {
  return hit_rate_at_k(annotate(hits, labels).levels, k, level);
}

std::size_t tp_until_first_fp(std::span<const int> levels, int level) {
  check_level(level);
  std::size_t n = 0;
  while (n < levels.size() && levels[n] >= level) ++n;
  return n;
}

std::size_t tp_until_first_fp(const index::RankedHits& hits, const core::LabelTable& labels,
                              int level) {
  return tp_until_first_fp(annotate(hits, labels).levels, level);
}

VennSets venn_compare(const index::RankedHits& a, const index::RankedHits& b,
                      const core::LabelTable& labels, int level, std::size_t k) {
  check_level(level);
  if (a.query != b.query) {
    throw ValidationError("venn_compare: query mismatch '" + a.query + "' vs '" + b.query + "'");
  }
  const auto pa = positives(a, labels, level, k);
  const auto pb = positives(b, labels, level, k);
  VennSets out;
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(out.only_a));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(), std::back_inserter(out.only_b));
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(out.both));
  return out;
}

std::vector<PimRow> pim_matrix(const index::RankedHits& hits, const SequenceMap& seqs,
                               const core::LabelTable& labels, PimSort sort,
                               const align::SubstitutionMatrix& matrix, align::GapPenalties gaps) {
  auto qit = seqs.find(hits.query);
  if (qit == seqs.end()) throw ValidationError("no sequence for query '" + hits.query + "'");
  const auto* qecs = labels.find(hits.query);

  std::vector<PimRow> rows;
  rows.reserve(hits.hits.size());
  for (const auto& h : hits.hits) {
    PimRow row;
    row.accession = h.accession;
    row.rank = h.rank;
    if (auto it = seqs.find(h.accession); it != seqs.end()) {
      row.identity_pct = align::percent_identity(qit->second, it->second, matrix, gaps);
    }
    const auto* ecs = labels.find(h.accession);
    row.labeled = ecs != nullptr;
    row.match_level = (ecs && qecs) ? core::ec_match_level(*qecs, *ecs) : 0;
    rows.push_back(std::move(row));
  }
  if (sort == PimSort::kIdentity) {
    std::stable_sort(rows.begin(), rows.end(), [](const PimRow& x, const PimRow& y) {
      if (x.identity_pct.has_value() != y.identity_pct.has_value()) return x.identity_pct.has_value();
      if (x.identity_pct && *x.identity_pct != *y.identity_pct) return *x.identity_pct > *y.identity_pct;
      return x.rank < y.rank;
    });
  } else {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PimRow& x, const PimRow& y) { return x.rank < y.rank; });
  }
  return rows;
}

}  // namespace protvec::evalbench
