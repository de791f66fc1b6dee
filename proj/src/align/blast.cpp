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

#include "protvec/align/blast.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <unordered_map>

#include "protvec/core/alphabet.hpp"
#include "protvec/error.hpp"

namespace protvec::align {
namespace {

long ipow20(std::size_t k) {
  long v = 1;
  for (std::size_t i = 0; i < k; ++i) v *= 20;
  return v;
}

}  // namespace

long NeighborhoodTable::word_code(std::string_view s) {
  long code = 0;
  for (char c : s) {
    const int idx = core::canonical_index(c);
    if (idx < 0) return -1;
    code = code * 20 + idx;
  }
  return code;
}

NeighborhoodTable::NeighborhoodTable(std::string_view query, const SubstitutionMatrix& matrix,
                                     std::size_t word, int threshold)
    : word_(word) {
  const long words = ipow20(word);
  std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(words));
  const auto q = matrix.encode(query);
  std::vector<std::uint8_t> canon(20);
  for (int i = 0; i < 20; ++i) canon[i] = matrix.code(core::kCanonicalResidues[i]);

  std::vector<int> suffix_max(word + 1);
  for (std::size_t p = 0; p + word <= q.size(); ++p) {
    // Best attainable score from position j onward, for pruning.
    suffix_max[word] = 0;
    for (std::size_t j = word; j-- > 0;) {
      int best = std::numeric_limits<int>::min();
      for (auto c : canon) best = std::max(best, matrix.score_codes(q[p + j], c));
      suffix_max[j] = suffix_max[j + 1] + best;
    }
    // Depth-first enumeration of canonical words.
    struct Frame {
      std::size_t depth;
      long code;
      int score;
    };
    std::vector<Frame> stack{{0, 0, 0}};
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.depth == word) {
        buckets[static_cast<std::size_t>(f.code)].push_back(static_cast<std::uint32_t>(p));
        continue;
      }
      for (int c = 19; c >= 0; --c) {
        const int s = f.score + matrix.score_codes(q[p + f.depth], canon[c]);
        if (s + suffix_max[f.depth + 1] < threshold) continue;
        stack.push_back({f.depth + 1, f.code * 20 + c, s});
      }
    }
  }
  starts_.assign(static_cast<std::size_t>(words) + 1, 0);
  for (long w = 0; w < words; ++w) {
    starts_[w + 1] = starts_[w] + static_cast<std::uint32_t>(buckets[w].size());
  }
  positions_.reserve(starts_.back());
  for (auto& b : buckets) {
    std::sort(b.begin(), b.end());
    positions_.insert(positions_.end(), b.begin(), b.end());
  }
}

std::vector<BlastHit> blast_search(const core::ProteinSequence& query,
                                   std::span<const core::FastaRecord> db,
                                   const SubstitutionMatrix& matrix, BlastParams params) {
  if (params.word < 1 || params.word > 5) throw ValidationError("word length must be in 1..5");
  if (query.size() < params.word) {
    throw ValidationError("query of length " + std::to_string(query.size()) +
                          " is shorter than the word length " + std::to_string(params.word));
  }
  if (db.empty()) throw ValidationError("blast database is empty");
  if (params.xdrop < 0) throw ValidationError("xdrop must be >= 0");

  const auto qs = query.residues();
  const NeighborhoodTable table(qs, matrix, params.word, params.threshold);
  const auto q = matrix.encode(qs);
  const std::size_t k = params.word;

  std::vector<BlastHit> hits;
  for (const auto& rec : db) {
    const auto ts = rec.sequence.residues();
    if (ts.size() < k) continue;
    const auto t = matrix.encode(ts);
    // Per diagonal: target end of the last extension, to skip seeds that
    // fall inside it.
    std::unordered_map<long, std::size_t> extended_to;
    std::optional<Hsp> best;

    for (std::size_t tp = 0; tp + k <= ts.size(); ++tp) {
      const long code = NeighborhoodTable::word_code(ts.substr(tp, k));
      if (code < 0) continue;
      for (const auto qp : table.offsets(code)) {
        const long diag = static_cast<long>(tp) - static_cast<long>(qp);
        auto it = extended_to.find(diag);
        if (it != extended_to.end() && tp < it->second) continue;

        int seed = 0;
        for (std::size_t i = 0; i < k; ++i) seed += matrix.score_codes(q[qp + i], t[tp + i]);

        // Right extension from the end of the seed.
        int run = seed, top = seed;
        std::size_t right = k;
        for (std::size_t i = k; qp + i < q.size() && tp + i < t.size(); ++i) {
          run += matrix.score_codes(q[qp + i], t[tp + i]);
          if (run > top) {
            top = run;
            right = i + 1;
          } else if (top - run > params.xdrop) {
            break;
          }
        }
        // Left extension from the start of the seed.
        run = top;
        std::size_t left = 0;
        for (std::size_t i = 1; i <= qp && i <= tp; ++i) {
          run += matrix.score_codes(q[qp - i], t[tp - i]);
          if (run > top) {
            top = run;
            left = i;
          } else if (top - run > params.xdrop) {
            break;
          }
        }

        Hsp h;
        h.q_begin = qp - left;
        h.q_end = qp + right;
        h.t_begin = tp - left;
        h.t_end = tp + right;
        h.score = top;
        h.diagonal = diag;
        for (std::size_t i = 0; i < h.length(); ++i) {
          h.identities += (ts[h.t_begin + i] == qs[h.q_begin + i]) ? 1 : 0;
        }
        extended_to[diag] = h.t_end;
        if (!best || h.score > best->score ||
            (h.score == best->score &&
             std::pair(h.q_begin, h.t_begin) < std::pair(best->q_begin, best->t_begin))) {
          best = h;
        }
      }
    }
    if (best && best->score >= params.min_score) hits.push_back({rec.accession, *best});
  }
  std::sort(hits.begin(), hits.end(), [](const BlastHit& a, const BlastHit& b) {
    if (a.hsp.score != b.hsp.score) return a.hsp.score > b.hsp.score;
    return a.accession < b.accession;
  });
  return hits;
}

}  // namespace protvec::align
