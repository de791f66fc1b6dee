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

#include "protvec/align/pairwise.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "protvec/error.hpp"

namespace protvec::align {
namespace {

constexpr int kNeg = std::numeric_limits<int>::min() / 4;

// Gotoh states: M ends in an aligned pair, X in a gap in b (consumes a,
// "up"), Y in a gap in a (consumes b, "left").
enum State : std::uint8_t { kM = 0, kX = 1, kY = 2, kStop = 3 };

// Traceback byte: bits 0-1 predecessor of M, 2-3 of X, 4-5 of Y.
inline std::uint8_t pack(State m, State x, State y) {
  return static_cast<std::uint8_t>(m | (x << 2) | (y << 4));
}
inline State pred(std::uint8_t tb, State s) { return static_cast<State>((tb >> (2 * s)) & 3); }

// argmax with priority M > X > Y.
inline std::pair<int, State> best3(int m, int x, int y) {
  if (m >= x && m >= y) return {m, kM};
  if (x >= y) return {x, kX};
  return {y, kY};
}

void check_inputs(const core::ProteinSequence& a, const core::ProteinSequence& b, GapPenalties g) {
  if (a.empty() || b.empty()) throw ValidationError("alignment needs non-empty sequences");
  if (g.extend < 0 || g.open < g.extend) {
    throw ValidationError("gap penalties must satisfy open >= extend >= 0");
  }
}

void finish(AlignmentResult& r) {
  std::reverse(r.aligned_a.begin(), r.aligned_a.end());
  std::reverse(r.aligned_b.begin(), r.aligned_b.end());
  r.columns = r.aligned_a.size();
  std::size_t same = 0;
  for (std::size_t c = 0; c < r.columns; ++c) {
    if (r.aligned_a[c] != '-' && r.aligned_a[c] == r.aligned_b[c]) ++same;
  }
  r.identity_pct = r.columns ? 100.0 * static_cast<double>(same) / static_cast<double>(r.columns) : 0.0;
}

// Shared DP. Local mode floors M at a fresh start and records where the
// best M cell is.
struct Dp {
  std::size_t n, m;
  std::vector<std::uint8_t> tb;  // (n+1) x (m+1)
  std::vector<std::uint8_t> start;  // local only: M cell began a new alignment
  int final_m = kNeg, final_x = kNeg, final_y = kNeg;
  int best = 0;
  std::size_t best_i = 0, best_j = 0;

  std::uint8_t& at(std::size_t i, std::size_t j) { return tb[i * (m + 1) + j]; }
};

Dp run_dp(std::string_view a, std::string_view b, const SubstitutionMatrix& matrix,
          GapPenalties g, bool local) {
  Dp dp{a.size(), b.size(), {}, {}, kNeg, kNeg, kNeg, 0, 0, 0};
  const std::size_t n = dp.n, m = dp.m;
  dp.tb.assign((n + 1) * (m + 1), 0);
  if (local) dp.start.assign((n + 1) * (m + 1), 0);
  const auto ca = matrix.encode(a);
  const auto cb = matrix.encode(b);

  // Rolling rows for the three states.
  std::vector<int> pm(m + 1), px(m + 1), py(m + 1), cm(m + 1), cx(m + 1), cy(m + 1);
  pm[0] = local ? kNeg : 0;
  px[0] = kNeg;
  py[0] = kNeg;
  for (std::size_t j = 1; j <= m; ++j) {
    pm[j] = kNeg;
    px[j] = kNeg;
    if (local) {
      py[j] = kNeg;
    } else {
      const auto [v, s] = best3(pm[j - 1] - g.open, px[j - 1] - g.open, py[j - 1] - g.extend);
      py[j] = v;
      dp.at(0, j) = pack(kM, kM, s);
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cm[0] = kNeg;
    cy[0] = kNeg;
    if (local) {
      cx[0] = kNeg;
    } else {
      const auto [v, s] = best3(pm[0] - g.open, px[0] - g.extend, py[0] - g.open);
      cx[0] = v;
      dp.at(i, 0) = pack(kM, s, kM);
    }
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = matrix.score_codes(ca[i - 1], cb[j - 1]);
      auto [dv, ds] = best3(pm[j - 1], px[j - 1], py[j - 1]);
      if (local && dv <= 0) {
        dv = 0;
        dp.start[i * (m + 1) + j] = 1;
      }
      cm[j] = dv + sub;
      const auto [xv, xs] = best3(pm[j] - g.open, px[j] - g.extend, py[j] - g.open);
      cx[j] = std::max(xv, kNeg);
      const auto [yv, ys] = best3(cm[j - 1] - g.open, cx[j - 1] - g.open, cy[j - 1] - g.extend);
      cy[j] = std::max(yv, kNeg);
      dp.at(i, j) = pack(ds, xs, ys);
      if (local && cm[j] > dp.best) {
        dp.best = cm[j];
        dp.best_i = i;
        dp.best_j = j;
      }
    }
    std::swap(pm, cm);
    std::swap(px, cx);
    std::swap(py, cy);
  }
  dp.final_m = pm[m];
  dp.final_x = px[m];
  dp.final_y = py[m];
  return dp;
}

}  // namespace

AlignmentResult nw_align(const core::ProteinSequence& a, const core::ProteinSequence& b,
                         const SubstitutionMatrix& matrix, GapPenalties gaps) {
  check_inputs(a, b, gaps);
  const auto ra = a.residues();
  const auto rb = b.residues();
  Dp dp = run_dp(ra, rb, matrix, gaps, /*local=*/false);

  AlignmentResult r;
  auto [score, state] = best3(dp.final_m, dp.final_x, dp.final_y);
  r.score = score;
  std::size_t i = dp.n, j = dp.m;
  while (i > 0 || j > 0) {
    const auto tb = dp.at(i, j);
    switch (state) {
      case kM:
        r.aligned_a.push_back(ra[i - 1]);
        r.aligned_b.push_back(rb[j - 1]);
        state = pred(tb, kM);
        --i;
        --j;
        break;
      case kX:
        r.aligned_a.push_back(ra[i - 1]);
        r.aligned_b.push_back('-');
        state = pred(tb, kX);
        --i;
        break;
      case kY:
        r.aligned_a.push_back('-');
        r.aligned_b.push_back(rb[j - 1]);
        state = pred(tb, kY);
        --j;
        break;
      case kStop:
        i = j = 0;
        break;
    }
  }
  r.a_begin = 0;
  r.a_end = ra.size();
  r.b_begin = 0;
  r.b_end = rb.size();
  finish(r);
  return r;
}

AlignmentResult sw_align(const core::ProteinSequence& a, const core::ProteinSequence& b,
                         const SubstitutionMatrix& matrix, GapPenalties gaps) {
  check_inputs(a, b, gaps);
  const auto ra = a.residues();
  const auto rb = b.residues();
  Dp dp = run_dp(ra, rb, matrix, gaps, /*local=*/true);

  AlignmentResult r;
  if (dp.best <= 0) return r;
  r.score = dp.best;
  std::size_t i = dp.best_i, j = dp.best_j;
  r.a_end = i;
  r.b_end = j;
  State state = kM;
  while (true) {
    const auto tb = dp.at(i, j);
    if (state == kM) {
      r.aligned_a.push_back(ra[i - 1]);
      r.aligned_b.push_back(rb[j - 1]);
      const bool fresh = dp.start[i * (dp.m + 1) + j] != 0;
      state = pred(tb, kM);
      --i;
      --j;
      if (fresh) break;
    } else if (state == kX) {
      r.aligned_a.push_back(ra[i - 1]);
      r.aligned_b.push_back('-');
      state = pred(tb, kX);
      --i;
    } else {
      r.aligned_a.push_back('-');
      r.aligned_b.push_back(rb[j - 1]);
      state = pred(tb, kY);
      --j;
    }
  }
  r.a_begin = i;
  r.b_begin = j;
  finish(r);
  return r;
}

double percent_identity(const core::ProteinSequence& a, const core::ProteinSequence& b,
                        const SubstitutionMatrix& matrix, GapPenalties gaps) {
  // Tied tracebacks can differ in identity when the inputs swap, so align in
  // a fixed order.
  if (b.str() < a.str()) return nw_align(b, a, matrix, gaps).identity_pct;
  return nw_align(a, b, matrix, gaps).identity_pct;
}

}  // namespace protvec::align
