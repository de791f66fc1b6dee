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
#include <vector>

#include "protvec/types.hpp"

namespace protvec::vectorize {

// Byte values are the PVEM on-disk role codes.
enum class TokenRole : std::uint8_t { kCls = 0, kResidue = 1, kSep = 2, kPad = 3 };

enum class PositionEncoding { kAbsolute, kRotary };

// Maximum encoder input length, special tokens included.
constexpr std::size_t default_token_cap(PositionEncoding enc) {
  return enc == PositionEncoding::kAbsolute ? 1024 : 7002;
}

// Residue index range [start, end) kept for the encoder.
struct TokenWindow {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const TokenWindow&, const TokenWindow&) = default;
};

// Identity when seq_len + 2 <= cap, otherwise the first cap - 2 residues.
// Throws ValidationError when cap < 3.
TokenWindow pad_or_truncate(std::size_t seq_len, std::size_t cap);

// Role layout [CLS, RESIDUE x window, SEP, PAD...] padded to batch_len.
// batch_len == 0 means no padding. Throws ValidationError when batch_len is
// non-zero and shorter than the framed window.
std::vector<TokenRole> frame_roles(std::size_t seq_len, std::size_t cap,
                                   std::size_t batch_len = 0);

// Per-token encoder output: one row per token, one column per feature.
struct TokenEmbeddingMatrix {
  RowMatrixXf rows;
  std::vector<TokenRole> roles;

  std::size_t tokens() const noexcept { return roles.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rows.cols()); }

  // Checks shape, role ordering (CLS first, SEP last before PAD, PAD only as
  // suffix), at least one RESIDUE row and tokens() <= cap. Throws
  // ValidationError.
  void validate(std::size_t cap = default_token_cap(PositionEncoding::kRotary)) const;
};

// Mean over RESIDUE rows. Each column is summed in double over its values
// sorted ascending, so the result does not depend on residue row order.
Vector<float> pool_tokens(const TokenEmbeddingMatrix& m);

}  // namespace protvec::vectorize
