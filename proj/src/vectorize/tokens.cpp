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

#include "protvec/vectorize/tokens.hpp"

#include <algorithm>
#include <string>

#include "protvec/error.hpp"

namespace protvec::vectorize {

TokenWindow pad_or_truncate(std::size_t seq_len, std::size_t cap) {
  if (cap < 3) throw ValidationError("token cap must be at least 3, got " + std::to_string(cap));
  return {0, std::min(seq_len, cap - 2)};
}

std::vector<TokenRole> frame_roles(std::size_t seq_len, std::size_t cap, std::size_t batch_len) {
  const auto window = pad_or_truncate(seq_len, cap);
  std::vector<TokenRole> roles;
  roles.reserve(std::max(batch_len, window.size() + 2));
  roles.push_back(TokenRole::kCls);
  roles.insert(roles.end(), window.size(), TokenRole::kResidue);
  roles.push_back(TokenRole::kSep);
  if (batch_len != 0) {
    if (batch_len < roles.size()) {
      throw ValidationError("batch length " + std::to_string(batch_len) +
                            " shorter than framed sequence " + std::to_string(roles.size()));
    }
    roles.resize(batch_len, TokenRole::kPad);
  }
  return roles;
}

void TokenEmbeddingMatrix::validate(std::size_t cap) const {
  if (rows.cols() < 1) throw ValidationError("token matrix has zero feature dimension");
  if (static_cast<std::size_t>(rows.rows()) != roles.size()) {
    throw ValidationError("token matrix has " + std::to_string(rows.rows()) + " rows but " +
                          std::to_string(roles.size()) + " roles");
  }
  if (roles.size() > cap) {
    throw ValidationError("token matrix length " + std::to_string(roles.size()) +
                          " exceeds cap " + std::to_string(cap));
  }
  bool seen_pad = false;
  bool seen_sep = false;
  std::size_t residues = 0;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    switch (roles[i]) {
      case TokenRole::kCls:
        if (i != 0) throw ValidationError("CLS token not at position 0");
        break;
      case TokenRole::kPad:
        seen_pad = true;
        break;
      case TokenRole::kSep:
        if (seen_pad || seen_sep) throw ValidationError("SEP token misplaced");
        seen_sep = true;
        break;
      case TokenRole::kResidue:
        if (seen_pad) throw ValidationError("PAD token before a residue token");
        if (seen_sep) throw ValidationError("residue token after SEP");
        ++residues;
        break;
      default:
        throw ValidationError("unknown token role");
    }
  }
  if (residues == 0) throw ValidationError("token matrix has no RESIDUE rows");
}

Vector<float> pool_tokens(const TokenEmbeddingMatrix& m) {
  if (m.rows.cols() < 1 || static_cast<std::size_t>(m.rows.rows()) != m.roles.size()) {
    throw ValidationError("malformed token matrix");
  }
  std::vector<Eigen::Index> residue_rows;
  for (std::size_t i = 0; i < m.roles.size(); ++i) {
    if (m.roles[i] == TokenRole::kResidue) residue_rows.push_back(static_cast<Eigen::Index>(i));
  }
  if (residue_rows.empty()) throw ValidationError("token matrix has no RESIDUE rows");

  const Eigen::Index d = m.rows.cols();
  Vector<float> out(d);
  std::vector<float> column(residue_rows.size());
  for (Eigen::Index c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < residue_rows.size(); ++r) column[r] = m.rows(residue_rows[r], c);
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (float v : column) sum += v;
    out[c] = static_cast<float>(sum / static_cast<double>(column.size()));
  }
  return out;
}

}  // namespace protvec::vectorize
