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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace protvec::align {

// Integer scores over the 24-letter NCBI alphabet "ARNDCQEGHILKMFPSTWYVBZX*".
// Residues without a row (U, O) score 0 against everything.
class SubstitutionMatrix {
 public:
  static constexpr std::string_view kAlphabet = "ARNDCQEGHILKMFPSTWYVBZX*";
  static constexpr int kSize = 24;
  static constexpr std::uint8_t kNoRow = kSize;

  static const SubstitutionMatrix& blosum62();

  // NCBI text layout: '#' comments, a header row of letters, then one row
  // per letter. Every letter of kAlphabet must be present. Throws
  // ValidationError.
  static SubstitutionMatrix parse(std::string_view text, std::string name);

  // match on the diagonal, mismatch elsewhere.
  static SubstitutionMatrix unit(int match, int mismatch);

  // Named matrix ("blosum62") or a path to an NCBI-format file.
  static SubstitutionMatrix load(std::string_view name_or_path);

  static constexpr std::uint8_t code(char residue) {
    const auto pos = kAlphabet.find(residue);
    return pos == std::string_view::npos ? kNoRow : static_cast<std::uint8_t>(pos);
  }

  int score_codes(std::uint8_t a, std::uint8_t b) const noexcept { return table_[a][b]; }
  int score(char a, char b) const noexcept { return table_[code(a)][code(b)]; }

  // Largest entry in row a.
  int row_max(std::uint8_t a) const noexcept { return row_max_[a]; }

  const std::string& name() const noexcept { return name_; }

  std::vector<std::uint8_t> encode(std::string_view residues) const;

 private:
  SubstitutionMatrix() = default;
  void finish();

  std::string name_;
  std::array<std::array<int, kSize + 1>, kSize + 1> table_{};
  std::array<int, kSize + 1> row_max_{};
};

}  // namespace protvec::align
