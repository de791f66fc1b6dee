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

#include "protvec/align/substitution_matrix.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::align {
namespace {

constexpr std::string_view kBlosum62 = R"(# BLOSUM62, NCBI layout
   A  R  N  D  C  Q  E  G  H  I  L  K  M  F  P  S  T  W  Y  V  B  Z  X  *
A  4 -1 -2 -2  0 -1 -1  0 -2 -1 -1 -1 -1 -2 -1  1  0 -3 -2  0 -2 -1  0 -4
R -1  5  0 -2 -3  1  0 -2  0 -3 -2  2 -1 -3 -2 -1 -1 -3 -2 -3 -1  0 -1 -4
N -2  0  6  1 -3  0  0  0  1 -3 -3  0 -2 -3 -2  1  0 -4 -2 -3  3  0 -1 -4
D -2 -2  1  6 -3  0  2 -1 -1 -3 -4 -1 -3 -3 -1  0 -1 -4 -3 -3  4  1 -1 -4
C  0 -3 -3 -3  9 -3 -4 -3 -3 -1 -1 -3 -1 -2 -3 -1 -1 -2 -2 -1 -3 -3 -2 -4
Q -1  1  0  0 -3  5  2 -2  0 -3 -2  1  0 -3 -1  0 -1 -2 -1 -2  0  3 -1 -4
E -1  0  0  2 -4  2  5 -2  0 -3 -3  1 -2 -3 -1  0 -1 -3 -2 -2  1  4 -1 -4
G  0 -2  0 -1 -3 -2 -2  6 -2 -4 -4 -2 -3 -3 -2  0 -2 -2 -3 -3 -1 -2 -1 -4
H -2  0  1 -1 -3  0  0 -2  8 -3 -3 -1 -2 -1 -2 -1 -2 -2  2 -3  0  0 -1 -4
I -1 -3 -3 -3 -1 -3 -3 -4 -3  4  2 -3  1  0 -3 -2 -1 -3 -1  3 -3 -3 -1 -4
L -1 -2 -3 -4 -1 -2 -3 -4 -3  2  4 -2  2  0 -3 -2 -1 -2 -1  1 -4 -3 -1 -4
K -1  2  0 -1 -3  1  1 -2 -1 -3 -2  5 -1 -3 -1  0 -1 -3 -2 -2  0  1 -1 -4
M -1 -1 -2 -3 -1  0 -2 -3 -2  1  2 -1  5  0 -2 -1 -1 -1 -1  1 -3 -1 -1 -4
F -2 -3 -3 -3 -2 -3 -3 -3 -1  0  0 -3  0  6 -4 -2 -2  1  3 -1 -3 -3 -1 -4
P -1 -2 -2 -1 -3 -1 -1 -2 -2 -3 -3 -1 -2 -4  7 -1 -1 -4 -3 -2 -2 -1 -2 -4
S  1 -1  1  0 -1  0  0  0 -1 -2 -2  0 -1 -2 -1  4  1 -3 -2 -2  0  0  0 -4
T  0 -1  0 -1 -1 -1 -1 -2 -2 -1 -1 -1 -1 -2 -1  1  5 -2 -2  0 -1 -1  0 -4
W -3 -3 -4 -4 -2 -2 -3 -2 -2 -3 -2 -3 -1  1 -4 -3 -2 11  2 -3 -4 -3 -2 -4
Y -2 -2 -2 -3 -2 -1 -2 -3  2 -1 -1 -2 -1  3 -3 -2 -2  2  7 -1 -3 -2 -1 -4
V  0 -3 -3 -3 -1 -2 -2 -3 -3  3  1 -2  1 -1 -2 -2  0 -3 -1  4 -3 -2 -1 -4
B -2 -1  3  4 -3  0  1 -1  0 -3 -4  0 -3 -3 -2  0 -1 -4 -3 -3  4  1 -1 -4
Z -1  0  0  1 -3  3  4 -2  0 -3 -3  1 -1 -3 -1  0 -1 -3 -2 -2  1  4 -1 -4
X  0 -1 -1 -1 -2 -1 -1 -1 -1 -1 -1 -1 -1 -1 -2  0  0 -2 -1 -1 -1 -1 -1 -4
* -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4  1
)";

}  // namespace

void SubstitutionMatrix::finish() {
  for (int a = 0; a <= kSize; ++a) {
    row_max_[a] = *std::max_element(table_[a].begin(), table_[a].end());
  }
}

const SubstitutionMatrix& SubstitutionMatrix::blosum62() {
  static const SubstitutionMatrix m = parse(kBlosum62, "blosum62");
  return m;
}

SubstitutionMatrix SubstitutionMatrix::parse(std::string_view text, std::string name) {
  SubstitutionMatrix m;
  m.name_ = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<char> header;
  std::array<bool, kSize> seen{};
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (header.empty()) {
      std::string tok;
      while (ls >> tok) {
        if (tok.size() != 1) throw ValidationError("matrix header token '" + tok + "'");
        header.push_back(tok[0]);
      }
      continue;
    }
    std::string row_letter;
    ls >> row_letter;
    if (row_letter.size() != 1) throw ValidationError("matrix row label '" + row_letter + "'");
    const auto ra = code(row_letter[0]);
    for (char col : header) {
      int v;
      if (!(ls >> v)) throw ValidationError("matrix row " + row_letter + " is short");
      const auto cb = code(col);
      if (ra != kNoRow && cb != kNoRow) m.table_[ra][cb] = v;
    }
    if (ra != kNoRow) seen[ra] = true;
  }
  for (int i = 0; i < kSize; ++i) {
    if (!seen[i]) throw ValidationError(std::string("matrix lacks row ") + kAlphabet[i]);
    if (std::find(header.begin(), header.end(), kAlphabet[i]) == header.end()) {
      throw ValidationError(std::string("matrix lacks column ") + kAlphabet[i]);
    }
  }
  for (int a = 0; a < kSize; ++a) {
    for (int b = 0; b < kSize; ++b) {
      if (m.table_[a][b] != m.table_[b][a]) throw ValidationError("matrix is not symmetric");
    }
  }
  m.finish();
  return m;
}

SubstitutionMatrix SubstitutionMatrix::unit(int match, int mismatch) {
  SubstitutionMatrix m;
  m.name_ = "unit";
  for (int a = 0; a < kSize; ++a) {
    for (int b = 0; b < kSize; ++b) m.table_[a][b] = a == b ? match : mismatch;
  }
  m.finish();
  return m;
}

SubstitutionMatrix SubstitutionMatrix::load(std::string_view name_or_path) {
  std::string lower(name_or_path);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "blosum62") return blosum62();
  const std::filesystem::path p(name_or_path);
  if (!std::filesystem::exists(p)) {
    throw ValidationError("unknown substitution matrix '" + std::string(name_or_path) + "'");
  }
  return parse(util::read_file(p), p.filename().string());
}

std::vector<std::uint8_t> SubstitutionMatrix::encode(std::string_view residues) const {
  std::vector<std::uint8_t> out(residues.size());
  for (std::size_t i = 0; i < residues.size(); ++i) out[i] = code(residues[i]);
  return out;
}

}  // namespace protvec::align
