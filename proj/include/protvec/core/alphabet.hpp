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
#include <optional>
#include <string_view>

namespace protvec::core {

// The 20 canonical residues, one-letter codes.
inline constexpr std::string_view kCanonicalResidues = "ARNDCQEGHILKMFPSTWYV";

// Ambiguity codes, selenocysteine, pyrrolysine and the stop symbol. Accepted
// on input; they never count as canonical.
inline constexpr std::string_view kExtendedResidues = "BZXUO*";

struct AminoAcidInfo {
  char code;
  std::string_view three_letter;
  std::string_view name;
};

inline constexpr std::array<AminoAcidInfo, 20> kAminoAcids = {{
    {'A', "Ala", "Alanine"},       {'R', "Arg", "Arginine"},
    {'N', "Asn", "Asparagine"},    {'D', "Asp", "Aspartic acid"},
    {'C', "Cys", "Cysteine"},      {'Q', "Gln", "Glutamine"},
    {'E', "Glu", "Glutamic acid"}, {'G', "Gly", "Glycine"},
    {'H', "His", "Histidine"},     {'I', "Ile", "Isoleucine"},
    {'L', "Leu", "Leucine"},       {'K', "Lys", "Lysine"},
    {'M', "Met", "Methionine"},    {'F', "Phe", "Phenylalanine"},
    {'P', "Pro", "Proline"},       {'S', "Ser", "Serine"},
    {'T', "Thr", "Threonine"},     {'W', "Trp", "Tryptophan"},
    {'Y', "Tyr", "Tyrosine"},      {'V', "Val", "Valine"},
}};

constexpr char to_upper_ascii(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

constexpr bool is_canonical_residue(char c) {
  return kCanonicalResidues.find(c) != std::string_view::npos;
}

// Accepts either case.
constexpr bool is_accepted_residue(char c) {
  const char u = to_upper_ascii(c);
  return is_canonical_residue(u) ||
         kExtendedResidues.find(u) != std::string_view::npos;
}

// Upper-cased residue, or nullopt when the character is outside the alphabet.
constexpr std::optional<char> normalize_residue(char c) {
  if (!is_accepted_residue(c)) return std::nullopt;
  return to_upper_ascii(c);
}

// Index 0..19 into kCanonicalResidues, -1 otherwise.
constexpr int canonical_index(char c) {
  const auto pos = kCanonicalResidues.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

}  // namespace protvec::core
