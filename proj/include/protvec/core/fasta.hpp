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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "protvec/core/sequence.hpp"

namespace protvec::core {

struct FastaRecord {
  std::string accession;
  ProteinSequence sequence;
  std::string description;

  friend bool operator==(const FastaRecord&, const FastaRecord&) = default;
};

// Header handling: the accession is the first whitespace-delimited token
// after '>', except for UniProt style "db|ACC|NAME" tokens where it is the
// middle field. The description is whatever follows the accession field and
// its delimiter, so ">sp|P1|NAME_HUMAN Foo" has description "NAME_HUMAN Foo".
//
// Throws ValidationError with a 1-based line number on: empty input, text
// before the first header, an empty accession, a record without residues,
// or an illegal residue character.
std::vector<FastaRecord> parse_fasta(std::string_view text);

std::vector<FastaRecord> read_fasta_file(const std::filesystem::path& path);

// Writes ">accession description" headers and wraps residues at line_width.
std::string write_fasta(const std::vector<FastaRecord>& records,
                        std::size_t line_width = 60);

}  // namespace protvec::core
