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

#include <optional>
#include <string>
#include <vector>

#include "protvec/core/ec_number.hpp"
#include "protvec/core/fasta.hpp"
#include "protvec/core/labels.hpp"
#include "protvec/core/sequence.hpp"

namespace protvec::core {

// Labeled protein; the sequence is optional so label-only datasets work.
struct ProteinRecord {
  std::string accession;
  std::optional<ProteinSequence> sequence;
  ECSet ec_set;
  std::string description;
};

// One record per labeled accession, in accession order, with sequences
// attached where the FASTA has them. Throws ValidationError on duplicate
// FASTA accessions.
std::vector<ProteinRecord> join_records(const std::vector<FastaRecord>& fasta,
                                        const LabelTable& labels);

}  // namespace protvec::core
