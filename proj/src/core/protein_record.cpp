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

#include "protvec/core/protein_record.hpp"

#include <map>

#include "protvec/error.hpp"

namespace protvec::core {

std::vector<ProteinRecord> join_records(const std::vector<FastaRecord>& fasta,
                                        const LabelTable& labels) {
  std::map<std::string_view, const FastaRecord*> by_acc;
  for (const auto& r : fasta) {
    if (!by_acc.emplace(r.accession, &r).second) {
      throw ValidationError("duplicate FASTA accession '" + r.accession + "'");
    }
  }
  std::vector<ProteinRecord> out;
  out.reserve(labels.size());
  for (const auto& [acc, ecs] : labels.entries()) {
    ProteinRecord rec;
    rec.accession = acc;
    rec.ec_set = ecs;
    if (auto it = by_acc.find(acc); it != by_acc.end()) {
      rec.sequence = it->second->sequence;
      rec.description = it->second->description;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace protvec::core
