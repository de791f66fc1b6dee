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

#include "protvec/core/sequence.hpp"

#include "protvec/core/alphabet.hpp"
#include "protvec/error.hpp"

namespace protvec::core {

ProteinSequence::ProteinSequence(std::string_view residues) {
  if (residues.empty()) throw ValidationError("empty protein sequence");
  residues_.reserve(residues.size());
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const auto r = normalize_residue(residues[i]);
    if (!r) {
      throw ValidationError("illegal residue '" + std::string(1, residues[i]) +
                            "' at position " + std::to_string(i + 1));
    }
    residues_.push_back(*r);
  }
}

}  // namespace protvec::core
