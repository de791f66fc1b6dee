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
#include <string>
#include <string_view>

namespace protvec::core {

// Non-empty, upper-cased residue string over the accepted alphabet.
class ProteinSequence {
 public:
  ProteinSequence() = default;

  // Normalizes case; throws ValidationError on an empty input or a character
  // outside the accepted alphabet.
  explicit ProteinSequence(std::string_view residues);

  std::string_view residues() const noexcept { return residues_; }
  const std::string& str() const noexcept { return residues_; }
  std::size_t size() const noexcept { return residues_.size(); }
  bool empty() const noexcept { return residues_.empty(); }
  char operator[](std::size_t i) const noexcept { return residues_[i]; }

  friend bool operator==(const ProteinSequence&, const ProteinSequence&) = default;

 private:
  std::string residues_;
};

}  // namespace protvec::core
