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
#include <map>
#include <string>
#include <string_view>

#include "protvec/core/ec_number.hpp"

namespace protvec::core {

// accession -> non-empty EC set. Ordered so iteration is deterministic.
class LabelTable {
 public:
  // Throws ValidationError on duplicate accession or empty set.
  void add(std::string accession, ECSet ecs);

  // nullptr when the accession is unlabeled.
  const ECSet* find(std::string_view accession) const;
  bool contains(std::string_view accession) const { return find(accession) != nullptr; }
  std::size_t size() const noexcept { return labels_.size(); }

  const std::map<std::string, ECSet, std::less<>>& entries() const noexcept { return labels_; }

 private:
  std::map<std::string, ECSet, std::less<>> labels_;
};

// TSV "accession<TAB>ec1;ec2;...". Lines starting with '#' and blank lines
// are skipped. Errors carry the 1-based line number.
LabelTable parse_labels_tsv(std::string_view text);
LabelTable read_labels_file(const std::filesystem::path& path);
std::string write_labels_tsv(const LabelTable& labels);

}  // namespace protvec::core
