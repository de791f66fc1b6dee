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

#include <string>
#include <string_view>
#include <vector>

#include "protvec/index/hits.hpp"

namespace protvec::cli {

// "query<TAB>rank<TAB>accession<TAB>score", no header. Scores are written
// in shortest round-trip form.
std::string write_hits_tsv(const std::vector<index::RankedHits>& results);

// Groups rows by query in first-appearance order. Throws ValidationError
// with the line number on malformed rows or non-consecutive ranks.
std::vector<index::RankedHits> parse_hits_tsv(std::string_view text);

std::string format_double(double v);

}  // namespace protvec::cli
