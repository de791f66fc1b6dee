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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace protvec::cli {

inline constexpr std::string_view kDefaultFetchUrl = "https://rest.uniprot.org/uniprotkb/{acc}.fasta";

struct FetchOptions {
  // "{acc}" is replaced by the accession.
  std::string url_template{kDefaultFetchUrl};
  std::filesystem::path cache_dir;
  bool offline = false;
  std::size_t workers = 4;  // clamped to 1..4
  int timeout_seconds = 30;
};

struct FetchFailure {
  std::string accession;
  std::string reason;
};

struct FetchResult {
  std::string fasta;  // successful bodies concatenated in input order
  std::vector<FetchFailure> failures;
  std::size_t network_requests = 0;
  std::size_t cache_hits = 0;
};

// Letters, digits, '_', '.', '-'; at most 64 characters. Keeps accessions
// usable as cache file names.
bool valid_accession(std::string_view accession);

// Downloads each accession once, serving and filling the on-disk cache
// ({cache_dir}/{acc}.fasta, body stored verbatim). Per-accession problems
// (bad accession, HTTP error, offline cache miss, body that is not FASTA)
// are collected in `failures`; the remaining accessions are still fetched.
// Repeated accessions are fetched and emitted once. Throws ValidationError
// on an empty list or a malformed URL template.
FetchResult fetch_sequences(std::span<const std::string> accessions, const FetchOptions& options);

}  // namespace protvec::cli
