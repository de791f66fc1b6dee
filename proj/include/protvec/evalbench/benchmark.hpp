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
#include <iterator>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "protvec/core/labels.hpp"
#include "protvec/index/layered_index.hpp"
#include "protvec/simscore/simscore.hpp"
#include "protvec/vectorize/store.hpp"

namespace protvec::evalbench {

struct BenchConfig {
  std::vector<std::size_t> k_list{30, 50, 100, 150, 200, 250};
  std::vector<simscore::Metric> metrics{std::begin(simscore::kAllMetrics), std::end(simscore::kAllMetrics)};
  int level = 4;
  bool include_self = true;
  std::uint64_t seed = 7;
  index::IndexMode mode = index::IndexMode::kVpTree;
  index::IndexParams params;

  // Throws ValidationError on an empty or non-increasing k list, k < 1,
  // duplicate metrics or a level outside 1..4.
  void validate() const;
  std::size_t max_k() const { return k_list.empty() ? 0 : k_list.back(); }
  friend bool operator==(const BenchConfig&, const BenchConfig&) = default;
};

struct QueryResult {
  std::string query;
  std::vector<double> hit_rates;  // aligned with BenchConfig::k_list
  std::size_t tp_first_fp = 0;
  bool shortfall = false;
  std::vector<index::Hit> hits;
  std::vector<int> levels;
  std::vector<std::string> unlabeled;
  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

struct MetricReport {
  simscore::Metric metric = simscore::Metric::kCosine;
  std::vector<double> mean_hit_rate;  // aligned with BenchConfig::k_list
  double mean_tp_first_fp = 0.0;
  std::array<std::uint64_t, 5> level_histogram{};  // hits at match level 0..4
  std::size_t shortfall_queries = 0;
  std::size_t unlabeled_hits = 0;
  std::vector<QueryResult> queries;  // sorted by query accession
  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct BenchReport {
  BenchConfig config;
  std::vector<MetricReport> results;  // in config.metrics order
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// Ranks `database` for every query and scores the rankings against the EC
// labels. Queries are looked up in `query_store` (the database when null).
// Query order does not affect the report. Throws ValidationError on an
// empty or duplicated query list, a missing or unlabeled query, or a
// dimension mismatch between the stores.
BenchReport run_benchmark(const vectorize::EmbeddingStore& database,
                          const core::LabelTable& labels, std::span<const std::string> queries,
                          const BenchConfig& config,
                          const vectorize::EmbeddingStore* query_store = nullptr);

// Order-independent sum: sorts a copy before adding.
double stable_sum(std::vector<double> values);

}  // namespace protvec::evalbench
