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

#include <json.hpp>

#include "protvec/evalbench/benchmark.hpp"

namespace protvec::evalbench {

inline constexpr std::string_view kReportSchema = "protvec.bench.v1";

// Doubles are written at full round-trip precision.
nlohmann::ordered_json report_to_json(const BenchReport& report);
std::string report_emit_json(const BenchReport& report);

// Inverse of report_to_json. Throws IoError on malformed input.
BenchReport report_from_json(const nlohmann::ordered_json& doc);
BenchReport report_parse_json(std::string_view text);

// CSV tables with a header row; rates and scores use 6 decimals.
struct CsvTables {
  std::string hit_rates;    // metric x k matrix
  std::string tp_first_fp;  // metric,mean_tp_first_fp,cap
  std::string per_query;    // metric,query,k,hit_rate,tp_first_fp,shortfall
};

CsvTables report_emit_csv(const BenchReport& report);

// Writes report.json plus hit_rates.csv, tp_first_fp.csv and per_query.csv.
void report_write_dir(const BenchReport& report, const std::filesystem::path& dir);

}  // namespace protvec::evalbench
