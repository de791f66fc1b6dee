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

#include "protvec/evalbench/benchmark.hpp"

#include <algorithm>
#include <set>

#include "protvec/core/ec_number.hpp"
#include "protvec/error.hpp"
#include "protvec/evalbench/metrics.hpp"
#include "protvec/util/file_io.hpp"
#include "protvec/util/random.hpp"

namespace protvec::evalbench {
namespace {

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return s;
}

nlohmann::ordered_json params_json(const index::IndexParams& p) {
  return {{"leaf_size", p.leaf_size}, {"tables", p.tables}, {"bits", p.bits},
          {"nlist", p.nlist},         {"nprobe", p.nprobe}, {"multiprobe", p.multiprobe}};
}

QueryResult score_query(const index::LayeredIndex& idx, const vectorize::EmbeddingStore& qstore,
                        const core::LabelTable& labels, const std::string& acc,
                        const BenchConfig& cfg) {
  const auto qi = qstore.find(acc);
  const std::size_t kmax = cfg.max_k();
  const std::size_t fetch = cfg.include_self ? kmax : kmax + 1;
  auto ranked = idx.search(qstore.row(*qi), fetch, {}, acc);
  if (!cfg.include_self) {
    std::erase_if(ranked.hits, [&](const index::Hit& h) { return h.accession == acc; });
    if (ranked.hits.size() > kmax) ranked.hits.resize(kmax);
    for (std::size_t r = 0; r < ranked.hits.size(); ++r) ranked.hits[r].rank = r + 1;
  }
  ranked.requested = kmax;
  ranked.shortfall = ranked.hits.size() < kmax;

  QueryResult out;
  out.query = acc;
  auto ann = annotate(ranked, labels);
  for (std::size_t k : cfg.k_list) out.hit_rates.push_back(hit_rate_at_k(ann.levels, k, cfg.level));
  out.tp_first_fp = tp_until_first_fp(ann.levels, cfg.level);
  out.shortfall = ranked.shortfall;
  out.hits = std::move(ranked.hits);
  out.levels = std::move(ann.levels);
  out.unlabeled = std::move(ann.unlabeled);
  return out;
}

}  // namespace

void BenchConfig::validate() const {
  if (k_list.empty()) throw ValidationError("k list must not be empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1) throw ValidationError("k must be >= 1");
    if (i > 0 && k_list[i] <= k_list[i - 1]) {
      throw ValidationError("k list must be strictly increasing");
    }
  }
  if (metrics.empty()) throw ValidationError("at least one metric is required");
  std::set<simscore::Metric> seen(metrics.begin(), metrics.end());
  if (seen.size() != metrics.size()) throw ValidationError("duplicate metric in bench config");
  if (level < 1 || level > core::ECNumber::kLevels) {
    throw ValidationError("match level must be in 1..4, got " + std::to_string(level));
  }
}

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

BenchReport run_benchmark(const vectorize::EmbeddingStore& database,
                          const core::LabelTable& labels, std::span<const std::string> queries,
                          const BenchConfig& config, const vectorize::EmbeddingStore* query_store) {
  config.validate();
  if (database.empty()) throw ValidationError("database store is empty");
  if (queries.empty()) throw ValidationError("query set is empty");
  const auto& qstore = query_store ? *query_store : database;
  if (qstore.dim() != database.dim()) {
    throw ValidationError("query dimension " + std::to_string(qstore.dim()) +
                          " does not match database dimension " + std::to_string(database.dim()));
  }

  std::vector<std::string> sorted(queries.begin(), queries.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate accession in query list");
  }
  for (const auto& q : sorted) {
    if (!qstore.find(q)) throw ValidationError("no embedding for query '" + q + "'");
    if (!labels.contains(q)) throw ValidationError("query '" + q + "' has no EC labels");
  }

  BenchReport report;
  report.config = config;
  for (simscore::Metric metric : config.metrics) {
    const auto idx = index::LayeredIndex::build(database, config.mode, metric, config.params,
                                                config.seed);
    MetricReport mr;
    mr.metric = metric;
    for (const auto& q : sorted) {
      auto qr = score_query(idx, qstore, labels, q, config);
      for (int l : qr.levels) ++mr.level_histogram[static_cast<std::size_t>(l)];
      mr.shortfall_queries += qr.shortfall ? 1 : 0;
      mr.unlabeled_hits += qr.unlabeled.size();
      mr.queries.push_back(std::move(qr));
    }
    const double n = static_cast<double>(mr.queries.size());
    for (std::size_t ki = 0; ki < config.k_list.size(); ++ki) {
      std::vector<double> vals;
      for (const auto& qr : mr.queries) vals.push_back(qr.hit_rates[ki]);
      mr.mean_hit_rate.push_back(stable_sum(std::move(vals)) / n);
    }
    std::vector<double> tps;
    for (const auto& qr : mr.queries) tps.push_back(static_cast<double>(qr.tp_first_fp));
    mr.mean_tp_first_fp = stable_sum(std::move(tps)) / n;
    report.results.push_back(std::move(mr));
  }

  std::string qlist;
  for (const auto& q : sorted) qlist += q + '\n';
  auto& p = report.provenance;
  p["seed"] = config.seed;
  p["seeds"] = {{"vptree", util::derive_seed(config.seed, 1)},
                {"lsh", util::derive_seed(config.seed, 2)},
                {"ivf", util::derive_seed(config.seed, 3)}};
  p["index_mode"] = std::string(index::mode_name(config.mode));
  p["index_params"] = params_json(config.params);
  p["tp_first_fp_cap"] = config.max_k();
  p["database"] = {{"count", database.size()},
                   {"dim", database.dim()},
                   {"fnv1a64", hex64(util::fnv1a64(vectorize::store_serialize(database)))}};
  if (query_store) {
    p["query_store"] = {{"count", qstore.size()},
                        {"fnv1a64", hex64(util::fnv1a64(vectorize::store_serialize(qstore)))}};
  }
  p["labels"] = {{"count", labels.size()},
                 {"fnv1a64", hex64(util::fnv1a64(core::write_labels_tsv(labels)))}};
  p["queries"] = {{"count", sorted.size()}, {"fnv1a64", hex64(util::fnv1a64(qlist))}};
  return report;
}

}  // namespace protvec::evalbench
