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

#include "protvec/evalbench/report.hpp"

#include <cstdio>

#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::evalbench {
namespace {

using ojson = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

ojson config_json(const BenchConfig& c) {
  ojson metrics = ojson::array();
  for (auto m : c.metrics) metrics.push_back(std::string(simscore::metric_name(m)));
  return {{"k_list", c.k_list},
          {"metrics", std::move(metrics)},
          {"level", c.level},
          {"include_self", c.include_self},
          {"seed", c.seed},
          {"mode", std::string(index::mode_name(c.mode))},
          {"params",
           {{"leaf_size", c.params.leaf_size},
            {"tables", c.params.tables},
            {"bits", c.params.bits},
            {"nlist", c.params.nlist},
            {"nprobe", c.params.nprobe},
            {"multiprobe", c.params.multiprobe}}}};
}

simscore::Metric metric_from(const ojson& j) {
  auto m = simscore::parse_metric(j.get<std::string>());
  if (!m) throw IoError("report: unknown metric '" + j.get<std::string>() + "'");
  return *m;
}

BenchConfig config_from(const ojson& j) {
  BenchConfig c;
  c.k_list = j.at("k_list").get<std::vector<std::size_t>>();
  c.metrics.clear();
  for (const auto& m : j.at("metrics")) c.metrics.push_back(metric_from(m));
  c.level = j.at("level").get<int>();
  c.include_self = j.at("include_self").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  auto mode = index::parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw IoError("report: unknown index mode");
  c.mode = *mode;
  const auto& p = j.at("params");
  c.params.leaf_size = p.at("leaf_size").get<std::size_t>();
  c.params.tables = p.at("tables").get<std::size_t>();
  c.params.bits = p.at("bits").get<std::size_t>();
  c.params.nlist = p.at("nlist").get<std::size_t>();
  c.params.nprobe = p.at("nprobe").get<std::size_t>();
  c.params.multiprobe = p.at("multiprobe").get<bool>();
  return c;
}

}  // namespace

ojson report_to_json(const BenchReport& report) {
  ojson results = ojson::array();
  for (const auto& mr : report.results) {
    ojson queries = ojson::array();
    for (const auto& qr : mr.queries) {
      ojson hits = ojson::array();
      for (std::size_t i = 0; i < qr.hits.size(); ++i) {
        const auto& h = qr.hits[i];
        hits.push_back({{"rank", h.rank},
                        {"accession", h.accession},
                        {"score", h.score},
                        {"level", qr.levels[i]}});
      }
      queries.push_back({{"query", qr.query},
                         {"hit_rate", qr.hit_rates},
                         {"tp_first_fp", qr.tp_first_fp},
                         {"shortfall", qr.shortfall},
                         {"unlabeled", qr.unlabeled},
                         {"hits", std::move(hits)}});
    }
    results.push_back({{"metric", std::string(simscore::metric_name(mr.metric))},
                       {"mean_hit_rate", mr.mean_hit_rate},
                       {"mean_tp_first_fp", mr.mean_tp_first_fp},
                       {"level_histogram", mr.level_histogram},
                       {"shortfall_queries", mr.shortfall_queries},
                       {"unlabeled_hits", mr.unlabeled_hits},
                       {"queries", std::move(queries)}});
  }
  return {{"schema", std::string(kReportSchema)},
          {"config", config_json(report.config)},
          {"provenance", report.provenance},
          {"results", std::move(results)}};
}

std::string report_emit_json(const BenchReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

BenchReport report_from_json(const ojson& doc) {
  try {
    if (doc.at("schema").get<std::string>() != kReportSchema) {
      throw IoError("report: unsupported schema");
    }
    BenchReport r;
    r.config = config_from(doc.at("config"));
    r.provenance = doc.at("provenance");
    for (const auto& jm : doc.at("results")) {
      MetricReport mr;
      mr.metric = metric_from(jm.at("metric"));
      mr.mean_hit_rate = jm.at("mean_hit_rate").get<std::vector<double>>();
      mr.mean_tp_first_fp = jm.at("mean_tp_first_fp").get<double>();
      mr.level_histogram = jm.at("level_histogram").get<std::array<std::uint64_t, 5>>();
      mr.shortfall_queries = jm.at("shortfall_queries").get<std::size_t>();
      mr.unlabeled_hits = jm.at("unlabeled_hits").get<std::size_t>();
      for (const auto& jq : jm.at("queries")) {
        QueryResult qr;
        qr.query = jq.at("query").get<std::string>();
        qr.hit_rates = jq.at("hit_rate").get<std::vector<double>>();
        qr.tp_first_fp = jq.at("tp_first_fp").get<std::size_t>();
        qr.shortfall = jq.at("shortfall").get<bool>();
        qr.unlabeled = jq.at("unlabeled").get<std::vector<std::string>>();
        for (const auto& jh : jq.at("hits")) {
          qr.hits.push_back({jh.at("accession").get<std::string>(), jh.at("score").get<double>(),
                             jh.at("rank").get<std::size_t>()});
          qr.levels.push_back(jh.at("level").get<int>());
        }
        mr.queries.push_back(std::move(qr));
      }
      r.results.push_back(std::move(mr));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report: malformed JSON: ") + e.what());
  }
}

BenchReport report_parse_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report: invalid JSON: ") + e.what());
  }
  return report_from_json(doc);
}

CsvTables report_emit_csv(const BenchReport& report) {
  CsvTables t;
  t.hit_rates = "metric";
  for (std::size_t k : report.config.k_list) t.hit_rates += "," + std::to_string(k);
  t.hit_rates += "\n";
  t.tp_first_fp = "metric,mean_tp_first_fp,cap\n";
  t.per_query = "metric,query,k,hit_rate,tp_first_fp,shortfall\n";
  const auto& ks = report.config.k_list;
  for (const auto& mr : report.results) {
    const std::string m(simscore::metric_name(mr.metric));
    t.hit_rates += m;
    for (double v : mr.mean_hit_rate) t.hit_rates += "," + fixed6(v);
    t.hit_rates += "\n";
    t.tp_first_fp += m + "," + fixed6(mr.mean_tp_first_fp) + "," +
                     std::to_string(report.config.max_k()) + "\n";
    for (const auto& qr : mr.queries) {
      for (std::size_t i = 0; i < ks.size(); ++i) {
        t.per_query += m + "," + qr.query + "," + std::to_string(ks[i]) + "," +
                       fixed6(qr.hit_rates[i]) + "," + std::to_string(qr.tp_first_fp) + "," +
                       (qr.shortfall ? "1" : "0") + "\n";
      }
    }
  }
  return t;
}

void report_write_dir(const BenchReport& report, const std::filesystem::path& dir) {
  const auto csv = report_emit_csv(report);
  util::write_file(dir / "report.json", report_emit_json(report));
  util::write_file(dir / "hit_rates.csv", csv.hit_rates);
  util::write_file(dir / "tp_first_fp.csv", csv.tp_first_fp);
  util::write_file(dir / "per_query.csv", csv.per_query);
}

}  // namespace protvec::evalbench
