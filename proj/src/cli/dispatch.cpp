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

#include "protvec/cli/dispatch.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>

#include "protvec/align/blast.hpp"
#include "protvec/align/pairwise.hpp"
#include "protvec/cli/fetch.hpp"
#include "protvec/cli/hits_tsv.hpp"
#include "protvec/core/fasta.hpp"
#include "protvec/core/labels.hpp"
#include "protvec/error.hpp"
#include "protvec/evalbench/benchmark.hpp"
#include "protvec/evalbench/metrics.hpp"
#include "protvec/evalbench/report.hpp"
#include "protvec/index/layered_index.hpp"
#include "protvec/util/file_io.hpp"
#include "protvec/vectorize/embedder.hpp"
#include "protvec/vectorize/store.hpp"

namespace protvec::cli {
namespace {

using ojson = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text, const char* what) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    auto item = trim(std::string_view(text).substr(pos, comma == std::string::npos ? comma : comma - pos));
    if (item.empty()) throw ValidationError(std::string("empty entry in ") + what + " list");
    out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(std::string("bad ") + what + " value '" + s + "'");
  }
  return v;
}

// One accession per line; blank and '#' lines skipped.
std::vector<std::string> read_accession_list(const std::string& path) {
  const auto text = util::read_file(path);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    auto line = trim(std::string_view(text).substr(pos, nl - pos));
    pos = nl + 1;
    if (!line.empty() && line.front() != '#') out.push_back(std::move(line));
  }
  return out;
}

simscore::Metric metric_arg(const std::string& name) {
  auto m = simscore::parse_metric(name);
  if (!m) throw ValidationError("unknown metric '" + name + "' (expected ip, l2, cosine, norm_l2)");
  return *m;
}

index::IndexMode mode_arg(const std::string& name) {
  auto m = index::parse_mode(name);
  if (!m) {
    throw ValidationError("unknown index mode '" + name +
                          "' (expected exact, vptree, lsh, ivf, layered)");
  }
  return *m;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    util::write_file(path, text);
  }
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// 1-based inclusive span, "-" when empty.
std::string span_text(std::size_t begin, std::size_t end) {
  if (end <= begin) return "-";
  return std::to_string(begin + 1) + "-" + std::to_string(end);
}

struct IndexOpts {
  std::string mode = "vptree";
  index::IndexParams params;

  void attach(CLI::App* sub) {
    sub->add_option("--mode", mode, "exact, vptree, lsh, ivf or layered");
    sub->add_option("--leaf-size", params.leaf_size, "VP-tree leaf size");
    sub->add_option("--tables", params.tables, "LSH tables");
    sub->add_option("--bits", params.bits, "LSH bits per table (<= 63)");
    sub->add_option("--nlist", params.nlist, "IVF lists (0 = round(sqrt N))");
    sub->add_option("--nprobe", params.nprobe, "IVF lists probed per query");
    sub->add_flag("--multiprobe", params.multiprobe, "also probe Hamming-1 LSH buckets");
  }
};

struct GapOpts {
  std::string matrix = "blosum62";
  int gap_open = 11;
  int gap_extend = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--matrix", matrix, "substitution matrix name or NCBI-format file");
    sub->add_option("--gap-open", gap_open, "gap open penalty (magnitude)");
    sub->add_option("--gap-extend", gap_extend, "gap extend penalty (magnitude)");
  }
  align::GapPenalties gaps() const { return {gap_open, gap_extend}; }
};

struct Options {
  std::string config, cache_dir;
  bool offline = false;
  std::uint64_t seed = 7;

  struct {
    std::string input, import_tsv, out;
    std::size_t dim = 256, k = 3;
  } embed;
  struct {
    std::string input, out;
    std::size_t cap = 0;
  } pool;
  struct {
    std::string action, db, metric = "cosine", out;
    IndexOpts idx;
  } index;
  struct {
    std::string index, metric, queries, query_db, out;
    std::vector<std::string> query_acc;
    std::size_t topk = 10;
    std::size_t nprobe = 0;
    bool multiprobe = false;
  } query;
  struct {
    std::string db, labels, queries, query_db, metrics = "cosine,l2,ip,norm_l2",
                                                topk = "30,50,100,150,200,250", report, csv;
    int level = 4;
    bool exclude_self = false;
    IndexOpts idx;
  } bench;
  struct {
    std::string query, target, out;
    GapOpts g;
  } nw, sw;
  struct {
    std::string query, db, out, matrix = "blosum62";
    align::BlastParams p;
  } blast;
  struct {
    std::string hits, fasta, labels, query_acc, sort = "rank", out;
    GapOpts g;
  } pim;
  struct {
    std::string a, b, labels, query_acc, out;
    int level = 4;
    std::size_t topk = 30;
  } venn;
  struct {
    std::vector<std::string> accessions;
    std::string accessions_file, url{kDefaultFetchUrl}, out;
    std::size_t workers = 4;
  } fetch;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) { build(); }

  int run(std::span<const std::string> args);

 private:
  void build();
  CLI::App* add_command(CLI::App* parent, const std::string& name, const std::string& help,
                        std::function<void()> action);
  void need(const char* flag) const;
  bool given(const char* flag) const;
  void merge_config();
  void resolve();

  void cmd_embed();
  void cmd_pool();
  void cmd_index();
  void cmd_query();
  void cmd_bench();
  void cmd_pair(bool global_mode);
  void cmd_blast();
  void cmd_pim();
  void cmd_venn();
  void cmd_fetch();

  core::ProteinSequence single_query(const std::string& path) const;
  index::RankedHits pick_query(const std::vector<index::RankedHits>& all, const std::string& acc,
                               const std::string& file) const;

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Protein embedding retrieval, alignment and EC benchmark toolkit", "protvec"};
  Options o_;
  std::map<const CLI::App*, std::function<void()>> actions_;
  CLI::App* leaf_ = nullptr;
  std::set<std::string> cli_given_;
  std::string config_cache_dir_;
  RunConfig run_;
};

CLI::App* Cli::add_command(CLI::App* parent, const std::string& name, const std::string& help,
                           std::function<void()> action) {
  auto* sub = parent->add_subcommand(name, help);
  sub->fallthrough();
  if (action) actions_[sub] = std::move(action);
  return sub;
}

void Cli::build() {
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.option_defaults()->always_capture_default();
  app_.add_option("--config", o_.config, "JSON object of option defaults (keys are flag names)");
  app_.add_option("--cache-dir", o_.cache_dir, "fetch cache directory");
  app_.add_flag("--offline", o_.offline, "serve fetches from the cache only");
  app_.add_option("--seed", o_.seed, "global seed");

  auto* s = add_command(&app_, "embed", "k-mer hash embeddings of a FASTA file, or import TSV vectors",
                        [this] { cmd_embed(); });
  s->add_option("--input", o_.embed.input, "FASTA input");
  s->add_option("--import-tsv", o_.embed.import_tsv, "accession<TAB>v1,v2,... input");
  s->add_option("--dim", o_.embed.dim, "embedding dimension");
  s->add_option("--k", o_.embed.k, "k-mer length");
  s->add_option("--out", o_.embed.out, "PVEC output");

  s = add_command(&app_, "pool", "mean-pool PVEM token matrices into a PVEC store",
                  [this] { cmd_pool(); });
  s->add_option("--input", o_.pool.input, "PVEM input");
  s->add_option("--cap", o_.pool.cap, "token cap to enforce (0 = none)");
  s->add_option("--out", o_.pool.out, "PVEC output");

  s = add_command(&app_, "index", "build a PIDX index over a PVEC store", [this] { cmd_index(); });
  s->add_option("action", o_.index.action, "optional 'build'");
  s->add_option("--db", o_.index.db, "PVEC store");
  s->add_option("--metric", o_.index.metric, "ip, l2, cosine or norm_l2");
  s->add_option("--out", o_.index.out, "PIDX output");
  o_.index.idx.attach(s);

  s = add_command(&app_, "query", "top-k search against a PIDX index", [this] { cmd_query(); });
  s->add_option("--index", o_.query.index, "PIDX index");
  s->add_option("--metric", o_.query.metric, "must match the index metric when given");
  s->add_option("--topk", o_.query.topk, "hits per query");
  s->add_option("--query-acc", o_.query.query_acc, "query accession(s)")->delimiter(',');
  s->add_option("--queries", o_.query.queries, "file with one query accession per line");
  s->add_option("--query-db", o_.query.query_db, "PVEC store holding the query vectors");
  s->add_option("--nprobe", o_.query.nprobe, "override IVF nprobe (0 = index default)");
  s->add_flag("--multiprobe", o_.query.multiprobe, "force LSH multiprobe");
  s->add_option("--out", o_.query.out, "TSV output (default stdout)");

  s = add_command(&app_, "bench", "EC hit-rate benchmark", [this] { cmd_bench(); });
  s->add_option("--db", o_.bench.db, "PVEC store");
  s->add_option("--labels", o_.bench.labels, "accession<TAB>ec1;ec2 labels");
  s->add_option("--queries", o_.bench.queries, "file with one query accession per line");
  s->add_option("--query-db", o_.bench.query_db, "PVEC store holding the query vectors");
  s->add_option("--metrics", o_.bench.metrics, "comma-separated metrics");
  s->add_option("--topk", o_.bench.topk, "comma-separated increasing k values");
  s->add_option("--level", o_.bench.level, "EC match level counted as positive (1..4)");
  s->add_flag("--exclude-self", o_.bench.exclude_self, "drop the query from its own ranking");
  s->add_option("--report", o_.bench.report, "JSON report output");
  s->add_option("--csv", o_.bench.csv, "directory for CSV tables");
  o_.bench.idx.attach(s);

  auto* al = add_command(&app_, "align", "pairwise alignment and BLAST-style search", nullptr);
  al->require_subcommand(1);
  s = add_command(al, "nw", "global alignment", [this] { cmd_pair(true); });
  s->add_option("--query", o_.nw.query, "FASTA with one query record");
  s->add_option("--target", o_.nw.target, "FASTA targets");
  s->add_option("--out", o_.nw.out, "TSV output (default stdout)");
  o_.nw.g.attach(s);
  s = add_command(al, "sw", "local alignment", [this] { cmd_pair(false); });
  s->add_option("--query", o_.sw.query, "FASTA with one query record");
  s->add_option("--target", o_.sw.target, "FASTA targets");
  s->add_option("--out", o_.sw.out, "TSV output (default stdout)");
  o_.sw.g.attach(s);
  s = add_command(al, "blast", "seed-and-extend database search", [this] { cmd_blast(); });
  s->add_option("--query", o_.blast.query, "FASTA with one query record");
  s->add_option("--db", o_.blast.db, "FASTA database");
  s->add_option("--matrix", o_.blast.matrix, "substitution matrix name or file");
  s->add_option("--word", o_.blast.p.word, "word length");
  s->add_option("--t", o_.blast.p.threshold, "neighborhood score threshold");
  s->add_option("--xdrop", o_.blast.p.xdrop, "X-drop");
  s->add_option("--min-score", o_.blast.p.min_score, "minimum HSP score");
  s->add_option("--out", o_.blast.out, "TSV output (default stdout)");

  s = add_command(&app_, "pim", "percent identity of a query against its hits",
                  [this] { cmd_pim(); });
  s->add_option("--hits", o_.pim.hits, "hits TSV from 'query'");
  s->add_option("--fasta", o_.pim.fasta, "sequences for the query and hits");
  s->add_option("--labels", o_.pim.labels, "EC labels for match levels");
  s->add_option("--query-acc", o_.pim.query_acc, "query to report (default: the only one)");
  s->add_option("--sort", o_.pim.sort, "rank or identity");
  s->add_option("--out", o_.pim.out, "TSV output (default stdout)");
  o_.pim.g.attach(s);

  s = add_command(&app_, "venn", "overlap of positive hits between two rankings",
                  [this] { cmd_venn(); });
  s->add_option("--a", o_.venn.a, "first hits TSV");
  s->add_option("--b", o_.venn.b, "second hits TSV");
  s->add_option("--labels", o_.venn.labels, "EC labels");
  s->add_option("--query-acc", o_.venn.query_acc, "query to compare (default: the only one)");
  s->add_option("--level", o_.venn.level, "EC match level counted as positive (1..4)");
  s->add_option("--topk", o_.venn.topk, "rank cutoff");
  s->add_option("--out", o_.venn.out, "JSON output (default stdout)");

  s = add_command(&app_, "fetch", "download FASTA records by accession", [this] { cmd_fetch(); });
  s->add_option("--accessions", o_.fetch.accessions, "accession(s)")->delimiter(',');
  s->add_option("--accessions-file", o_.fetch.accessions_file, "one accession per line");
  s->add_option("--url", o_.fetch.url, "URL template containing {acc}");
  s->add_option("--workers", o_.fetch.workers, "concurrent requests (1..4)");
  s->add_option("--out", o_.fetch.out, "FASTA output (default stdout)");
}

bool Cli::given(const char* flag) const {
  for (const CLI::App* a = leaf_; a; a = a->get_parent()) {
    if (const auto* opt = a->get_option_no_throw(flag)) return opt->count() > 0;
  }
  return false;
}

void Cli::need(const char* flag) const {
  if (!given(flag)) {
    throw ValidationError(std::string("missing required option ") + flag + " for '" +
                          run_.command + "'");
  }
}

bool known_anywhere(const CLI::App* app, const std::string& flag) {
  if (app->get_option_no_throw(flag)) return true;
  for (const auto* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
    if (known_anywhere(sub, flag)) return true;
  }
  return false;
}

std::string config_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ValidationError("config key '" + key + "' must be a string, number, boolean or array");
}

void Cli::merge_config() {
  if (o_.config.empty()) return;
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(util::read_file(o_.config));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + o_.config + ": " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config " + o_.config + ": expected a JSON object");

  for (const auto& [raw_key, value] : cfg.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (key == "config") throw ValidationError("config files cannot include other configs");
    if (!known_anywhere(&app_, flag)) throw ValidationError("unknown config key '" + raw_key + "'");
    if (key == "cache-dir") {
      config_cache_dir_ = config_scalar(value, raw_key);
      continue;
    }
    CLI::Option* opt = nullptr;
    for (CLI::App* a = leaf_; a && !opt; a = a->get_parent()) opt = a->get_option_no_throw(flag);
    if (!opt || opt->count() > 0) continue;  // not for this command, or set on the command line
    if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto& item : value) parts.push_back(config_scalar(item, raw_key));
      if (opt->get_items_expected_max() > 1) {
        opt->add_result(parts);
      } else {
        std::string joined;
        for (const auto& p : parts) joined += (joined.empty() ? "" : ",") + p;
        opt->add_result(joined);
      }
    } else {
      opt->add_result(config_scalar(value, raw_key));
    }
    opt->run_callback();
  }
}

void Cli::resolve() {
  std::vector<std::string> path;
  for (const CLI::App* a = leaf_; a && a != &app_; a = a->get_parent()) path.insert(path.begin(), a->get_name());
  for (const auto& p : path) run_.command += (run_.command.empty() ? "" : " ") + p;

  run_.seed = o_.seed;
  run_.offline = o_.offline;
  run_.cache_dir = resolve_cache_dir(cli_given_.count("--cache-dir") ? o_.cache_dir : "",
                                     config_cache_dir_);
  for (const CLI::App* a = leaf_; a; a = a->get_parent()) {
    for (const auto* opt : a->get_options()) {
      const auto name = opt->get_single_name();
      if (name == "help" || name == "h" || name.empty()) continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
        if (value.empty() && opt->get_expected_max() == 0) value = "false";  // unset flag
      }
      run_.options.emplace(name, std::move(value));
    }
  }
  run_.options["cache-dir"] = run_.cache_dir.string();
}

int Cli::run(std::span<const std::string> args) {
  if (!args.empty() && !args.front().starts_with('-') &&
      !app_.get_subcommand_no_throw(args.front())) {
    err_ << ojson{{"error", "usage"}, {"exit_code", 1},
                  {"message", "unknown command '" + args.front() + "'"}}.dump()
         << "\n";
    err_ << app_.help();
    return 1;
  }
  std::vector<const char*> argv{"protvec"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app_.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::CallForAllHelp& e) {
    return app_.exit(e, out_, err_);
  } catch (const CLI::ParseError& e) {
    err_ << ojson{{"error", "usage"}, {"exit_code", 1}, {"message", e.what()}}.dump() << "\n";
    err_ << app_.help();
    return 1;
  }

  leaf_ = &app_;
  while (true) {
    auto subs = leaf_->get_subcommands();
    if (subs.empty()) break;
    leaf_ = subs.front();
  }
  for (const CLI::App* a = leaf_; a; a = a->get_parent()) {
    for (const auto* opt : a->get_options()) {
      if (opt->count() > 0) cli_given_.insert("--" + opt->get_single_name());
    }
  }

  try {
    merge_config();
    resolve();
    auto it = actions_.find(leaf_);
    if (it == actions_.end()) throw ValidationError("no command given");
    it->second();
    return 0;
  } catch (const ValidationError& e) {
    err_ << ojson{{"error", "validation"}, {"exit_code", 1}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const IoError& e) {
    err_ << ojson{{"error", "io"}, {"exit_code", 2}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    err_ << ojson{{"error", "validation"}, {"exit_code", 1}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err_ << ojson{{"error", "io"}, {"exit_code", 2}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err_ << ojson{{"error", "internal"}, {"exit_code", 2}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}

void Cli::cmd_embed() {
  auto& e = o_.embed;
  need("--out");
  if (e.input.empty() == e.import_tsv.empty()) {
    throw ValidationError("embed needs exactly one of --input or --import-tsv");
  }
  vectorize::EmbeddingStore store(e.dim);
  if (!e.input.empty()) {
    for (const auto& rec : core::read_fasta_file(e.input)) {
      store.add(rec.accession, vectorize::kmer_hash_embed(rec.sequence, e.dim, e.k, o_.seed));
    }
  } else {
    store = vectorize::store_import_tsv(util::read_file(e.import_tsv));
  }
  vectorize::store_write(store, e.out);
}

void Cli::cmd_pool() {
  need("--input");
  need("--out");
  std::size_t dim = 0;
  const auto records = vectorize::token_store_deserialize(util::read_file(o_.pool.input), &dim);
  vectorize::EmbeddingStore store(dim);
  for (const auto& r : records) {
    if (o_.pool.cap > 0) r.matrix.validate(o_.pool.cap);
    store.add(r.accession, vectorize::pool_tokens(r.matrix));
  }
  vectorize::store_write(store, o_.pool.out);
}

void Cli::cmd_index() {
  auto& x = o_.index;
  if (!x.action.empty() && x.action != "build") {
    throw ValidationError("unknown index action '" + x.action + "' (expected 'build')");
  }
  need("--db");
  need("--out");
  auto store = vectorize::store_read(x.db);
  const auto idx = index::LayeredIndex::build(std::move(store), mode_arg(x.idx.mode),
                                              metric_arg(x.metric), x.idx.params, o_.seed);
  index::index_save(idx, x.out);
}

void Cli::cmd_query() {
  auto& q = o_.query;
  need("--index");
  const auto idx = index::index_load(q.index);
  if (!q.metric.empty() && metric_arg(q.metric) != idx.metric()) {
    throw ValidationError("index was built for metric '" +
                          std::string(simscore::metric_name(idx.metric())) + "', not '" +
                          q.metric + "'");
  }
  std::optional<vectorize::EmbeddingStore> qdb;
  if (!q.query_db.empty()) qdb = vectorize::store_read(q.query_db);
  const auto& source = qdb ? *qdb : idx.store();

  std::vector<std::string> accs = q.query_acc;
  if (!q.queries.empty()) {
    auto more = read_accession_list(q.queries);
    accs.insert(accs.end(), more.begin(), more.end());
  }
  if (accs.empty() && qdb) accs = qdb->accessions();
  if (accs.empty()) throw ValidationError("no queries: give --query-acc, --queries or --query-db");

  index::SearchParams sp;
  if (q.nprobe > 0) sp.nprobe = q.nprobe;
  if (q.multiprobe) sp.multiprobe = true;

  std::vector<index::RankedHits> results;
  for (const auto& acc : accs) {
    const auto row = source.find(acc);
    if (!row) throw ValidationError("no embedding for query '" + acc + "'");
    auto hits = idx.search(source.row(*row), q.topk, sp, acc);
    if (hits.shortfall) {
      err_ << ojson{{"warning", "shortfall"}, {"query", acc}, {"requested", q.topk},
                    {"returned", hits.hits.size()}}.dump()
           << "\n";
    }
    results.push_back(std::move(hits));
  }
  emit(q.out, write_hits_tsv(results), out_);
}

void Cli::cmd_bench() {
  auto& b = o_.bench;
  need("--db");
  need("--labels");
  need("--queries");

  evalbench::BenchConfig cfg;
  cfg.k_list.clear();
  for (const auto& s : split_list(b.topk, "--topk")) cfg.k_list.push_back(parse_count(s, "--topk"));
  cfg.metrics.clear();
  for (const auto& s : split_list(b.metrics, "--metrics")) cfg.metrics.push_back(metric_arg(s));
  cfg.level = b.level;
  cfg.include_self = !b.exclude_self;
  cfg.seed = o_.seed;
  cfg.mode = mode_arg(b.idx.mode);
  cfg.params = b.idx.params;
  cfg.validate();

  const auto db = vectorize::store_read(b.db);
  const auto labels = core::read_labels_file(b.labels);
  const auto queries = read_accession_list(b.queries);
  std::optional<vectorize::EmbeddingStore> qdb;
  if (!b.query_db.empty()) qdb = vectorize::store_read(b.query_db);

  auto report = evalbench::run_benchmark(db, labels, queries, cfg, qdb ? &*qdb : nullptr);
  report.provenance["run_config"] = run_.to_json();

  const auto json = evalbench::report_emit_json(report);
  if (!b.report.empty()) emit(b.report, json, out_);
  if (!b.csv.empty()) {
    const auto csv = evalbench::report_emit_csv(report);
    const std::filesystem::path dir(b.csv);
    util::write_file(dir / "hit_rates.csv", csv.hit_rates);
    util::write_file(dir / "tp_first_fp.csv", csv.tp_first_fp);
    util::write_file(dir / "per_query.csv", csv.per_query);
  }
  if (b.report.empty() && b.csv.empty()) out_ << json;
}

core::ProteinSequence Cli::single_query(const std::string& path) const {
  auto recs = core::read_fasta_file(path);
  if (recs.size() != 1) {
    throw ValidationError("query FASTA " + path + " must hold exactly one record, found " +
                          std::to_string(recs.size()));
  }
  return std::move(recs.front().sequence);
}

void Cli::cmd_pair(bool global_mode) {
  auto& p = global_mode ? o_.nw : o_.sw;
  need("--query");
  need("--target");
  const auto matrix = align::SubstitutionMatrix::load(p.g.matrix);
  const auto query = single_query(p.query);
  std::string tsv;
  for (const auto& t : core::read_fasta_file(p.target)) {
    const auto r = global_mode ? align::nw_align(query, t.sequence, matrix, p.g.gaps())
                               : align::sw_align(query, t.sequence, matrix, p.g.gaps());
    tsv += t.accession + '\t' + std::to_string(r.score) + '\t' + fixed2(r.identity_pct) + '\t' +
           std::to_string(r.columns) + '\t' + span_text(r.a_begin, r.a_end) + '\t' +
           span_text(r.b_begin, r.b_end) + '\n';
  }
  emit(p.out, tsv, out_);
}

void Cli::cmd_blast() {
  auto& b = o_.blast;
  need("--query");
  need("--db");
  const auto matrix = align::SubstitutionMatrix::load(b.matrix);
  const auto query = single_query(b.query);
  const auto db = core::read_fasta_file(b.db);
  std::string tsv;
  for (const auto& h : align::blast_search(query, db, matrix, b.p)) {
    tsv += h.accession + '\t' + std::to_string(h.hsp.score) + '\t' + fixed2(h.hsp.identity_pct()) +
           '\t' + std::to_string(h.hsp.length()) + '\t' + span_text(h.hsp.q_begin, h.hsp.q_end) +
           '\t' + span_text(h.hsp.t_begin, h.hsp.t_end) + '\n';
  }
  emit(b.out, tsv, out_);
}

index::RankedHits Cli::pick_query(const std::vector<index::RankedHits>& all,
                                  const std::string& acc, const std::string& file) const {
  if (acc.empty()) {
    if (all.size() != 1) {
      throw ValidationError(file + " holds " + std::to_string(all.size()) +
                            " queries; choose one with --query-acc");
    }
    return all.front();
  }
  for (const auto& r : all) {
    if (r.query == acc) return r;
  }
  throw ValidationError("query '" + acc + "' not found in " + file);
}

void Cli::cmd_pim() {
  auto& p = o_.pim;
  need("--hits");
  need("--fasta");
  evalbench::PimSort sort;
  if (p.sort == "rank") {
    sort = evalbench::PimSort::kRank;
  } else if (p.sort == "identity") {
    sort = evalbench::PimSort::kIdentity;
  } else {
    throw ValidationError("--sort must be 'rank' or 'identity'");
  }
  const auto hits = pick_query(parse_hits_tsv(util::read_file(p.hits)), p.query_acc, p.hits);
  evalbench::SequenceMap seqs;
  for (auto& r : core::read_fasta_file(p.fasta)) {
    if (!seqs.emplace(r.accession, std::move(r.sequence)).second) {
      throw ValidationError("duplicate FASTA accession '" + r.accession + "'");
    }
  }
  const auto labels = p.labels.empty() ? core::LabelTable{} : core::read_labels_file(p.labels);
  const auto matrix = align::SubstitutionMatrix::load(p.g.matrix);
  const auto rows = evalbench::pim_matrix(hits, seqs, labels, sort, matrix, p.g.gaps());

  std::string tsv = "accession\trank\tidentity_pct\tmatch_level\tstatus\n";
  for (const auto& r : rows) {
    tsv += r.accession + '\t' + std::to_string(r.rank) + '\t' +
           (r.identity_pct ? fixed2(*r.identity_pct) : "NA") + '\t' +
           (r.labeled && labels.contains(hits.query) ? std::to_string(r.match_level) : "NA") +
           '\t' + (r.identity_pct ? "ok" : "missing_sequence") + '\n';
  }
  emit(p.out, tsv, out_);
}

void Cli::cmd_venn() {
  auto& v = o_.venn;
  need("--a");
  need("--b");
  need("--labels");
  const auto a = pick_query(parse_hits_tsv(util::read_file(v.a)), v.query_acc, v.a);
  const auto b = pick_query(parse_hits_tsv(util::read_file(v.b)), v.query_acc, v.b);
  const auto labels = core::read_labels_file(v.labels);
  const auto sets = evalbench::venn_compare(a, b, labels, v.level, v.topk);
  const ojson doc{{"query", a.query}, {"k", v.topk},         {"level", v.level},
                  {"only_a", sets.only_a}, {"only_b", sets.only_b}, {"both", sets.both}};
  emit(v.out, doc.dump(2) + "\n", out_);
}

void Cli::cmd_fetch() {
  auto& f = o_.fetch;
  std::vector<std::string> accs = f.accessions;
  if (!f.accessions_file.empty()) {
    auto more = read_accession_list(f.accessions_file);
    accs.insert(accs.end(), more.begin(), more.end());
  }
  if (accs.empty()) throw ValidationError("fetch needs --accessions or --accessions-file");

  FetchOptions opt;
  opt.url_template = f.url;
  opt.cache_dir = run_.cache_dir;
  opt.offline = run_.offline;
  opt.workers = f.workers;
  const auto res = fetch_sequences(accs, opt);
  emit(f.out, res.fasta, out_);
  for (const auto& fail : res.failures) {
    err_ << ojson{{"warning", "fetch_failed"}, {"accession", fail.accession},
                  {"reason", fail.reason}}.dump()
         << "\n";
  }
  if (!res.failures.empty()) {
    throw IoError(std::to_string(res.failures.size()) + " accession(s) could not be fetched");
  }
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json opts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  return {{"command", command},
          {"seed", seed},
          {"cache_dir", cache_dir.string()},
          {"offline", offline},
          {"options", std::move(opts)}};
}

std::filesystem::path resolve_cache_dir(const std::string& flag_value,
                                        const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PROTVEC_CACHE"); env && *env) return env;
  if (!config_value.empty()) return config_value;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "protvec";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "protvec";
  }
  return ".protvec-cache";
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace protvec::cli
