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

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "protvec/cli/dispatch.hpp"
#include "protvec/cli/fetch.hpp"
#include "protvec/cli/hits_tsv.hpp"
#include "protvec/core/fasta.hpp"
#include "protvec/evalbench/report.hpp"
#include "protvec/index/layered_index.hpp"
#include "protvec/util/file_io.hpp"
#include "protvec/vectorize/store.hpp"
#include "test_support.hpp"

// After Eigen: <resolv.h> defines a _res macro that collides with Eigen internals.
#include <httplib.h>

using namespace protvec;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const fs::path& path) { return path.string(); }

// Random proteins in db|ACC|NAME style, plus labels with two EC classes.
void write_fixture(const fs::path& dir, std::size_t n) {
  std::mt19937_64 rng(123);
  const std::string alphabet = "ACDEFGHIKLMNPQRSTVWY";
  std::vector<core::FastaRecord> recs;
  std::string labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    const std::size_t len = 40 + rng() % 60;
    for (std::size_t j = 0; j < len; ++j) s += alphabet[rng() % alphabet.size()];
    const auto acc = testing::accession_for(i);
    recs.push_back({acc, core::ProteinSequence(s), "PROT_" + std::to_string(i)});
    labels += acc + "\t" + (i % 2 ? "1.1.1.1" : "2.2.2.2") + "\n";
  }
  util::write_file(dir / "db.fasta", core::write_fasta(recs));
  util::write_file(dir / "ec.tsv", labels);
  util::write_file(dir / "q.txt", "P00000\nP00003\n");
  util::write_file(dir / "one.fasta", core::write_fasta({recs[3]}));
}

std::size_t lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Minimal FASTA endpoint; counts requests and peak concurrency.
class FakeUniprot {
 public:
  FakeUniprot() {
    server_.Get(R"(/uniprotkb/([^/]+)\.fasta)", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++active_;
      {
        std::lock_guard lock(mu_);
        peak_ = std::max(peak_, now);
        ++requests_[req.matches[1]];
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      const std::string acc = req.matches[1];
      if (acc == "BROKEN") {
        res.set_content("<html>not fasta</html>", "text/html");
      } else if (acc.rfind("MISSING", 0) == 0) {
        res.status = 404;
      } else {
        res.set_content(">sp|" + acc + "|" + acc + "_HUMAN test\nMKV" + acc.substr(0, 1) + "\n", "text/plain");
      }
      --active_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeUniprot() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/uniprotkb/{acc}.fasta"; }
  int requests(const std::string& acc) {
    std::lock_guard lock(mu_);
    return requests_[acc];
  }
  int total() {
    std::lock_guard lock(mu_);
    int t = 0;
    for (const auto& [k, v] : requests_) t += v;
    return t;
  }
  int peak() {
    std::lock_guard lock(mu_);
    return peak_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> active_{0};
  std::mutex mu_;
  int peak_ = 0;
  std::map<std::string, int> requests_;
};

}  // namespace

TEST_CASE("embed, index and query") {
  const auto dir = testing::scratch_dir("cli_pipeline");
  write_fixture(dir, 80);
  auto r = run({"embed", "--input", p(dir / "db.fasta"), "--dim", "64", "--k", "3", "--seed", "7",
                "--out", p(dir / "db.pvec")});
  REQUIRE(r.code == 0);
  const auto store = vectorize::store_read(dir / "db.pvec");
  CHECK(store.size() == 80);
  CHECK(store.dim() == 64);

  r = run({"embed", "--input", p(dir / "db.fasta"), "--dim", "64", "--k", "3", "--seed", "7",
           "--out", p(dir / "db2.pvec")});
  CHECK(util::read_file(dir / "db.pvec") == util::read_file(dir / "db2.pvec"));

  r = run({"index", "build", "--db", p(dir / "db.pvec"), "--metric", "cosine", "--out", p(dir / "i.pidx")});
  REQUIRE(r.code == 0);
  r = run({"index", "--db", p(dir / "db.pvec"), "--metric", "cosine", "--out", p(dir / "i2.pidx")});
  REQUIRE(r.code == 0);
  CHECK(util::read_file(dir / "i.pidx") == util::read_file(dir / "i2.pidx"));

  r = run({"query", "--index", p(dir / "i.pidx"), "--metric", "cosine", "--topk", "50",
           "--query-acc", "P00012", "--out", p(dir / "hits.tsv")});
  REQUIRE(r.code == 0);
  const auto tsv = util::read_file(dir / "hits.tsv");
  CHECK(lines(tsv) == 50);
  CHECK(tsv.rfind("P00012\t1\tP00012\t", 0) == 0);
  const auto parsed = cli::parse_hits_tsv(tsv);
  REQUIRE(parsed.size() == 1);
  const auto idx = index::index_load(dir / "i.pidx");
  const auto direct = idx.search_accession("P00012", 50);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(parsed[0].hits[i].accession == direct.hits[i].accession);
    CHECK(parsed[0].hits[i].score == direct.hits[i].score);
  }

  r = run({"query", "--index", p(dir / "i.pidx"), "--metric", "l2", "--query-acc", "P00012"});
  CHECK(r.code == 1);
  r = run({"query", "--index", p(dir / "i.pidx"), "--topk", "3", "--queries", p(dir / "q.txt")});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 6);

  auto bytes = util::read_file(dir / "i.pidx");
  bytes[bytes.size() / 2] ^= 1;
  util::write_file(dir / "bad.pidx", bytes);
  r = run({"query", "--index", p(dir / "bad.pidx"), "--query-acc", "P00012"});
  CHECK(r.code == 2);
  CHECK(r.err.find("checksum") != std::string::npos);
}

TEST_CASE("exit codes and error lines") {
  auto r = run({"bench", "--db", "x.pvec"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--labels") != std::string::npos);
  CHECK(r.err.rfind("{\"error\":\"validation\"", 0) == 0);

  r = run({"frobnicate"});
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown command") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run({});
  CHECK(r.code == 1);

  r = run({"embed", "--input", "/nonexistent/in.fasta", "--out", "/tmp/x.pvec"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("{\"error\":\"io\"", 0) == 0);

  r = run({"embed", "--dim", "notanumber"});
  CHECK(r.code == 1);

  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("bench") != std::string::npos);

  const auto dir = testing::scratch_dir("cli_errors");
  util::write_file(dir / "bad.fasta", ">A\nAC1E\n");
  r = run({"embed", "--input", p(dir / "bad.fasta"), "--out", p(dir / "o.pvec")});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "o.pvec"));
}

TEST_CASE("bench writes reports with the resolved run config") {
  const auto dir = testing::scratch_dir("cli_bench");
  write_fixture(dir, 60);
  REQUIRE(run({"embed", "--input", p(dir / "db.fasta"), "--dim", "32", "--out", p(dir / "db.pvec")}).code == 0);
  util::write_file(dir / "cfg.json", R"({"topk": "5,10", "metrics": ["cosine", "l2"], "level": 3, "leaf_size": 4})");

  const std::vector<std::string> args{"bench", "--config", p(dir / "cfg.json"), "--db", p(dir / "db.pvec"),
                                      "--labels", p(dir / "ec.tsv"), "--queries", p(dir / "q.txt"),
                                      "--level", "4", "--report", p(dir / "out" / "report.json"),
                                      "--csv", p(dir / "out")};
  auto r = run(args);
  REQUIRE(r.code == 0);
  const auto json = util::read_file(dir / "out" / "report.json");
  const auto report = evalbench::report_parse_json(json);
  CHECK(report.config.k_list == std::vector<std::size_t>{5, 10});
  CHECK(report.config.level == 4);  // flag beats config
  CHECK(report.config.params.leaf_size == 4);
  REQUIRE(report.results.size() == 2);
  const auto& rc = report.provenance.at("run_config");
  CHECK(rc.at("command") == "bench");
  CHECK(rc.at("options").at("level") == "4");
  CHECK(rc.at("options").at("metrics") == "cosine,l2");
  CHECK(fs::exists(dir / "out" / "hit_rates.csv"));
  CHECK(fs::exists(dir / "out" / "tp_first_fp.csv"));
  CHECK(fs::exists(dir / "out" / "per_query.csv"));

  r = run(args);
  CHECK(util::read_file(dir / "out" / "report.json") == json);

  util::write_file(dir / "typo.json", R"({"levle": 3})");
  r = run({"bench", "--config", p(dir / "typo.json"), "--db", "a", "--labels", "b", "--queries", "c"});
  CHECK(r.code == 1);
  CHECK(r.err.find("levle") != std::string::npos);

  r = run({"bench", "--db", p(dir / "db.pvec"), "--labels", p(dir / "ec.tsv"), "--queries",
           p(dir / "q.txt"), "--topk", "10,5"});
  CHECK(r.code == 1);
  r = run({"bench", "--db", p(dir / "db.pvec"), "--labels", p(dir / "ec.tsv"), "--queries",
           p(dir / "q.txt"), "--metrics", "cosine,hamming"});
  CHECK(r.code == 1);
  r = run({"bench", "--db", p(dir / "db.pvec"), "--labels", p(dir / "ec.tsv"), "--queries",
           p(dir / "q.txt"), "--topk", "3", "--metrics", "ip", "--exclude-self", "--mode", "layered"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"include_self\": false") != std::string::npos);
}

TEST_CASE("align, pim and venn") {
  const auto dir = testing::scratch_dir("cli_align");
  write_fixture(dir, 30);
  auto r = run({"align", "nw", "--query", p(dir / "one.fasta"), "--target", p(dir / "db.fasta")});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 30);
  CHECK(r.out.find("P00003\t") != std::string::npos);
  const auto self_line = r.out.substr(r.out.find("P00003\t"));
  CHECK(self_line.find("\t100.00\t") != std::string::npos);

  r = run({"align", "sw", "--query", p(dir / "one.fasta"), "--target", p(dir / "db.fasta"), "--gap-open", "10"});
  CHECK(r.code == 0);
  r = run({"align", "blast", "--query", p(dir / "one.fasta"), "--db", p(dir / "db.fasta")});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("P00003\t", 0) == 0);
  r = run({"align", "nw", "--query", p(dir / "db.fasta"), "--target", p(dir / "db.fasta")});
  CHECK(r.code == 1);
  r = run({"align"});
  CHECK(r.code == 1);

  REQUIRE(run({"embed", "--input", p(dir / "db.fasta"), "--dim", "16", "--out", p(dir / "db.pvec")}).code == 0);
  REQUIRE(run({"index", "--db", p(dir / "db.pvec"), "--out", p(dir / "c.pidx")}).code == 0);
  REQUIRE(run({"index", "--db", p(dir / "db.pvec"), "--metric", "l2", "--out", p(dir / "l.pidx")}).code == 0);
  REQUIRE(run({"query", "--index", p(dir / "c.pidx"), "--topk", "8", "--query-acc", "P00003", "--out",
               p(dir / "c.tsv")}).code == 0);
  REQUIRE(run({"query", "--index", p(dir / "l.pidx"), "--topk", "8", "--query-acc", "P00003", "--out",
               p(dir / "l.tsv")}).code == 0);

  r = run({"pim", "--hits", p(dir / "c.tsv"), "--fasta", p(dir / "db.fasta"), "--labels", p(dir / "ec.tsv")});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out) == 9);
  CHECK(r.out.find("P00003\t1\t100.00\t4\tok") != std::string::npos);

  util::write_file(dir / "partial.fasta", util::read_file(dir / "one.fasta"));
  r = run({"pim", "--hits", p(dir / "c.tsv"), "--fasta", p(dir / "partial.fasta"), "--sort", "identity"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("missing_sequence") != std::string::npos);
  r = run({"pim", "--hits", p(dir / "c.tsv"), "--fasta", p(dir / "db.fasta"), "--sort", "size"});
  CHECK(r.code == 1);

  r = run({"venn", "--a", p(dir / "c.tsv"), "--b", p(dir / "l.tsv"), "--labels", p(dir / "ec.tsv"), "--topk", "8"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("query") == "P00003");
  CHECK(doc.at("both").size() >= 1);
}

TEST_CASE("pool token matrices") {
  const auto dir = testing::scratch_dir("cli_pool");
  using R = vectorize::TokenRole;
  vectorize::TokenEmbeddingMatrix m;
  m.roles = {R::kCls, R::kResidue, R::kResidue, R::kSep};
  m.rows.resize(4, 2);
  m.rows << 9, 9, 1, 1, 3, 3, 5, 5;
  util::write_file(dir / "t.pvem", vectorize::token_store_serialize(2, {{"P1", m}}));
  auto r = run({"pool", "--input", p(dir / "t.pvem"), "--out", p(dir / "p.pvec")});
  REQUIRE(r.code == 0);
  const auto s = vectorize::store_read(dir / "p.pvec");
  CHECK(s.row(0)[0] == 2.0f);
  r = run({"pool", "--input", p(dir / "t.pvem"), "--cap", "3", "--out", p(dir / "p.pvec")});
  CHECK(r.code == 1);
}

TEST_CASE("hits tsv parsing") {
  const auto rh = cli::parse_hits_tsv("Q\t1\tA\t0.5\nQ\t2\tB\t0.25\nR\t1\tA\t-1e-3\n");
  REQUIRE(rh.size() == 2);
  CHECK(rh[0].hits[1].score == 0.25);
  CHECK(cli::write_hits_tsv(rh) == "Q\t1\tA\t0.5\nQ\t2\tB\t0.25\nR\t1\tA\t-0.001\n");
  CHECK_THROWS_AS(cli::parse_hits_tsv("Q\t2\tA\t0.5\n"), ValidationError);
  CHECK_THROWS_AS(cli::parse_hits_tsv("Q\t1\tA\n"), ValidationError);
  CHECK_THROWS_AS(cli::parse_hits_tsv("Q\t1\tA\tx\n"), ValidationError);
}

TEST_CASE("cache directory precedence") {
  ::unsetenv("PROTVEC_CACHE");
  ::setenv("XDG_CACHE_HOME", "/xdg", 1);
  CHECK(cli::resolve_cache_dir("", "") == fs::path("/xdg/protvec"));
  CHECK(cli::resolve_cache_dir("", "/cfg") == fs::path("/cfg"));
  ::setenv("PROTVEC_CACHE", "/env", 1);
  CHECK(cli::resolve_cache_dir("", "/cfg") == fs::path("/env"));
  CHECK(cli::resolve_cache_dir("/flag", "/cfg") == fs::path("/flag"));
  ::unsetenv("PROTVEC_CACHE");
  ::unsetenv("XDG_CACHE_HOME");
}

TEST_CASE("accession validation") {
  CHECK(cli::valid_accession("A0A0C5Q4Y6"));
  CHECK(cli::valid_accession("P12345-2"));
  CHECK_FALSE(cli::valid_accession(""));
  CHECK_FALSE(cli::valid_accession("../etc"));
  CHECK_FALSE(cli::valid_accession(".."));
  CHECK_FALSE(cli::valid_accession("a b"));
  CHECK_FALSE(cli::valid_accession(std::string(65, 'A')));
}

TEST_CASE("fetch caches, isolates failures and limits concurrency") {
  FakeUniprot server;
  const auto dir = testing::scratch_dir("fetch");
  cli::FetchOptions opt;
  opt.url_template = server.url();
  opt.cache_dir = dir / "cache";

  const std::vector<std::string> accs{"P1", "MISSING1", "Q2", "P1", "BROKEN", "../x", "R3", "S4", "T5"};
  auto res = cli::fetch_sequences(accs, opt);
  CHECK(res.failures.size() == 3);
  CHECK(res.failures[0].accession == "MISSING1");
  CHECK(res.failures[0].reason.find("404") != std::string::npos);
  CHECK(res.failures[1].accession == "BROKEN");
  CHECK(res.failures[2].accession == "../x");
  const auto recs = core::parse_fasta(res.fasta);
  REQUIRE(recs.size() == 5);
  CHECK(recs[0].accession == "P1");
  CHECK(recs[1].accession == "Q2");
  CHECK(recs[4].accession == "T5");
  CHECK(server.requests("P1") == 1);
  CHECK(server.peak() <= 4);
  CHECK(server.peak() >= 2);
  CHECK_FALSE(fs::exists(opt.cache_dir / "BROKEN.fasta"));
  CHECK_FALSE(fs::exists(opt.cache_dir / "MISSING1.fasta"));

  const int before = server.total();
  res = cli::fetch_sequences(std::vector<std::string>{"P1", "Q2"}, opt);
  CHECK(server.total() == before);
  CHECK(res.cache_hits == 2);
  CHECK(res.network_requests == 0);

  opt.offline = true;
  res = cli::fetch_sequences(std::vector<std::string>{"P1", "NEW9"}, opt);
  CHECK(res.fasta == util::read_file(opt.cache_dir / "P1.fasta"));
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].reason.find("offline") != std::string::npos);
  CHECK(server.total() == before);

  CHECK_THROWS_AS(cli::fetch_sequences(std::vector<std::string>{}, opt), ValidationError);
  opt.url_template = "ftp://host/{acc}";
  CHECK_THROWS_AS(cli::fetch_sequences(std::vector<std::string>{"P1"}, opt), ValidationError);
}

TEST_CASE("fetch command") {
  FakeUniprot server;
  const auto dir = testing::scratch_dir("fetch_cli");
  auto r = run({"fetch", "--cache-dir", p(dir / "c"), "--url", server.url(), "--accessions", "A1,B2",
                "--out", p(dir / "s.fasta")});
  REQUIRE(r.code == 0);
  CHECK(core::parse_fasta(util::read_file(dir / "s.fasta")).size() == 2);

  r = run({"fetch", "--cache-dir", p(dir / "c"), "--offline", "--accessions", "A1,MISSING2"});
  CHECK(r.code == 2);
  CHECK(r.out.find(">sp|A1|") == 0);
  CHECK(r.err.find("MISSING2") != std::string::npos);
  CHECK(server.requests("MISSING2") == 0);
}
