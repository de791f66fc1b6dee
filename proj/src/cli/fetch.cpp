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

#include "protvec/cli/fetch.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <optional>
#include <set>
#include <system_error>
#include <thread>

#include "protvec/core/fasta.hpp"
#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::cli {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // with {acc}
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("fetch URL needs a scheme: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ValidationError("fetch URL scheme must be http or https: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos || url.find("{acc}", path_begin) == std::string::npos) {
    throw ValidationError("fetch URL must contain a path with {acc}: " + url);
  }
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

std::string expand(std::string path, const std::string& acc) {
  for (auto pos = path.find("{acc}"); pos != std::string::npos; pos = path.find("{acc}")) {
    path.replace(pos, 5, acc);
  }
  return path;
}

std::optional<std::string> read_cache(const std::filesystem::path& file) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(file, ec)) return std::nullopt;
  return util::read_file(file);
}

// Write to a sibling temp file and rename so readers never see partial bodies.
void write_cache(const std::filesystem::path& file, const std::string& body) {
  auto tmp = file;
  tmp += ".tmp";
  util::write_file(tmp, body);
  std::filesystem::rename(tmp, file);
}

struct Slot {
  std::string body;
  std::string error;
  bool from_cache = false;
  bool requested = false;
};

void fetch_one(const std::string& acc, const Endpoint& ep, const FetchOptions& opt, Slot& slot) {
  if (!valid_accession(acc)) {
    slot.error = "invalid accession";
    return;
  }
  const auto cache_file = opt.cache_dir / (acc + ".fasta");
  try {
    if (auto cached = read_cache(cache_file)) {
      slot.body = std::move(*cached);
      slot.from_cache = true;
      return;
    }
  } catch (const std::exception& e) {
    slot.error = std::string("cache read failed: ") + e.what();
    return;
  }
  if (opt.offline) {
    slot.error = "not in cache (offline)";
    return;
  }

  httplib::Client client(ep.origin);
  client.set_connection_timeout(opt.timeout_seconds, 0);
  client.set_read_timeout(opt.timeout_seconds, 0);
  client.set_follow_location(true);
  slot.requested = true;
  auto res = client.Get(expand(ep.path, acc));
  if (!res) {
    slot.error = "request failed: " + httplib::to_string(res.error());
    return;
  }
  if (res->status != 200) {
    slot.error = "HTTP " + std::to_string(res->status);
    return;
  }
  try {
    core::parse_fasta(res->body);
  } catch (const ValidationError& e) {
    slot.error = std::string("malformed FASTA body: ") + e.what();
    return;
  }
  try {
    write_cache(cache_file, res->body);
  } catch (const std::exception& e) {
    slot.error = std::string("cache write failed: ") + e.what();
    return;
  }
  slot.body = std::move(res->body);
}

}  // namespace

bool valid_accession(std::string_view accession) {
  if (accession.empty() || accession.size() > 64) return false;
  if (accession == "." || accession == "..") return false;
  return std::all_of(accession.begin(), accession.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

FetchResult fetch_sequences(std::span<const std::string> accessions, const FetchOptions& options) {
  if (accessions.empty()) throw ValidationError("no accessions to fetch");
  const auto ep = split_url(options.url_template);

  std::vector<std::string> unique;
  std::set<std::string_view> seen;
  for (const auto& a : accessions) {
    if (seen.insert(a).second) unique.push_back(a);
  }

  std::vector<Slot> slots(unique.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < unique.size(); i = next++) {
      fetch_one(unique[i], ep, options, slots[i]);
    }
  };
  const std::size_t nthreads = std::clamp<std::size_t>(options.workers, 1, 4);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(nthreads, unique.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  FetchResult out;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    auto& s = slots[i];
    out.network_requests += s.requested ? 1 : 0;
    out.cache_hits += s.from_cache ? 1 : 0;
    if (!s.error.empty()) {
      out.failures.push_back({unique[i], std::move(s.error)});
      continue;
    }
    out.fasta += s.body;
    if (!s.body.empty() && s.body.back() != '\n') out.fasta += '\n';
  }
  return out;
}

}  // namespace protvec::cli
