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

#include "protvec/cli/hits_tsv.hpp"

#include <charconv>
#include <map>

#include "protvec/error.hpp"

namespace protvec::cli {
namespace {

template <typename T>
bool parse_number(std::string_view s, T& v) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string write_hits_tsv(const std::vector<index::RankedHits>& results) {
  std::string out;
  for (const auto& r : results) {
    for (const auto& h : r.hits) {
      out += r.query + '\t' + std::to_string(h.rank) + '\t' + h.accession + '\t' +
             format_double(h.score) + '\n';
    }
  }
  return out;
}

std::vector<index::RankedHits> parse_hits_tsv(std::string_view text) {
  std::vector<index::RankedHits> out;
  std::map<std::string, std::size_t, std::less<>> slot;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> f;
    for (std::size_t pos = 0;;) {
      const auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    const auto where = "hits line " + std::to_string(line_no) + ": ";
    if (f.size() != 4) throw ValidationError(where + "expected 4 tab-separated fields");
    if (f[0].empty() || f[2].empty()) throw ValidationError(where + "empty accession");
    index::Hit hit;
    hit.accession = std::string(f[2]);
    if (!parse_number(f[1], hit.rank)) throw ValidationError(where + "bad rank");
    if (!parse_number(f[3], hit.score)) throw ValidationError(where + "bad score");

    auto it = slot.find(f[0]);
    if (it == slot.end()) {
      it = slot.emplace(std::string(f[0]), out.size()).first;
      out.emplace_back().query = std::string(f[0]);
    }
    auto& rh = out[it->second];
    if (hit.rank != rh.hits.size() + 1) {
      throw ValidationError(where + "ranks for '" + rh.query + "' must run 1, 2, ...");
    }
    rh.hits.push_back(std::move(hit));
    rh.requested = rh.hits.size();
  }
  return out;
}

}  // namespace protvec::cli
