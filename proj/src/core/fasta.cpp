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

#include "protvec/core/fasta.hpp"

#include "protvec/core/alphabet.hpp"
#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::core {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

struct Header {
  std::string accession;
  std::string description;
};

Header parse_header(std::string_view line, std::size_t line_no) {
  line.remove_prefix(1);  // '>'
  while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
  while (!line.empty() && is_space(line.back())) line.remove_suffix(1);

  std::size_t token_end = 0;
  while (token_end < line.size() && !is_space(line[token_end])) ++token_end;
  std::string_view token = line.substr(0, token_end);
  std::string_view rest = line.substr(token_end);
  while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);

  Header h;
  const auto bar1 = token.find('|');
  const auto bar2 = bar1 == std::string_view::npos ? bar1 : token.find('|', bar1 + 1);
  if (bar2 != std::string_view::npos) {
    h.accession = std::string(token.substr(bar1 + 1, bar2 - bar1 - 1));
    // "db|ACC|NAME rest": NAME and rest make up the description
    std::string desc(token.substr(bar2 + 1));
    if (!rest.empty()) {
      if (!desc.empty()) desc.push_back(' ');
      desc.append(rest);
    }
    h.description = std::move(desc);
  } else {
    h.accession = std::string(token);
    h.description = std::string(rest);
  }
  if (h.accession.empty()) {
    throw ValidationError("FASTA line " + std::to_string(line_no) + ": empty accession");
  }
  return h;
}

}  // namespace

std::vector<FastaRecord> parse_fasta(std::string_view text) {
  std::vector<FastaRecord> out;
  std::string residues;
  Header current;
  bool in_record = false;
  std::size_t header_line = 0;

  auto flush = [&] {
    if (!in_record) return;
    if (residues.empty()) {
      throw ValidationError("FASTA line " + std::to_string(header_line) + ": record '" +
                            current.accession + "' has no residues");
    }
    FastaRecord rec;
    rec.accession = std::move(current.accession);
    rec.sequence = ProteinSequence(residues);
    rec.description = std::move(current.description);
    out.push_back(std::move(rec));
    residues.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    if (!line.empty() && line.front() == '>') {
      flush();
      current = parse_header(line, line_no);
      header_line = line_no;
      in_record = true;
      continue;
    }
    for (char c : line) {
      if (is_space(c)) continue;
      if (!in_record) {
        throw ValidationError("FASTA line " + std::to_string(line_no) +
                              ": sequence data before the first header");
      }
      const auto r = normalize_residue(c);
      if (!r) {
        throw ValidationError("FASTA line " + std::to_string(line_no) +
                              ": illegal residue character '" + std::string(1, c) + "'");
      }
      residues.push_back(*r);
    }
  }
  flush();
  if (out.empty()) throw ValidationError("FASTA input is empty");
  return out;
}

std::vector<FastaRecord> read_fasta_file(const std::filesystem::path& path) {
  return parse_fasta(util::read_file(path));
}

std::string write_fasta(const std::vector<FastaRecord>& records, std::size_t line_width) {
  if (line_width == 0) line_width = 60;
  std::string out;
  for (const auto& r : records) {
    out.push_back('>');
    out += r.accession;
    if (!r.description.empty()) {
      out.push_back(' ');
      out += r.description;
    }
    out.push_back('\n');
    const auto res = r.sequence.residues();
    for (std::size_t i = 0; i < res.size(); i += line_width) {
      out.append(res.substr(i, line_width));
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace protvec::core
