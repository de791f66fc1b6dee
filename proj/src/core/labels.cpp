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

#include "protvec/core/labels.hpp"

#include "protvec/error.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::core {

void LabelTable::add(std::string accession, ECSet ecs) {
  if (accession.empty()) throw ValidationError("label with empty accession");
  if (ecs.empty()) throw ValidationError("accession '" + accession + "' has an empty EC set");
  auto [it, inserted] = labels_.emplace(std::move(accession), std::move(ecs));
  if (!inserted) throw ValidationError("duplicate label accession '" + it->first + "'");
}

const ECSet* LabelTable::find(std::string_view accession) const {
  auto it = labels_.find(accession);
  return it == labels_.end() ? nullptr : &it->second;
}

LabelTable parse_labels_tsv(std::string_view text) {
  LabelTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ValidationError("labels line " + std::to_string(line_no) + ": missing TAB");
    }
    try {
      table.add(std::string(line.substr(0, tab)), parse_ec_list(line.substr(tab + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError("labels line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

LabelTable read_labels_file(const std::filesystem::path& path) {
  return parse_labels_tsv(util::read_file(path));
}

std::string write_labels_tsv(const LabelTable& labels) {
  std::string out;
  for (const auto& [acc, ecs] : labels.entries()) {
    out += acc;
    out.push_back('\t');
    for (std::size_t i = 0; i < ecs.size(); ++i) {
      if (i) out.push_back(';');
      out += ecs[i].to_string();
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace protvec::core
