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

#include "protvec/vectorize/store.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "protvec/error.hpp"
#include "protvec/util/binary_io.hpp"
#include "protvec/util/file_io.hpp"

namespace protvec::vectorize {
namespace {

constexpr std::string_view kPvecMagic = "PVEC";
constexpr std::string_view kPvemMagic = "PVEM";

void put_accession(util::ByteWriter& w, const std::string& acc) {
  if (acc.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ValidationError("accession longer than 65535 bytes");
  }
  w.put(static_cast<std::uint16_t>(acc.size()));
  w.put_bytes(acc);
}

std::string get_accession(util::ByteReader& r) {
  const auto len = r.get<std::uint16_t>();
  return std::string(r.get_bytes(len));
}

// Returns (dim, count).
std::pair<std::uint32_t, std::uint64_t> read_header(util::ByteReader& r, std::string_view magic) {
  if (r.remaining() < 4) throw IoError("truncated stream");
  const auto got = r.get_bytes(4);
  if (got != magic) throw IoError("bad magic: expected " + std::string(magic));
  const auto version = r.get<std::uint32_t>();
  if (version != kPvecVersion) throw IoError("unknown version " + std::to_string(version));
  const auto dim = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  return {dim, count};
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {}

std::optional<std::size_t> EmbeddingStore::find(std::string_view accession) const {
  auto it = index_.find(std::string(accession));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingStore::add_row(std::string accession, const Vector<float>& values) {
  if (dim_ == 0) throw ValidationError("embedding store dimension must be >= 1");
  if (static_cast<std::size_t>(values.size()) != dim_) {
    throw ValidationError("vector for '" + accession + "' has dimension " +
                          std::to_string(values.size()) + ", store has " + std::to_string(dim_));
  }
  if (!values.allFinite()) throw ValidationError("vector for '" + accession + "' is not finite");
  if (index_.count(accession)) throw ValidationError("duplicate accession '" + accession + "'");
  index_.emplace(accession, accessions_.size());
  accessions_.push_back(std::move(accession));
  values_.insert(values_.end(), values.data(), values.data() + values.size());
}

bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
  // bitwise payload comparison; NaN never occurs in a valid store
  return a.dim_ == b.dim_ && a.accessions_ == b.accessions_ &&
         a.values_.size() == b.values_.size() &&
         std::memcmp(a.values_.data(), b.values_.data(), a.values_.size() * sizeof(float)) == 0;
}

std::string store_serialize(const EmbeddingStore& store) {
  util::ByteWriter w;
  w.put_bytes(kPvecMagic);
  w.put(kPvecVersion);
  w.put(static_cast<std::uint32_t>(store.dim()));
  w.put(static_cast<std::uint64_t>(store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    put_accession(w, store.accession(i));
    const auto row = store.row(i);
    w.put_span(std::span<const float>(row.data(), store.dim()));
  }
  return std::move(w).take();
}

EmbeddingStore store_deserialize(std::string_view bytes) {
  util::ByteReader r(bytes);
  const auto [dim, count] = read_header(r, kPvecMagic);
  if (dim == 0) throw IoError("PVEC dimension is zero");
  EmbeddingStore store(dim);
  Vector<float> v(static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < count; ++i) {
    auto acc = get_accession(r);
    r.get_span(std::span<float>(v.data(), dim));
    store.add(std::move(acc), v);
  }
  if (!r.at_end()) throw IoError("trailing bytes after PVEC payload");
  return store;
}

void store_write(const EmbeddingStore& store, const std::filesystem::path& path) {
  util::write_file(path, store_serialize(store));
}

EmbeddingStore store_read(const std::filesystem::path& path) {
  return store_deserialize(util::read_file(path));
}

EmbeddingStore store_import_tsv(std::string_view text) {
  std::optional<EmbeddingStore> store;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::vector<float> values;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "embedding TSV line " + std::to_string(line_no) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ValidationError(where + "missing TAB");
    values.clear();
    std::string field;
    auto rest = line.substr(tab + 1);
    std::size_t start = 0;
    while (true) {
      const auto comma = rest.find(',', start);
      field.assign(rest.substr(start, comma == std::string_view::npos ? comma : comma - start));
      char* end = nullptr;
      const float v = std::strtof(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size()) {
        throw ValidationError(where + "bad number '" + field + "'");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!store) store.emplace(values.size());
    try {
      store->add(std::string(line.substr(0, tab)),
                 Eigen::Map<const Vector<float>>(values.data(), static_cast<Eigen::Index>(values.size())));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  if (!store) throw ValidationError("embedding TSV has no records");
  return std::move(*store);
}

std::string token_store_serialize(std::size_t dim, const std::vector<TokenMatrixRecord>& records) {
  util::ByteWriter w;
  w.put_bytes(kPvemMagic);
  w.put(kPvecVersion);
  w.put(static_cast<std::uint32_t>(dim));
  w.put(static_cast<std::uint64_t>(records.size()));
  for (const auto& rec : records) {
    if (rec.matrix.dim() != dim) throw ValidationError("token matrix dimension mismatch");
    if (rec.matrix.tokens() != static_cast<std::size_t>(rec.matrix.rows.rows())) {
      throw ValidationError("token matrix role count mismatch for '" + rec.accession + "'");
    }
    put_accession(w, rec.accession);
    w.put(static_cast<std::uint32_t>(rec.matrix.tokens()));
    for (auto role : rec.matrix.roles) w.put(static_cast<std::uint8_t>(role));
    w.put_span(std::span<const float>(rec.matrix.rows.data(),
                                      static_cast<std::size_t>(rec.matrix.rows.size())));
  }
  return std::move(w).take();
}

std::vector<TokenMatrixRecord> token_store_deserialize(std::string_view bytes, std::size_t* dim_out) {
  util::ByteReader r(bytes);
  const auto [dim, count] = read_header(r, kPvemMagic);
  if (dim == 0) throw IoError("PVEM dimension is zero");
  std::vector<TokenMatrixRecord> out;
  std::unordered_map<std::string, bool> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    TokenMatrixRecord rec;
    rec.accession = get_accession(r);
    if (!seen.emplace(rec.accession, true).second) {
      throw ValidationError("duplicate accession '" + rec.accession + "'");
    }
    const auto tokens = r.get<std::uint32_t>();
    rec.matrix.roles.resize(tokens);
    for (auto& role : rec.matrix.roles) {
      const auto b = r.get<std::uint8_t>();
      if (b > 3) throw IoError("bad token role byte " + std::to_string(b));
      role = static_cast<TokenRole>(b);
    }
    rec.matrix.rows.resize(tokens, dim);
    r.get_span(std::span<float>(rec.matrix.rows.data(), static_cast<std::size_t>(tokens) * dim));
    if (!rec.matrix.rows.allFinite()) {
      throw ValidationError("token matrix for '" + rec.accession + "' is not finite");
    }
    out.push_back(std::move(rec));
  }
  if (!r.at_end()) throw IoError("trailing bytes after PVEM payload");
  if (dim_out) *dim_out = dim;
  return out;
}

}  // namespace protvec::vectorize
