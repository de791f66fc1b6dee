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

#include "protvec/core/ec_number.hpp"

#include <algorithm>
#include <charconv>

#include "protvec/error.hpp"

namespace protvec::core {
namespace {

// Digits only, no leading zero, fits in 32 bits.
bool parse_positive(std::string_view digits, std::uint32_t& out) {
  if (digits.empty() || digits.front() == '0') return false;
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

ECComponent parse_component(std::string_view token, std::string_view whole) {
  if (token.empty()) {
    throw ValidationError("empty EC component in '" + std::string(whole) + "'");
  }
  if (token == "-") return ECComponent::wildcard();
  std::uint32_t v = 0;
  if (token.front() == 'n' && parse_positive(token.substr(1), v)) {
    return ECComponent::provisional(v);
  }
  if (parse_positive(token, v)) return ECComponent::number(v);
  throw ValidationError("invalid EC component '" + std::string(token) + "' in '" +
                        std::string(whole) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

bool ECNumber::is_complete() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ECComponent& c) { return c.is_number(); });
}

std::string ECNumber::to_string() const {
  std::string out;
  for (int i = 0; i < kLevels; ++i) {
    if (i) out.push_back('.');
    const auto& c = components_[i];
    switch (c.kind) {
      case ECComponent::Kind::kNumber:
        out += std::to_string(c.value);
        break;
      case ECComponent::Kind::kProvisional:
        out += 'n' + std::to_string(c.value);
        break;
      case ECComponent::Kind::kWildcard:
        out.push_back('-');
        break;
    }
  }
  return out;
}

ECNumber parse_ec(std::string_view text) {
  std::array<ECComponent, ECNumber::kLevels> parts{};
  std::size_t start = 0;
  int count = 0;
  while (true) {
    const auto dot = text.find('.', start);
    const auto token = text.substr(start, dot == std::string_view::npos ? dot : dot - start);
    if (count == ECNumber::kLevels) {
      throw ValidationError("EC number '" + std::string(text) +
                            "' has more than 4 components");
    }
    parts[count++] = parse_component(token, text);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (count != ECNumber::kLevels) {
    throw ValidationError("EC number '" + std::string(text) + "' has " +
                          std::to_string(count) + " components, expected 4");
  }
  return ECNumber(parts);
}

ECSet parse_ec_list(std::string_view text) {
  ECSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    const auto token = trim(text.substr(start, semi == std::string_view::npos ? semi : semi - start));
    if (!token.empty()) out.push_back(parse_ec(token));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int common_prefix_level(const ECNumber& a, const ECNumber& b) noexcept {
  int level = 0;
  while (level < ECNumber::kLevels && a[level].matches(b[level])) ++level;
  return level;
}

int ec_match_level(std::span<const ECNumber> a, std::span<const ECNumber> b) {
  if (a.empty() || b.empty()) throw ValidationError("ec_match_level: empty EC set");
  int best = 0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      best = std::max(best, common_prefix_level(x, y));
      if (best == ECNumber::kLevels) return best;
    }
  }
  return best;
}

}  // namespace protvec::core
