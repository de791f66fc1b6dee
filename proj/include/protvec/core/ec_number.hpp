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

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace protvec::core {

// One position of an EC number: a positive integer, a provisional token
// such as "n3", or the wildcard "-".
struct ECComponent {
  enum class Kind : std::uint8_t { kNumber, kProvisional, kWildcard };

  Kind kind = Kind::kWildcard;
  std::uint32_t value = 0;  // unused for kWildcard

  static constexpr ECComponent number(std::uint32_t v) { return {Kind::kNumber, v}; }
  static constexpr ECComponent provisional(std::uint32_t v) { return {Kind::kProvisional, v}; }
  static constexpr ECComponent wildcard() { return {Kind::kWildcard, 0}; }

  bool is_number() const noexcept { return kind == Kind::kNumber; }

  // Only two equal plain numbers match. Wildcards and provisional tokens
  // never match anything, themselves included.
  bool matches(const ECComponent& other) const noexcept {
    return is_number() && other.is_number() && value == other.value;
  }

  friend auto operator<=>(const ECComponent&, const ECComponent&) = default;
};

class ECNumber {
 public:
  static constexpr int kLevels = 4;

  ECNumber() = default;
  explicit ECNumber(std::array<ECComponent, kLevels> components)
      : components_(components) {}

  const std::array<ECComponent, kLevels>& components() const noexcept { return components_; }
  const ECComponent& operator[](int i) const noexcept { return components_[i]; }

  // True when all four positions are plain numbers.
  bool is_complete() const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const ECNumber&, const ECNumber&) = default;

 private:
  std::array<ECComponent, kLevels> components_{};
};

using ECSet = std::vector<ECNumber>;

// Parses "a.b.c.d". Numbers must be positive without leading zeros so that
// printing gives back the input. Throws ValidationError.
ECNumber parse_ec(std::string_view text);

// Parses a ';'-separated list. Duplicates are dropped; the result is sorted.
ECSet parse_ec_list(std::string_view text);

// Number of leading positions (0..4) on which the two numbers match.
int common_prefix_level(const ECNumber& a, const ECNumber& b) noexcept;

// Maximum common_prefix_level over all pairs. Throws ValidationError when
// either set is empty.
int ec_match_level(std::span<const ECNumber> a, std::span<const ECNumber> b);

}  // namespace protvec::core
