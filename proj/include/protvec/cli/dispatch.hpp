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

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

namespace protvec::cli {

// Settings after merging the config file into the command line. Options
// given on the command line win over config values.
struct RunConfig {
  std::string command;  // "bench", "align nw", ...
  std::uint64_t seed = 7;
  std::filesystem::path cache_dir;
  bool offline = false;
  std::map<std::string, std::string> options;  // every option of the command, resolved

  nlohmann::ordered_json to_json() const;
};

// --cache-dir flag, then $PROTVEC_CACHE, then the config value, then
// $XDG_CACHE_HOME/protvec or ~/.cache/protvec.
std::filesystem::path resolve_cache_dir(const std::string& flag_value,
                                        const std::string& config_value);

// Runs one subcommand; `args` excludes the program name. Returns 0 on
// success, 1 on invalid input or usage, 2 on I/O failure. Failures also
// write one JSON object line to `err`.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace protvec::cli
