// Copyright 2026 The mtopos Authors
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

// Command dispatch and JSON reports for the command-line tool.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "mtopos/dsl.hpp"

namespace mtopos::cli {

using Json = nlohmann::ordered_json;

/// Global settings; tolerances override the spec's tolerance block.
struct Config {
  std::optional<double> eps;
  std::optional<double> null_threshold;
  std::size_t depth = 4;
  std::size_t max_dim = 16;
  std::uint64_t seed = 1;
  bool timing = false;
};

/// A command with its option values as text, e.g. {"range", "{1}"}.
struct Request {
  std::string command;
  std::map<std::string, std::string> args;
};

enum ExitCode { ok = 0, diagnostics = 1, internal = 2 };

struct Outcome {
  int exit_code = ok;
  Json report;
};

/// Runs one command against a parsed spec (null for `selftest`). Library
/// errors become diagnostics; anything else is an internal error.
Outcome execute(const Request& request, const dsl::SystemSpec* spec,
                const Config& config);

/// Parses `text` first; parse diagnostics become the report.
Outcome execute_text(const Request& request, const std::string& text,
                     const Config& config);

/// Reads and parses `path`, then executes. Parse failures are diagnostics.
Outcome execute_file(const Request& request, const std::string& path,
                     const Config& config);

/// JSON text, or an indented plain-text rendering when `pretty`.
std::string render(const Json& report, bool pretty);

/// The `mtopos` executable.
int main(int argc, char** argv);

}  // namespace mtopos::cli
