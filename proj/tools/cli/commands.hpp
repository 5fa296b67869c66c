// Copyright 2026 The ppqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "ppqkd/errors.hpp"
#include "ppqkd/protocol.hpp"

namespace ppqkd::cli {

enum class Format { Json, Csv };

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 2;

/// Bad flag value or missing argument; maps to kExitUsage.
struct UsageError : Error {
    using Error::Error;
};

struct RunConfig {
    std::uint64_t pairs = 0;
    std::string strategy = "none";
    std::string passes = "both";
    std::string mode = "immediate";
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    unsigned threads = 1;
};

/// Throws UsageError for values outside the accepted enumerations.
EveStrategy parse_strategy(const std::string& strategy, const std::string& passes);
Format parse_format(const std::string& format);

struct CommandResult {
    int exit_code = kExitOk;
    std::string out;
    std::string err;
};

CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_exact(const RunConfig& config);
CommandResult cmd_table(Format format);
CommandResult cmd_deferred(Format format);
CommandResult cmd_circuit(const std::string& path, Format format);
/// Same as cmd_circuit on already-loaded text; `source` names it in output.
CommandResult cmd_circuit_text(const std::string& text, const std::string& source, Format format);

/// Full command line handling. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ppqkd::cli
