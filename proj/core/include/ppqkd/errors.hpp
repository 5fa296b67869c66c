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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppqkd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad qubit index, dimension mismatch, non-normalized input and the like.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Every outcome of an observable has (numerically) zero probability.
struct MalformedObservable : Error {
    using Error::Error;
};

/// ABL denominator vanishes: the post-selection cannot follow any outcome.
struct PostSelectionImpossible : Error {
    using Error::Error;
};

/// Conditioning event of an exact probability has probability zero.
struct ZeroProbabilityCondition : Error {
    using Error::Error;
};

/// Inconsistent transcript handed to a protocol step.
struct ProtocolError : Error {
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace ppqkd
