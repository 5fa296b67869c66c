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

// Outcome probabilities of an intermediate projective measurement for a
// pre- and post-selected ensemble:
//
//     prob(q_k) = |<pre|P_k|post>|^2 / sum_i |<pre|P_i|post>|^2
//
// Post-selection is rank one (a state vector). Projectors may be degenerate.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ppqkd/qmath.hpp"

namespace ppqkd {

inline constexpr double kPostSelectionTol = 1e-12;
inline constexpr double kCertaintyTol = 1e-10;

struct ABLQuery {
    StateVector pre;
    StateVector post;
    ProjectiveObservable observable;
};

/// Throws PostSelectionImpossible when the denominator is <= 1e-12 and
/// InvalidArgument when the dimensions of the three inputs disagree.
std::vector<LabeledProbability> abl_distribution(const ABLQuery& query);

/// Label whose probability is within 1e-10 of one, if there is one.
std::optional<std::string> certain_value(const ABLQuery& query);

struct RetrodictionRow {
    std::string r_label;
    int x_bit;
    int y_bit;
    int z_bit;

    int bit(Axis axis) const;
    friend bool operator==(const RetrodictionRow&, const RetrodictionRow&) = default;
};

/// Certain sigma_x/y/z outcomes on the channel qubit for pre = Phi+ and each
/// post-selection r1..r4. Throws ProtocolError if any cell is not certain.
std::array<RetrodictionRow, 4> retrodiction_table();

}  // namespace ppqkd
