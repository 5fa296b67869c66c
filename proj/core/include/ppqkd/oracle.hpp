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

// Exact branch enumeration of one protocol round.
//
// Every measurement in the round is expanded into all of its outcomes with
// Born-rule weights, collapsing the statevector along each branch. Branches
// lighter than kBranchPruneTol are dropped.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ppqkd/protocol.hpp"

namespace ppqkd {

inline constexpr double kBranchPruneTol = 1e-15;

struct Branch {
    double probability;
    BobBasis bob_basis;
    int bob_bit;
    RLabel alice_r;
    std::optional<Axis> eve_axis;
    std::optional<int> eve_to_bob;
    std::optional<int> eve_to_alice;
};

std::vector<Branch> enumerate_joint(const EveStrategy& strategy);

/// True when Alice's announced bit for Bob's basis contradicts his bit.
bool is_detection(RLabel alice_r, const BobBasis& bob_basis, int bob_bit);

/// P(detection | S23). Throws ZeroProbabilityCondition when P(S23) = 0.
double exact_detection_given_s23(std::span<const Branch> branches);
double exact_detection_given_s23(const EveStrategy& strategy);

double exact_s23_fraction(std::span<const Branch> branches);
double exact_s23_fraction(const EveStrategy& strategy);

/// P(alice bit = bob bit | S14). Throws ZeroProbabilityCondition when
/// P(S14) = 0.
double exact_key_agreement(std::span<const Branch> branches);
double exact_key_agreement(const EveStrategy& strategy);

std::array<double, 4> exact_r_distribution(std::span<const Branch> branches);

double total_probability(std::span<const Branch> branches);

struct ExactSummary {
    EveStrategy strategy;
    double detection_given_s23;
    double s23_fraction;
    std::array<double, 4> r_distribution;
    double key_agreement;
    double total_probability;
    std::size_t branch_count;
};

ExactSummary exact_summary(const EveStrategy& strategy);

}  // namespace ppqkd
