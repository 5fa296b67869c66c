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

#include <vector>

#include <gtest/gtest.h>

#include "ppqkd/errors.hpp"
#include "ppqkd/oracle.hpp"
#include "support/independent.hpp"

using namespace ppqkd;

namespace {

constexpr double kExact = 1e-12;

ref::Attack to_ref(const EveStrategy& s) {
    ref::Attack a;
    a.active = s.attacks();
    a.to_bob = s.on_way_to_bob();
    a.to_alice = s.on_way_to_alice();
    if (s.kind == EveKind::RandomXZ) {
        a.axes = {{0.5, ref::Ax::X}, {0.5, ref::Ax::Z}};
    } else {
        a.axes = {{1.0, s.axis == Axis::X   ? ref::Ax::X
                        : s.axis == Axis::Y ? ref::Ax::Y
                                            : ref::Ax::Z}};
    }
    return a;
}

std::vector<EveStrategy> all_strategies() {
    std::vector<EveStrategy> out{EveStrategy::none()};
    for (auto p : {PassModel::ToBobOnly, PassModel::ToAliceOnly, PassModel::BothPasses}) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) out.push_back(EveStrategy::fixed(a, p));
        out.push_back(EveStrategy::random_xz(p));
    }
    return out;
}

}  // namespace

TEST(Oracle, NoAttackBranches) {
    auto branches = enumerate_joint(EveStrategy::none());
    // Bob basis x bit x R, with the zero-weight cells pruned.
    EXPECT_EQ(branches.size(), 8U);
    EXPECT_NEAR(total_probability(branches), 1.0, kExact);
    for (const auto& b : branches) {
        EXPECT_NEAR(b.probability, 0.125, kExact);
        EXPECT_FALSE(is_detection(b.alice_r, b.bob_basis, b.bob_bit));
        EXPECT_FALSE(b.eve_axis.has_value());
    }
    EXPECT_NEAR(exact_detection_given_s23(branches), 0.0, kExact);
    EXPECT_NEAR(exact_s23_fraction(branches), 0.5, kExact);
    EXPECT_NEAR(exact_key_agreement(branches), 1.0, kExact);
    for (double p : exact_r_distribution(branches)) EXPECT_NEAR(p, 0.25, kExact);
}

TEST(Oracle, IsDetectionFollowsTable) {
    EXPECT_FALSE(is_detection(RLabel::R2, BobBasis::x(), 1));
    EXPECT_TRUE(is_detection(RLabel::R2, BobBasis::x(), 0));
    EXPECT_FALSE(is_detection(RLabel::R3, BobBasis::z(), 1));
    EXPECT_TRUE(is_detection(RLabel::R3, BobBasis::z(), 0));
    EXPECT_FALSE(is_detection(RLabel::R1, BobBasis::z(), 1));  // S14 never detects
}

TEST(Oracle, MatchesDensityMatrixReferenceForEveryStrategy) {
    for (const auto& s : all_strategies()) {
        const auto want = ref::protocol_stats(to_ref(s));
        const auto got = exact_summary(s);
        const auto tag = s.name() + "/" + std::string(pass_model_name(s.passes));
        EXPECT_NEAR(got.detection_given_s23, want.detection_given_s23(), kExact) << tag;
        EXPECT_NEAR(got.s23_fraction, want.p_s23, kExact) << tag;
        EXPECT_NEAR(got.key_agreement, want.key_agreement(), kExact) << tag;
        EXPECT_NEAR(got.total_probability, 1.0, kExact) << tag;
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(got.r_distribution[k], want.p_r[k], kExact) << tag;
    }
}

// Closed values obtained independently with a small linear-algebra script.
TEST(Oracle, KnownDetectionValues) {
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::fixed(Axis::Z)), 0.25, kExact);
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::fixed(Axis::X)), 0.25, kExact);
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::random_xz()), 0.25, kExact);
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::fixed(Axis::Y)), 0.5, kExact);
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::fixed(Axis::Z, PassModel::ToBobOnly)),
                0.125, kExact);
    EXPECT_NEAR(exact_detection_given_s23(EveStrategy::fixed(Axis::Y, PassModel::ToAliceOnly)),
                0.25, kExact);
    EXPECT_NEAR(exact_key_agreement(EveStrategy::fixed(Axis::Z)), 0.75, kExact);
    EXPECT_NEAR(exact_key_agreement(EveStrategy::fixed(Axis::Y)), 0.5, kExact);
}

TEST(Oracle, EveOutcomesAreRecordedPerPass) {
    auto branches = enumerate_joint(EveStrategy::fixed(Axis::Z, PassModel::ToBobOnly));
    for (const auto& b : branches) {
        EXPECT_EQ(b.eve_axis, Axis::Z);
        EXPECT_TRUE(b.eve_to_bob.has_value());
        EXPECT_FALSE(b.eve_to_alice.has_value());
        EXPECT_GT(b.probability, kBranchPruneTol);
    }
}

TEST(Oracle, EmptyConditionThrows) {
    std::vector<Branch> none;
    EXPECT_THROW(exact_detection_given_s23(none), ZeroProbabilityCondition);
    EXPECT_THROW(exact_key_agreement(none), ZeroProbabilityCondition);
}

TEST(Oracle, MonteCarloWithinFourSigma) {
    for (const auto& s : {EveStrategy::fixed(Axis::Z), EveStrategy::fixed(Axis::Y),
                          EveStrategy::random_xz(PassModel::ToBobOnly)}) {
        const auto report = run_protocol(40000, s, 1234, 4);
        const double p = exact_detection_given_s23(s);
        const double n = static_cast<double>(report.s23_indices.size());
        EXPECT_NEAR(report.detection_rate_given_s23, p, ref::four_sigma(p, n)) << s.name();
        const double f = exact_s23_fraction(s);
        EXPECT_NEAR(n / 40000.0, f, ref::four_sigma(f, 40000.0)) << s.name();
    }
}
