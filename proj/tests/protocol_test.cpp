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
#include "ppqkd/protocol.hpp"
#include "support/independent.hpp"

using namespace ppqkd;

namespace {

RoundRecord rec(std::uint64_t index, RLabel r, std::optional<BobBasis> basis = BobBasis::z(),
                std::optional<int> bit = 0) {
    RoundRecord out;
    out.index = index;
    out.alice_r = r;
    out.bob_basis = basis;
    out.bob_bit = bit;
    return out;
}

}  // namespace

TEST(BobBasis, YIsRejected) { EXPECT_THROW(BobBasis(Axis::Y), InvalidArgument); }

TEST(RLabel, NamesAndRange) {
    EXPECT_EQ(r_name(RLabel::R3), "r3");
    EXPECT_EQ(r_from_index(3), RLabel::R4);
    EXPECT_THROW(r_from_index(4), InvalidArgument);
    EXPECT_TRUE(in_s23(RLabel::R2));
    EXPECT_FALSE(in_s23(RLabel::R4));
}

TEST(EveStrategy, PassFlags) {
    EXPECT_FALSE(EveStrategy::none().on_way_to_bob());
    EXPECT_TRUE(EveStrategy::fixed(Axis::Z, PassModel::ToBobOnly).on_way_to_bob());
    EXPECT_FALSE(EveStrategy::fixed(Axis::Z, PassModel::ToBobOnly).on_way_to_alice());
    EXPECT_TRUE(EveStrategy::random_xz().on_way_to_alice());
    EXPECT_EQ(EveStrategy::fixed(Axis::Y).name(), "fixed-y");
    EXPECT_EQ(EveStrategy::random_xz().name(), "random-xz");
    EXPECT_EQ(pass_model_name(PassModel::ToAliceOnly), "to-alice");
}

TEST(Sift, SplitsByROutcomePreservingOrder) {
    std::vector<RoundRecord> records{rec(0, RLabel::R1), rec(1, RLabel::R2), rec(2, RLabel::R3),
                                     rec(3, RLabel::R4)};
    auto s = sift(records);
    EXPECT_EQ(s.s14, (std::vector<std::uint64_t>{0, 3}));
    EXPECT_EQ(s.s23, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Retrodict, AnnouncesOnlyS23) {
    EXPECT_FALSE(retrodict(rec(0, RLabel::R1)).has_value());
    EXPECT_FALSE(retrodict(rec(0, RLabel::R4)).has_value());
    auto r2 = retrodict(rec(5, RLabel::R2));
    ASSERT_TRUE(r2.has_value());
    EXPECT_EQ(r2->index, 5U);
    EXPECT_EQ(r2->x_bit, 1);
    EXPECT_EQ(r2->z_bit, 0);
    auto r3 = retrodict(rec(6, RLabel::R3));
    EXPECT_EQ(r3->x_bit, 0);
    EXPECT_EQ(r3->z_bit, 1);
}

TEST(Check, FlagsMismatchOnly) {
    std::vector<RoundRecord> records{rec(0, RLabel::R2, BobBasis::x(), 1),
                                     rec(1, RLabel::R2, BobBasis::x(), 0),
                                     rec(2, RLabel::R3, BobBasis::z(), 1)};
    std::vector<Retrodiction> claims;
    for (const auto& r : records) claims.push_back(*retrodict(r));
    auto events = check(claims, records);
    ASSERT_EQ(events.size(), 1U);
    EXPECT_EQ(events[0].index, 1U);
}

TEST(Check, UnknownIndexOrMissingBobDataThrows) {
    std::vector<RoundRecord> records{rec(0, RLabel::R2)};
    std::vector<Retrodiction> bad{{9, 1, 0}};
    EXPECT_THROW(check(bad, records), ProtocolError);
    std::vector<RoundRecord> blank{rec(0, RLabel::R2, std::nullopt, std::nullopt)};
    std::vector<Retrodiction> ok{{0, 1, 0}};
    EXPECT_THROW(check(ok, blank), ProtocolError);
}

TEST(ExtractKeys, BitsFromROutcome) {
    std::vector<RoundRecord> records{rec(0, RLabel::R1, BobBasis::x(), 0),
                                     rec(3, RLabel::R4, BobBasis::z(), 1)};
    auto keys = extract_keys(records);
    EXPECT_EQ(keys.alice, (Key{0, 1}));
    EXPECT_EQ(keys.bob, (Key{0, 1}));
    std::vector<RoundRecord> wrong{rec(1, RLabel::R2)};
    EXPECT_THROW(extract_keys(wrong), ProtocolError);
}

TEST(RunRound, NoAttackAlwaysMatchesTable) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        RandomStream rng(99, i);
        auto r = run_round(EveStrategy::none(), rng, i);
        ASSERT_TRUE(r.bob_basis && r.bob_bit);
        EXPECT_FALSE(r.eve_trace.has_value());
        const int k = static_cast<int>(r.alice_r);
        const auto axis = r.bob_basis->axis() == Axis::X ? ref::Ax::X : ref::Ax::Z;
        EXPECT_EQ(*r.bob_bit, ref::table_bit(k, axis)) << "round " << i;
    }
}

TEST(RunRound, EveTraceFollowsPassModel) {
    RandomStream rng(3, 0);
    auto r = run_round(EveStrategy::fixed(Axis::X, PassModel::ToAliceOnly), rng);
    ASSERT_TRUE(r.eve_trace.has_value());
    EXPECT_EQ(r.eve_trace->axis, Axis::X);
    EXPECT_FALSE(r.eve_trace->to_bob_outcome.has_value());
    EXPECT_TRUE(r.eve_trace->to_alice_outcome.has_value());
}

TEST(RunProtocol, ZeroPairs) {
    auto report = run_protocol(0, EveStrategy::none(), 1);
    EXPECT_EQ(report.n_rounds, 0U);
    EXPECT_TRUE(report.s23_empty);
    EXPECT_EQ(report.detection_rate_given_s23, 0.0);
    EXPECT_TRUE(report.alice_key.empty());
}

TEST(RunProtocol, NoAttackIsClean) {
    auto report = run_protocol(20000, EveStrategy::none(), 7);
    EXPECT_EQ(report.detection_count, 0U);
    EXPECT_EQ(report.alice_key, report.bob_key);
    EXPECT_EQ(report.s14_indices.size() + report.s23_indices.size(), 20000U);
}

TEST(RunProtocol, DeterministicAcrossThreadCounts) {
    const auto s = EveStrategy::random_xz();
    auto one = run_protocol(5000, s, 42, 1);
    for (unsigned t : {2U, 3U, 8U}) {
        auto many = run_protocol(5000, s, 42, t);
        EXPECT_EQ(one.detection_indices, many.detection_indices) << t;
        EXPECT_EQ(one.alice_key, many.alice_key) << t;
        EXPECT_EQ(one.bob_key, many.bob_key) << t;
        EXPECT_EQ(one.r_counts, many.r_counts) << t;
    }
}

TEST(RunProtocol, DifferentSeedsDiffer) {
    auto a = run_protocol(2000, EveStrategy::none(), 1);
    auto b = run_protocol(2000, EveStrategy::none(), 2);
    EXPECT_NE(a.alice_key, b.alice_key);
}

TEST(RandomStream, CounterStreamsAreIndependentOfOrder) {
    RandomStream a(5, 17);
    RandomStream b(5, 17);
    RandomStream c(5, 18);
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
