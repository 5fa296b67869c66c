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

// Immediate-measurement protocol.
//
// One round: Alice prepares Phi+ on (A, C) and sends C out. Eve may measure C
// on its way to Bob. Bob measures sigma_x or sigma_z on C (fair coin) and
// records the bit. Eve may measure C again on its way back. Alice measures R
// on (A, C). Rounds with r1/r4 form S14 (raw key) and rounds with r2/r3 form
// S23, whose retrodictions are announced and checked against Bob's records.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppqkd/qmath.hpp"
#include "ppqkd/random.hpp"

namespace ppqkd {

inline constexpr int kAncillaQubit = 0;
inline constexpr int kChannelQubit = 1;

enum class RLabel { R1 = 0, R2 = 1, R3 = 2, R4 = 3 };

std::string_view r_name(RLabel r);
RLabel r_from_index(std::size_t index);
inline bool in_s23(RLabel r) { return r == RLabel::R2 || r == RLabel::R3; }

/// Bob only ever measures sigma_x or sigma_z.
class BobBasis {
  public:
    /// Throws InvalidArgument for Axis::Y.
    explicit BobBasis(Axis axis);

    static BobBasis x() { return BobBasis(Axis::X); }
    static BobBasis z() { return BobBasis(Axis::Z); }

    Axis axis() const noexcept { return axis_; }
    friend bool operator==(const BobBasis&, const BobBasis&) = default;

  private:
    Axis axis_;
};

enum class EveKind { NoAttack, FixedAxis, RandomXZ };
enum class PassModel { ToBobOnly, ToAliceOnly, BothPasses };

std::string_view pass_model_name(PassModel passes);

/// Intercept-resend configuration. Eve only touches the channel qubit; a
/// RandomXZ axis is drawn once per particle and reused on both passes.
struct EveStrategy {
    EveKind kind = EveKind::NoAttack;
    Axis axis = Axis::Z;
    PassModel passes = PassModel::BothPasses;

    static EveStrategy none() { return {}; }
    static EveStrategy fixed(Axis axis, PassModel passes = PassModel::BothPasses) {
        return {EveKind::FixedAxis, axis, passes};
    }
    static EveStrategy random_xz(PassModel passes = PassModel::BothPasses) {
        return {EveKind::RandomXZ, Axis::Z, passes};
    }

    bool attacks() const noexcept { return kind != EveKind::NoAttack; }
    bool on_way_to_bob() const noexcept {
        return attacks() && passes != PassModel::ToAliceOnly;
    }
    bool on_way_to_alice() const noexcept {
        return attacks() && passes != PassModel::ToBobOnly;
    }

    /// "none", "fixed-x", "fixed-y", "fixed-z" or "random-xz".
    std::string name() const;
};

/// Hidden from party logic; kept for analysis only.
struct EveTrace {
    Axis axis;
    std::optional<int> to_bob_outcome;
    std::optional<int> to_alice_outcome;
};

struct RoundRecord {
    std::uint64_t index = 0;
    // Unset until Bob holds a classical record (deferred mode keeps them
    // empty until the choice and pointer qubits are measured).
    std::optional<BobBasis> bob_basis;
    std::optional<int> bob_bit;
    RLabel alice_r = RLabel::R1;
    std::optional<EveTrace> eve_trace;
};

struct Retrodiction {
    std::uint64_t index;
    int x_bit;
    int z_bit;

    int bit_for(const BobBasis& basis) const {
        return basis.axis() == Axis::X ? x_bit : z_bit;
    }
};

struct DetectionEvent {
    std::uint64_t index;
    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

struct SiftResult {
    std::vector<std::uint64_t> s14;
    std::vector<std::uint64_t> s23;
};

using Key = std::vector<std::uint8_t>;

struct KeyPair {
    Key alice;
    Key bob;
};

struct RunReport {
    std::uint64_t n_rounds = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> s14_indices;
    std::vector<std::uint64_t> s23_indices;
    std::vector<std::uint64_t> detection_indices;
    std::uint64_t detection_count = 0;
    double detection_rate_given_s23 = 0.0;
    bool s23_empty = true;
    Key alice_key;
    Key bob_key;
    std::array<std::uint64_t, 4> r_counts{};
};

/// Draws Eve's axis for one particle (consumes one coin for RandomXZ).
Axis draw_eve_axis(const EveStrategy& strategy, RandomStream& rng);

/// Projective sigma_axis measurement on `channel` followed by resending the
/// eigenstate. Returns the outcome bit and updates `state` in place.
int intercept(StateVector& state, Axis axis, int channel, RandomStream& rng);

/// Runs one round of the immediate protocol.
RoundRecord run_round(const EveStrategy& strategy, RandomStream& rng, std::uint64_t index = 0);

/// Partition by Alice's outcome, preserving order.
SiftResult sift(std::span<const RoundRecord> records);

/// Public statement for an S23 round; empty for r1/r4.
std::optional<Retrodiction> retrodict(const RoundRecord& record);

/// One event per retrodiction that contradicts Bob's bit in the basis he
/// used. Throws ProtocolError if a retrodiction has no matching record or the
/// record carries no Bob data.
std::vector<DetectionEvent> check(std::span<const Retrodiction> retrodictions,
                                  std::span<const RoundRecord> records);

/// Raw keys from S14 records. Throws ProtocolError on an r2/r3 record.
KeyPair extract_keys(std::span<const RoundRecord> s14_records);

using RoundFn = std::function<RoundRecord(RandomStream&, std::uint64_t)>;

/// Runs `n` rounds, round i drawing from RandomStream(seed, i). The result is
/// the same for every `threads` value (0 picks the hardware concurrency).
std::vector<RoundRecord> simulate_rounds(std::uint64_t n, std::uint64_t seed,
                                         const RoundFn& round, unsigned threads = 1);

/// Sift, announce, check and extract from a completed transcript.
RunReport assemble_report(std::span<const RoundRecord> records, std::uint64_t seed);

RunReport run_protocol(std::uint64_t n, const EveStrategy& strategy, std::uint64_t seed,
                       unsigned threads = 1);

}  // namespace ppqkd
