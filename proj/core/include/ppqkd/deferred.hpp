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

// Deferred-measurement variant of the protocol.
//
// Bob keeps his basis choice and his spin outcome as quantum data: a choice
// qubit in (|c_x> + |c_z>)/sqrt(2) selects which spin component a pointer
// qubit records, through one entangling unitary. Nothing classical exists on
// Bob's side until the choice (D) and pointer (P) qubits are measured, which
// happens only after Alice's R measurement.
//
// Register order: (ancilla A, channel C, choice, pointer) = qubits 0..3.
// |c_x> = |0>, |c_z> = |1> on the choice qubit; |p_up> = |0>, |p_down> = |1>
// on the pointer qubit.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ppqkd/oracle.hpp"
#include "ppqkd/protocol.hpp"
#include "ppqkd/qmath.hpp"

namespace ppqkd {

inline constexpr int kChoiceQubit = 2;
inline constexpr int kPointerQubit = 3;
inline constexpr int kDeferredQubits = 4;

class JointState {
  public:
    const StateVector& vector() const noexcept { return state_; }

  private:
    explicit JointState(StateVector state);
    StateVector state_;

    friend JointState prepare_deferred();
    friend JointState bob_entangle(const JointState& state);
    friend class DeferredRound;
};

struct ChoicePointerObservables {
    ProjectiveObservable choice;   // "c_x", "c_z"
    ProjectiveObservable pointer;  // "p_up", "p_down"
};

const ChoicePointerObservables& choice_pointer_observables();

/// Phi+ on (A, C), choice in the uniform superposition, pointer up.
JointState prepare_deferred();

/// |c_x><c_x| (x) H_C CNOT(C->P) H_C + |c_z><c_z| (x) CNOT(C->P).
const Operator& bob_entangle_unitary();

JointState bob_entangle(const JointState& state);
StateVector bob_entangle(const StateVector& state);

enum class DeferredOrder { AliceFirst, BobFirst };

/// One deferred round, step by step. The constructor prepares the joint
/// state, applies Eve's to-Bob pass, Bob's entangling unitary and Eve's
/// to-Alice pass. The record carries no Bob data until measure_bob().
class DeferredRound {
  public:
    DeferredRound(const EveStrategy& strategy, RandomStream& rng, std::uint64_t index = 0);

    void measure_alice();
    void measure_bob();

    const RoundRecord& record() const noexcept { return record_; }
    const JointState& state() const noexcept { return state_; }
    bool alice_measured() const noexcept { return alice_done_; }

  private:
    RandomStream& rng_;
    JointState state_;
    RoundRecord record_;
    bool alice_done_ = false;
};

RoundRecord run_deferred_round(RandomStream& rng, std::uint64_t index = 0,
                               const EveStrategy& strategy = EveStrategy::none(),
                               DeferredOrder order = DeferredOrder::AliceFirst);

RunReport run_deferred_protocol(std::uint64_t n, std::uint64_t seed,
                                const EveStrategy& strategy = EveStrategy::none(),
                                unsigned threads = 1);

/// Exact branches of a deferred round.
std::vector<Branch> enumerate_deferred(const EveStrategy& strategy = EveStrategy::none(),
                                       DeferredOrder order = DeferredOrder::AliceFirst);

/// Probabilities over (Bob basis, Bob bit, Alice r).
struct JointDistribution {
    std::array<double, 16> cells{};

    static std::size_t slot(const BobBasis& basis, int bit, RLabel r) {
        return (basis.axis() == Axis::X ? 0U : 8U) + static_cast<std::size_t>(bit) * 4U +
               static_cast<std::size_t>(r);
    }
    double at(const BobBasis& basis, int bit, RLabel r) const { return cells[slot(basis, bit, r)]; }
    double total() const;
};

JointDistribution joint_distribution(std::span<const Branch> branches);

double total_variation(const JointDistribution& a, const JointDistribution& b);

struct EquivalenceReport {
    double total_variation;
    JointDistribution immediate;
    JointDistribution deferred;
    /// Deferred AliceFirst versus BobFirst.
    double order_total_variation;
    /// Entrywise deviation of Alice's (A, C) state after Bob acts.
    double reduced_state_deviation;
    /// Largest |P(bit = retrodicted | r, basis) - 1| over the S23 cells and
    /// the S14 key cells, deferred mode.
    double table1_max_deviation;
};

EquivalenceReport equivalence_report();

}  // namespace ppqkd
