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

// Small gate-level circuits and a checker for "rotate, then measure in the
// computational basis" realizations of Alice's R measurement.
//
// Phase conventions: Phase(q, t) multiplies |1>_q by e^{it};
// ControlledPhase(c, q, t) multiplies |11>_{cq} by e^{it}.
//
// Text format, one gate per line, '#' starts a comment:
//
//     H q
//     P q theta
//     CP c q theta
//     CNOT c q
//     CH c q
//
// Angles are radians written as decimal literals. An optional first
// directive `qubits n` sets the register size (default 2).

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ppqkd/qmath.hpp"

namespace ppqkd {

struct Hadamard {
    int target;
};
struct Phase {
    int target;
    double angle;
};
struct ControlledPhase {
    int control;
    int target;
    double angle;
};
struct ControlledNot {
    int control;
    int target;
};
struct ControlledHadamard {
    int control;
    int target;
};

using Gate = std::variant<Hadamard, Phase, ControlledPhase, ControlledNot, ControlledHadamard>;

class Circuit {
  public:
    /// Throws InvalidArgument for a bad register size or a gate whose qubit
    /// indices are out of range or not distinct.
    explicit Circuit(int n_qubits, std::vector<Gate> gates = {});

    void append(Gate gate);
    /// This circuit followed by `next`.
    Circuit then(const Circuit& next) const;

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }

  private:
    void validate(const Gate& gate) const;

    int n_qubits_;
    std::vector<Gate> gates_;
};

/// Matrix of a single gate on an n-qubit register.
Operator gate_unitary(const Gate& gate, int n_qubits);

/// Product of the gate unitaries in application order.
Operator unitary_of(const Circuit& circuit);

/// sum_k |b_k><r_k|.
Operator reference_r_rotation();

/// For each r_k, the computational basis index it is sent to.
using RLabeling = std::array<std::size_t, 4>;

inline constexpr double kLabelingTol = 1e-8;

/// Labeling if `unitary` sends every r_k to a computational basis state up to
/// a phase; empty otherwise (also for non-2-qubit operators).
std::optional<RLabeling> implements_r(const Operator& unitary);
std::optional<RLabeling> implements_r(const Circuit& circuit);

/// Gate-level realization of reference_r_rotation up to per-vector phases,
/// with the identity labeling.
Circuit reference_r_circuit();

/// Transcription of the R-measurement part of the published circuit figure
/// (Bob's box and the Bell-pair preparation excluded).
Circuit fig1_candidate();

/// Throws ParseError naming the offending line.
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit (angles with 17 significant digits).
std::string format_circuit(const Circuit& circuit);

}  // namespace ppqkd
