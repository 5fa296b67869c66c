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

#include "spin_cache.hpp"

#include <vector>

#include "ppqkd/errors.hpp"

namespace ppqkd::detail {

namespace {

std::size_t slot(Axis axis, int target, int n_qubits) {
    return (static_cast<std::size_t>(n_qubits - 1) * kMaxQubits + static_cast<std::size_t>(target)) *
               3 +
           static_cast<std::size_t>(axis);
}

std::vector<ProjectiveObservable> build_spins() {
    std::vector<ProjectiveObservable> out;
    for (int n = 1; n <= kMaxQubits; ++n) {
        for (int t = 0; t < kMaxQubits; ++t) {
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                // Unused (target >= n) slots hold a placeholder.
                out.push_back(pauli_observable(a, t < n ? t : 0, n));
            }
        }
    }
    return out;
}

std::vector<ProjectiveObservable> build_r() {
    std::vector<ProjectiveObservable> out;
    out.push_back(r_observable());
    for (int n = 3; n <= kMaxQubits; ++n) {
        std::vector<ProjectiveOutcome> lifted;
        const auto rest = Operator::identity(std::size_t{1} << (n - 2));
        for (const auto& o : out.front().outcomes()) {
            lifted.push_back({o.label, kron(o.projector, rest)});
        }
        out.emplace_back(std::move(lifted));
    }
    return out;
}

}  // namespace

const ProjectiveObservable& spin_observable(Axis axis, int target, int n_qubits) {
    static const std::vector<ProjectiveObservable> cache = build_spins();
    if (n_qubits < 1 || n_qubits > kMaxQubits || target < 0 || target >= n_qubits) {
        throw InvalidArgument("spin observable index out of range");
    }
    return cache[slot(axis, target, n_qubits)];
}

const ProjectiveObservable& r_measurement(int n_qubits) {
    static const std::vector<ProjectiveObservable> cache = build_r();
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw InvalidArgument("R needs between 2 and 5 qubits");
    }
    return cache[static_cast<std::size_t>(n_qubits - 2)];
}

}  // namespace ppqkd::detail
