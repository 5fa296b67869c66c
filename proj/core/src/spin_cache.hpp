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

#include "ppqkd/qmath.hpp"

namespace ppqkd::detail {

/// Cached pauli_observable(axis, target, n_qubits). Built once, read-only
/// afterwards, so safe to share between threads.
const ProjectiveObservable& spin_observable(Axis axis, int target, int n_qubits);

/// Cached R on qubits (0, 1) of a 2-qubit register, or of (0, 1) tensor
/// identity for larger registers.
const ProjectiveObservable& r_measurement(int n_qubits = 2);

}  // namespace ppqkd::detail
