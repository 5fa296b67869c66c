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

// Dense complex linear algebra for a handful of qubits.
//
// Ordering convention: qubit 0 is the leftmost tensor factor and therefore the
// most significant bit of a basis index. For the two-qubit states of the
// protocol qubit 0 is Alice's ancilla A and qubit 1 is the channel particle C.
// Bit value 0 is spin-up along the measured axis, 1 is spin-down.
//
// Global phases are never removed implicitly.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppqkd/random.hpp"

namespace ppqkd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kAnalyticTol = 1e-12;
inline constexpr double kComposedTol = 1e-10;
inline constexpr int kMaxQubits = 5;

enum class Axis { X, Y, Z };

char axis_name(Axis axis);

class StateVector {
  public:
    /// Throws InvalidArgument unless the length is 2^n_qubits, every amplitude
    /// is finite and the norm is 1 within kAnalyticTol.
    StateVector(int n_qubits, Vector amplitudes);

    /// Scales `amplitudes` to unit norm first.
    static StateVector normalized(int n_qubits, Vector amplitudes);
    static StateVector basis(int n_qubits, std::size_t index);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    /// <this|other>
    Complex inner(const StateVector& other) const;

  private:
    int n_qubits_;
    Vector amplitudes_;
};

class Operator {
  public:
    explicit Operator(Matrix entries);

    static Operator identity(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const noexcept { return entries_; }
    Complex operator()(std::size_t row, std::size_t col) const {
        return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator adjoint() const { return Operator(entries_.adjoint()); }
    bool is_unitary(double tol = kComposedTol) const;
    bool is_hermitian(double tol = kAnalyticTol) const;

    friend Operator operator*(const Operator& a, const Operator& b);

  private:
    Matrix entries_;
};

StateVector apply(const Operator& op, const StateVector& state);

/// Largest entrywise modulus of a - b. Throws InvalidArgument on a shape
/// mismatch.
template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b);

struct ProjectiveOutcome {
    std::string label;
    Operator projector;
};

/// Complete set of orthogonal projectors with text labels.
class ProjectiveObservable {
  public:
    /// Validates Hermiticity, idempotence, mutual orthogonality and
    /// completeness, all within kComposedTol. Throws InvalidArgument.
    explicit ProjectiveObservable(std::vector<ProjectiveOutcome> outcomes);

    /// Rank-one projectors onto an orthonormal basis.
    static ProjectiveObservable from_basis(std::span<const std::string> labels,
                                           std::span<const StateVector> basis);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    const ProjectiveOutcome& operator[](std::size_t i) const { return outcomes_.at(i); }
    const std::vector<ProjectiveOutcome>& outcomes() const noexcept { return outcomes_; }

    /// Index of the outcome carrying `label`; throws InvalidArgument if absent.
    std::size_t index_of(const std::string& label) const;

  private:
    std::vector<ProjectiveOutcome> outcomes_;
    std::size_t dim_;
};

class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace (kAnalyticTol) and positivity (all
    /// eigenvalues >= -kComposedTol). Throws InvalidArgument.
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix pure(const StateVector& state);

    struct Component {
        double weight;
        StateVector state;
    };
    /// Sum of weight * |state><state|. Weights must sum to 1.
    static DensityMatrix mixture(std::span<const Component> components);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    int n_qubits() const noexcept { return n_qubits_; }
    const Matrix& entries() const noexcept { return entries_; }

  private:
    Matrix entries_;
    int n_qubits_;
};

Operator kron(const Operator& a, const Operator& b);
StateVector kron(const StateVector& a, const StateVector& b);

/// Embeds a single-qubit operator acting on `target` of an n-qubit register.
Operator embed(const Operator& single, int target, int n_qubits);

/// Eigenstate of sigma_axis with outcome `bit` (0 = up, 1 = down).
StateVector spin_state(Axis axis, int bit);

/// Pauli matrix sigma_axis (2x2).
Operator pauli(Axis axis);

/// (|up up> + |down down>)/sqrt(2) on (A, C).
StateVector bell_phi_plus();

/// The four eigenstates r1..r4 of Alice's observable R.
std::array<StateVector, 4> r_basis();

/// R as an observable with outcome labels "r1".."r4".
ProjectiveObservable r_observable();

/// sigma_axis on `target` of an n-qubit register; labels "0" (up) and "1".
ProjectiveObservable pauli_observable(Axis axis, int target, int n_qubits);

struct LabeledProbability {
    std::string label;
    double probability;
};

/// Born-rule distribution of `obs` on `state`. Throws InvalidArgument on a
/// dimension mismatch.
std::vector<LabeledProbability> born_distribution(const StateVector& state,
                                                  const ProjectiveObservable& obs);

/// Born-rule distribution of `obs` on a mixed state.
std::vector<LabeledProbability> born_distribution(const DensityMatrix& rho,
                                                  const ProjectiveObservable& obs);

struct Measurement {
    std::size_t outcome;
    std::string label;
    double probability;
    StateVector collapsed;
};

/// P_k|psi> / sqrt(p_k). Throws InvalidArgument when p_k < kAnalyticTol.
StateVector collapse(const StateVector& state, const ProjectiveObservable& obs,
                     std::size_t outcome);

/// Samples one outcome and collapses. Outcomes with probability below
/// kAnalyticTol are never returned; if all of them are below it the
/// observable is malformed for this state and MalformedObservable is thrown.
Measurement measure(const StateVector& state, const ProjectiveObservable& obs,
                    RandomStream& rng);

/// Reduced state on `keep` (any order; result follows ascending qubit order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

namespace detail {
[[noreturn]] void throw_shape_mismatch();
}  // namespace detail

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        detail::throw_shape_mismatch();
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ppqkd
