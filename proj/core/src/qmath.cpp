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

#include "ppqkd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ppqkd/errors.hpp"

namespace ppqkd {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

void check_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw InvalidArgument("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                              std::to_string(kMaxQubits) + "]");
    }
}

}  // namespace

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 'X';
        case Axis::Y:
            return 'Y';
        case Axis::Z:
            return 'Z';
    }
    return '?';
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    check_qubit_count(n_qubits);
    if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << n_qubits)) {
        throw InvalidArgument("state vector length " + std::to_string(amplitudes_.size()) +
                              " does not match 2^" + std::to_string(n_qubits));
    }
    if (!amplitudes_.allFinite()) {
        throw InvalidArgument("state vector has a non-finite amplitude");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kAnalyticTol) {
        throw InvalidArgument("state vector is not normalized");
    }
}

StateVector StateVector::normalized(int n_qubits, Vector amplitudes) {
    double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    return StateVector(n_qubits, amplitudes / norm);
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    check_qubit_count(n_qubits);
    std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) {
        throw InvalidArgument("basis index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(n_qubits, std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
    if (dim() != other.dim()) {
        throw InvalidArgument("inner product of states with different dimensions");
    }
    return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw InvalidArgument("operator must be a non-empty square matrix");
    }
    if (!entries_.allFinite()) {
        throw InvalidArgument("operator has a non-finite entry");
    }
}

Operator Operator::identity(std::size_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Identity(d, d));
}

bool Operator::is_unitary(double tol) const {
    auto d = entries_.rows();
    return max_abs_diff(entries_.adjoint() * entries_, Matrix::Identity(d, d)) <= tol;
}

bool Operator::is_hermitian(double tol) const {
    return max_abs_diff(entries_, entries_.adjoint()) <= tol;
}

Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument("operator product dimension mismatch");
    }
    return Operator(a.entries_ * b.entries_);
}

StateVector apply(const Operator& op, const StateVector& state) {
    if (op.dim() != state.dim()) {
        throw InvalidArgument("operator/state dimension mismatch");
    }
    return StateVector(state.n_qubits(), op.entries() * state.amplitudes());
}

namespace detail {
void throw_shape_mismatch() { throw InvalidArgument("matrix shape mismatch"); }
}  // namespace detail

// ---------------------------------------------------------------------------
// ProjectiveObservable

ProjectiveObservable::ProjectiveObservable(std::vector<ProjectiveOutcome> outcomes)
    : outcomes_(std::move(outcomes)), dim_(0) {
    if (outcomes_.empty()) {
        throw InvalidArgument("observable needs at least one outcome");
    }
    dim_ = outcomes_.front().projector.dim();
    auto d = static_cast<Eigen::Index>(dim_);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        const Matrix& p = outcomes_[i].projector.entries();
        if (outcomes_[i].projector.dim() != dim_) {
            throw InvalidArgument("projector dimensions differ");
        }
        if (!outcomes_[i].projector.is_hermitian(kComposedTol)) {
            throw InvalidArgument("projector '" + outcomes_[i].label + "' is not Hermitian");
        }
        if (max_abs_diff(p * p, p) > kComposedTol) {
            throw InvalidArgument("projector '" + outcomes_[i].label + "' is not idempotent");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (outcomes_[j].label == outcomes_[i].label) {
                throw InvalidArgument("duplicate outcome label '" + outcomes_[i].label + "'");
            }
            if ((p * outcomes_[j].projector.entries()).cwiseAbs().maxCoeff() > kComposedTol) {
                throw InvalidArgument("projectors '" + outcomes_[j].label + "' and '" +
                                      outcomes_[i].label + "' are not orthogonal");
            }
        }
        sum += p;
    }
    if (max_abs_diff(sum, Matrix::Identity(d, d)) > kComposedTol) {
        throw InvalidArgument("projectors do not sum to the identity");
    }
}

ProjectiveObservable ProjectiveObservable::from_basis(std::span<const std::string> labels,
                                                      std::span<const StateVector> basis) {
    if (labels.size() != basis.size()) {
        throw InvalidArgument("label count does not match basis size");
    }
    std::vector<ProjectiveOutcome> outcomes;
    outcomes.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Vector& v = basis[i].amplitudes();
        outcomes.push_back({labels[i], Operator(v * v.adjoint())});
    }
    return ProjectiveObservable(std::move(outcomes));
}

std::size_t ProjectiveObservable::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i].label == label) {
            return i;
        }
    }
    throw InvalidArgument("observable has no outcome '" + label + "'");
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)), n_qubits_(0) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw InvalidArgument("density matrix must be a non-empty square matrix");
    }
    if (!is_power_of_two(dim())) {
        throw InvalidArgument("density matrix dimension is not a power of two");
    }
    n_qubits_ = log2_exact(dim());
    if (!entries_.allFinite()) {
        throw InvalidArgument("density matrix has a non-finite entry");
    }
    if (max_abs_diff(entries_, entries_.adjoint()) > kAnalyticTol) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - Complex(1.0)) > kAnalyticTol) {
        throw InvalidArgument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kComposedTol) {
        throw InvalidArgument("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
    const Vector& v = state.amplitudes();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::mixture(std::span<const Component> components) {
    if (components.empty()) {
        throw InvalidArgument("empty mixture");
    }
    auto d = static_cast<Eigen::Index>(components.front().state.dim());
    Matrix rho = Matrix::Zero(d, d);
    for (const auto& c : components) {
        if (c.weight < 0.0) {
            throw InvalidArgument("negative mixture weight");
        }
        if (static_cast<Eigen::Index>(c.state.dim()) != d) {
            throw InvalidArgument("mixture components have different dimensions");
        }
        const Vector& v = c.state.amplitudes();
        rho += c.weight * (v * v.adjoint());
    }
    return DensityMatrix(std::move(rho));
}

// ---------------------------------------------------------------------------
// Tensor products and single-qubit building blocks

Operator kron(const Operator& a, const Operator& b) {
    const Matrix& x = a.entries();
    const Matrix& y = b.entries();
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return Operator(std::move(out));
}

StateVector kron(const StateVector& a, const StateVector& b) {
    const Vector& x = a.amplitudes();
    const Vector& y = b.amplitudes();
    Vector out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.segment(i * y.size(), y.size()) = x(i) * y;
    }
    return StateVector(a.n_qubits() + b.n_qubits(), std::move(out));
}

Operator embed(const Operator& single, int target, int n_qubits) {
    check_qubit_count(n_qubits);
    if (single.dim() != 2) {
        throw InvalidArgument("embed expects a single-qubit operator");
    }
    if (target < 0 || target >= n_qubits) {
        throw InvalidArgument("target qubit " + std::to_string(target) + " out of range");
    }
    Operator out = target == 0 ? single : Operator::identity(2);
    for (int q = 1; q < n_qubits; ++q) {
        out = kron(out, q == target ? single : Operator::identity(2));
    }
    return out;
}

StateVector spin_state(Axis axis, int bit) {
    if (bit != 0 && bit != 1) {
        throw InvalidArgument("spin outcome must be 0 or 1");
    }
    const double s = std::numbers::sqrt2 / 2.0;
    const double sign = bit == 0 ? 1.0 : -1.0;
    Vector v(2);
    switch (axis) {
        case Axis::Z:
            v << Complex(bit == 0 ? 1.0 : 0.0), Complex(bit == 0 ? 0.0 : 1.0);
            break;
        case Axis::X:
            v << Complex(s), Complex(sign * s);
            break;
        case Axis::Y:
            v << Complex(s), Complex(0.0, sign * s);
            break;
    }
    return StateVector(1, std::move(v));
}

Operator pauli(Axis axis) {
    Matrix m(2, 2);
    switch (axis) {
        case Axis::X:
            m << 0.0, 1.0, 1.0, 0.0;
            break;
        case Axis::Y:
            m << Complex(0.0), Complex(0.0, -1.0), Complex(0.0, 1.0), Complex(0.0);
            break;
        case Axis::Z:
            m << 1.0, 0.0, 0.0, -1.0;
            break;
    }
    return Operator(std::move(m));
}

StateVector bell_phi_plus() {
    const double s = std::numbers::sqrt2 / 2.0;
    Vector v(4);
    v << s, 0.0, 0.0, s;
    return StateVector(2, std::move(v));
}

std::array<StateVector, 4> r_basis() {
    using std::numbers::pi;
    const double s = std::numbers::sqrt2 / 2.0;
    const Complex plus = std::polar(0.5, pi / 4.0);    // (1/2) e^{+i pi/4}
    const Complex minus = std::polar(0.5, -pi / 4.0);  // (1/2) e^{-i pi/4}
    // Index order |up up>, |up down>, |down up>, |down down>.
    auto make = [](Complex a, Complex b, Complex c, Complex d) {
        Vector v(4);
        v << a, b, c, d;
        return StateVector(2, std::move(v));
    };
    return {
        make(s, plus, minus, 0.0),
        make(s, -plus, -minus, 0.0),
        make(0.0, minus, plus, s),
        make(0.0, -minus, -plus, s),
    };
}

ProjectiveObservable r_observable() {
    static const std::array<std::string, 4> labels{"r1", "r2", "r3", "r4"};
    auto basis = r_basis();
    return ProjectiveObservable::from_basis(labels, basis);
}

ProjectiveObservable pauli_observable(Axis axis, int target, int n_qubits) {
    check_qubit_count(n_qubits);
    if (target < 0 || target >= n_qubits) {
        throw InvalidArgument("target qubit " + std::to_string(target) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    }
    std::vector<ProjectiveOutcome> outcomes;
    for (int bit : {0, 1}) {
        const Vector v = spin_state(axis, bit).amplitudes();
        outcomes.push_back(
            {std::to_string(bit), embed(Operator(v * v.adjoint()), target, n_qubits)});
    }
    return ProjectiveObservable(std::move(outcomes));
}

// ---------------------------------------------------------------------------
// Measurement

namespace {

void check_dims(std::size_t state_dim, const ProjectiveObservable& obs) {
    if (state_dim != obs.dim()) {
        throw InvalidArgument("state dimension " + std::to_string(state_dim) +
                              " does not match observable dimension " +
                              std::to_string(obs.dim()));
    }
}

double outcome_probability(const StateVector& state, const Operator& projector) {
    const Vector& v = state.amplitudes();
    return std::max(0.0, v.dot(projector.entries() * v).real());
}

}  // namespace

std::vector<LabeledProbability> born_distribution(const StateVector& state,
                                                  const ProjectiveObservable& obs) {
    check_dims(state.dim(), obs);
    std::vector<LabeledProbability> out;
    out.reserve(obs.size());
    for (const auto& o : obs.outcomes()) {
        out.push_back({o.label, outcome_probability(state, o.projector)});
    }
    return out;
}

std::vector<LabeledProbability> born_distribution(const DensityMatrix& rho,
                                                  const ProjectiveObservable& obs) {
    check_dims(rho.dim(), obs);
    std::vector<LabeledProbability> out;
    out.reserve(obs.size());
    for (const auto& o : obs.outcomes()) {
        double p = (o.projector.entries() * rho.entries()).trace().real();
        out.push_back({o.label, std::max(0.0, p)});
    }
    return out;
}

StateVector collapse(const StateVector& state, const ProjectiveObservable& obs,
                     std::size_t outcome) {
    check_dims(state.dim(), obs);
    const Operator& projector = obs[outcome].projector;
    Vector projected = projector.entries() * state.amplitudes();
    double p = projected.squaredNorm();
    if (p < kAnalyticTol) {
        throw InvalidArgument("cannot collapse onto zero-probability outcome '" +
                              obs[outcome].label + "'");
    }
    return StateVector(state.n_qubits(), projected / std::sqrt(p));
}

Measurement measure(const StateVector& state, const ProjectiveObservable& obs,
                    RandomStream& rng) {
    auto dist = born_distribution(state, obs);
    double total = 0.0;
    std::size_t last_allowed = obs.size();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i].probability >= kAnalyticTol) {
            total += dist[i].probability;
            last_allowed = i;
        }
    }
    if (last_allowed == obs.size()) {
        throw MalformedObservable("every outcome has probability below 1e-12");
    }
    const double u = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t chosen = last_allowed;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i].probability < kAnalyticTol) {
            continue;
        }
        cumulative += dist[i].probability;
        if (u < cumulative) {
            chosen = i;
            break;
        }
    }
    return {chosen, dist[chosen].label, dist[chosen].probability, collapse(state, obs, chosen)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) {
        throw InvalidArgument("partial trace must keep at least one qubit");
    }
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw InvalidArgument("duplicate qubit index in partial trace");
    }
    if (kept.front() < 0 || kept.back() >= n) {
        throw InvalidArgument("qubit index out of range in partial trace");
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) {
            traced.push_back(q);
        }
    }

    // Scatters the bits of `sub` onto `qubits` of an n-qubit index (qubit 0 is the MSB).
    auto compose = [n](const std::vector<int>& qubits, std::size_t sub) {
        std::size_t index = 0;
        const int m = static_cast<int>(qubits.size());
        for (int i = 0; i < m; ++i) {
            if ((sub >> (m - 1 - i)) & 1U) {
                index |= std::size_t{1} << (n - 1 - qubits[static_cast<std::size_t>(i)]);
            }
        }
        return index;
    };

    const std::size_t kept_dim = std::size_t{1} << kept.size();
    const std::size_t traced_dim = std::size_t{1} << traced.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kept_dim),
                              static_cast<Eigen::Index>(kept_dim));
    for (std::size_t i = 0; i < kept_dim; ++i) {
        const std::size_t row_base = compose(kept, i);
        for (std::size_t j = 0; j < kept_dim; ++j) {
            const std::size_t col_base = compose(kept, j);
            Complex acc = 0.0;
            for (std::size_t t = 0; t < traced_dim; ++t) {
                const std::size_t offset = compose(traced, t);
                acc += rho.entries()(static_cast<Eigen::Index>(row_base | offset),
                                     static_cast<Eigen::Index>(col_base | offset));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

}  // namespace ppqkd
