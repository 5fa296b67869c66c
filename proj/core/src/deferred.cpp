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

#include "ppqkd/deferred.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ppqkd/abl.hpp"
#include "ppqkd/errors.hpp"
#include "spin_cache.hpp"

namespace ppqkd {

namespace {

/// Computational-basis CNOT on an n-qubit register (qubit 0 = MSB).
Operator cnot(int control, int target, int n) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t cmask = std::size_t{1} << (n - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n - 1 - target);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t j = (i & cmask) ? (i ^ tmask) : i;
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return Operator(std::move(m));
}

Operator hadamard() {
    const double s = std::numbers::sqrt2 / 2.0;
    Matrix h(2, 2);
    h << s, s, s, -s;
    return Operator(std::move(h));
}

Operator build_entangler() {
    Matrix up(2, 2);
    up << 1.0, 0.0, 0.0, 0.0;
    Matrix down(2, 2);
    down << 0.0, 0.0, 0.0, 1.0;
    const Operator on_cx = embed(Operator(up), kChoiceQubit, kDeferredQubits);
    const Operator on_cz = embed(Operator(down), kChoiceQubit, kDeferredQubits);
    const Operator h_c = embed(hadamard(), kChannelQubit, kDeferredQubits);
    const Operator record = cnot(kChannelQubit, kPointerQubit, kDeferredQubits);
    Operator u(on_cx.entries() * (h_c * record * h_c).entries() +
               on_cz.entries() * record.entries());
    if (!u.is_unitary(kComposedTol)) {
        throw Error("deferred entangling unitary is not unitary");
    }
    return u;
}

ProjectiveObservable relabel(const ProjectiveObservable& obs, const std::string& zero,
                             const std::string& one) {
    return ProjectiveObservable({{zero, obs[0].projector}, {one, obs[1].projector}});
}

void require_register(const StateVector& state) {
    if (state.n_qubits() != kDeferredQubits) {
        throw InvalidArgument("deferred register must have 4 qubits");
    }
}

struct Partial {
    double probability;
    StateVector state;
};

template <typename Fn>
void for_each_outcome(const Partial& in, const ProjectiveObservable& obs, Fn&& fn) {
    auto dist = born_distribution(in.state, obs);
    for (std::size_t k = 0; k < dist.size(); ++k) {
        const double p = in.probability * dist[k].probability;
        if (p < kBranchPruneTol || dist[k].probability < kAnalyticTol) {
            continue;
        }
        fn(static_cast<int>(k), Partial{p, collapse(in.state, obs, k)});
    }
}

}  // namespace

JointState::JointState(StateVector state) : state_(std::move(state)) { require_register(state_); }

const ChoicePointerObservables& choice_pointer_observables() {
    static const ChoicePointerObservables obs{
        relabel(pauli_observable(Axis::Z, kChoiceQubit, kDeferredQubits), "c_x", "c_z"),
        relabel(pauli_observable(Axis::Z, kPointerQubit, kDeferredQubits), "p_up", "p_down"),
    };
    return obs;
}

JointState prepare_deferred() {
    const double s = std::numbers::sqrt2 / 2.0;
    Vector fair(2);
    fair << s, s;
    return JointState(
        kron(kron(bell_phi_plus(), StateVector(1, fair)), StateVector::basis(1, 0)));
}

const Operator& bob_entangle_unitary() {
    static const Operator u = build_entangler();
    return u;
}

JointState bob_entangle(const JointState& state) {
    return JointState(apply(bob_entangle_unitary(), state.vector()));
}

StateVector bob_entangle(const StateVector& state) {
    require_register(state);
    return apply(bob_entangle_unitary(), state);
}

// ---------------------------------------------------------------------------
// DeferredRound

DeferredRound::DeferredRound(const EveStrategy& strategy, RandomStream& rng, std::uint64_t index)
    : rng_(rng), state_(prepare_deferred()) {
    record_.index = index;
    StateVector s = state_.vector();
    std::optional<EveTrace> trace;
    if (strategy.attacks()) {
        trace = EveTrace{draw_eve_axis(strategy, rng_), std::nullopt, std::nullopt};
    }
    if (strategy.on_way_to_bob()) {
        trace->to_bob_outcome = intercept(s, trace->axis, kChannelQubit, rng_);
    }
    s = bob_entangle(s);
    if (strategy.on_way_to_alice()) {
        trace->to_alice_outcome = intercept(s, trace->axis, kChannelQubit, rng_);
    }
    state_ = JointState(std::move(s));
    record_.eve_trace = trace;
}

void DeferredRound::measure_alice() {
    if (alice_done_) {
        throw ProtocolError("Alice already measured R");
    }
    auto m = measure(state_.vector(), detail::r_measurement(kDeferredQubits), rng_);
    record_.alice_r = r_from_index(m.outcome);
    state_ = JointState(std::move(m.collapsed));
    alice_done_ = true;
}

void DeferredRound::measure_bob() {
    if (record_.bob_basis) {
        throw ProtocolError("Bob already measured his ancillas");
    }
    const auto& obs = choice_pointer_observables();
    auto choice = measure(state_.vector(), obs.choice, rng_);
    auto pointer = measure(choice.collapsed, obs.pointer, rng_);
    record_.bob_basis = choice.outcome == 0 ? BobBasis::x() : BobBasis::z();
    record_.bob_bit = static_cast<int>(pointer.outcome);
    state_ = JointState(std::move(pointer.collapsed));
}

RoundRecord run_deferred_round(RandomStream& rng, std::uint64_t index,
                               const EveStrategy& strategy, DeferredOrder order) {
    DeferredRound round(strategy, rng, index);
    if (order == DeferredOrder::AliceFirst) {
        round.measure_alice();
        round.measure_bob();
    } else {
        round.measure_bob();
        round.measure_alice();
    }
    return round.record();
}

RunReport run_deferred_protocol(std::uint64_t n, std::uint64_t seed, const EveStrategy& strategy,
                                unsigned threads) {
    auto records = simulate_rounds(
        n, seed,
        [&strategy](RandomStream& rng, std::uint64_t i) {
            return run_deferred_round(rng, i, strategy);
        },
        threads);
    return assemble_report(records, seed);
}

// ---------------------------------------------------------------------------
// Exact analysis

std::vector<Branch> enumerate_deferred(const EveStrategy& strategy, DeferredOrder order) {
    const auto& r_obs = detail::r_measurement(kDeferredQubits);
    const auto& cp = choice_pointer_observables();

    std::vector<std::pair<std::optional<Axis>, double>> eve_axes;
    switch (strategy.kind) {
        case EveKind::NoAttack:
            eve_axes.emplace_back(std::nullopt, 1.0);
            break;
        case EveKind::FixedAxis:
            eve_axes.emplace_back(strategy.axis, 1.0);
            break;
        case EveKind::RandomXZ:
            eve_axes.emplace_back(Axis::X, 0.5);
            eve_axes.emplace_back(Axis::Z, 0.5);
            break;
    }

    std::vector<Branch> branches;
    for (const auto& [eve_axis, eve_weight] : eve_axes) {
        const auto& eve_obs =
            detail::spin_observable(eve_axis.value_or(Axis::Z), kChannelQubit, kDeferredQubits);
        auto maybe_intercept = [&](const Partial& in, bool active, auto&& fn) {
            if (!active) {
                fn(std::optional<int>{}, in);
                return;
            }
            for_each_outcome(in, eve_obs,
                             [&](int bit, Partial next) { fn(std::optional<int>{bit}, next); });
        };

        const Partial start{eve_weight, prepare_deferred().vector()};
        maybe_intercept(start, strategy.on_way_to_bob(), [&](std::optional<int> e1, Partial a) {
            const Partial entangled{a.probability, bob_entangle(a.state)};
            maybe_intercept(entangled, strategy.on_way_to_alice(), [&](std::optional<int> e2,
                                                                       Partial b) {
                auto emit = [&](double p, int choice, int bit, int r) {
                    branches.push_back({p, choice == 0 ? BobBasis::x() : BobBasis::z(), bit,
                                        r_from_index(static_cast<std::size_t>(r)), eve_axis, e1,
                                        e2});
                };
                if (order == DeferredOrder::AliceFirst) {
                    for_each_outcome(b, r_obs, [&](int r, Partial c) {
                        for_each_outcome(c, cp.choice, [&](int ch, Partial d) {
                            for_each_outcome(d, cp.pointer, [&](int bit, Partial f) {
                                emit(f.probability, ch, bit, r);
                            });
                        });
                    });
                } else {
                    for_each_outcome(b, cp.choice, [&](int ch, Partial c) {
                        for_each_outcome(c, cp.pointer, [&](int bit, Partial d) {
                            for_each_outcome(d, r_obs,
                                             [&](int r, Partial f) { emit(f.probability, ch, bit, r); });
                        });
                    });
                }
            });
        });
    }
    return branches;
}

double JointDistribution::total() const {
    double t = 0.0;
    for (double c : cells) {
        t += c;
    }
    return t;
}

JointDistribution joint_distribution(std::span<const Branch> branches) {
    JointDistribution out;
    for (const auto& b : branches) {
        out.cells[JointDistribution::slot(b.bob_basis, b.bob_bit, b.alice_r)] += b.probability;
    }
    return out;
}

double total_variation(const JointDistribution& a, const JointDistribution& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        sum += std::abs(a.cells[i] - b.cells[i]);
    }
    return 0.5 * sum;
}

namespace {

double reduced_state_deviation() {
    const std::array<int, 2> keep{kAncillaQubit, kChannelQubit};
    const auto deferred =
        partial_trace(DensityMatrix::pure(bob_entangle(prepare_deferred()).vector()), keep);

    std::vector<DensityMatrix::Component> after_bob;
    const auto phi = bell_phi_plus();
    for (Axis axis : {Axis::X, Axis::Z}) {
        const auto obs = pauli_observable(axis, kChannelQubit, 2);
        auto dist = born_distribution(phi, obs);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            after_bob.push_back({0.5 * dist[k].probability, collapse(phi, obs, k)});
        }
    }
    const auto immediate = DensityMatrix::mixture(after_bob);
    return max_abs_diff(deferred.entries(), immediate.entries());
}

double table1_deviation(const JointDistribution& joint) {
    const auto rows = retrodiction_table();
    double worst = 0.0;
    for (const BobBasis basis : {BobBasis::x(), BobBasis::z()}) {
        for (std::size_t r = 0; r < 4; ++r) {
            const RLabel label = r_from_index(r);
            const double p0 = joint.at(basis, 0, label);
            const double p1 = joint.at(basis, 1, label);
            const double cond = p0 + p1;
            if (cond <= 0.0) {
                return 1.0;
            }
            const int expected = rows[r].bit(basis.axis());
            const double hit = (expected == 0 ? p0 : p1) / cond;
            worst = std::max(worst, std::abs(hit - 1.0));
        }
    }
    return worst;
}

}  // namespace

EquivalenceReport equivalence_report() {
    EquivalenceReport report{};
    report.immediate = joint_distribution(enumerate_joint(EveStrategy::none()));
    report.deferred = joint_distribution(enumerate_deferred(EveStrategy::none(), DeferredOrder::AliceFirst));
    report.total_variation = total_variation(report.immediate, report.deferred);
    report.order_total_variation = total_variation(
        report.deferred, joint_distribution(enumerate_deferred(EveStrategy::none(), DeferredOrder::BobFirst)));
    report.reduced_state_deviation = reduced_state_deviation();
    report.table1_max_deviation = table1_deviation(report.deferred);
    return report;
}

}  // namespace ppqkd
