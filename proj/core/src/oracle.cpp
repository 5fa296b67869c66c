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

#include "ppqkd/oracle.hpp"

#include "ppqkd/errors.hpp"
#include "spin_cache.hpp"

namespace ppqkd {

namespace {

struct Partial {
    double probability;
    StateVector state;
};

/// Expands one measurement into its non-negligible outcomes.
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

template <typename Fn>
void maybe_intercept(const Partial& in, bool active, Axis axis, Fn&& fn) {
    if (!active) {
        fn(std::optional<int>{}, in);
        return;
    }
    for_each_outcome(in, detail::spin_observable(axis, kChannelQubit, 2),
                     [&](int bit, Partial next) { fn(std::optional<int>{bit}, next); });
}

}  // namespace

std::vector<Branch> enumerate_joint(const EveStrategy& strategy) {
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

    const auto& r_obs = detail::r_measurement();
    std::vector<Branch> branches;
    for (const auto& [eve_axis, eve_weight] : eve_axes) {
        const Axis axis = eve_axis.value_or(Axis::Z);
        Partial start{eve_weight, bell_phi_plus()};
        maybe_intercept(start, strategy.on_way_to_bob(), axis, [&](std::optional<int> e1, Partial a) {
            for (const BobBasis basis : {BobBasis::x(), BobBasis::z()}) {
                Partial chosen{a.probability * 0.5, a.state};
                for_each_outcome(
                    chosen, detail::spin_observable(basis.axis(), kChannelQubit, 2),
                    [&](int bob_bit, Partial b) {
                        maybe_intercept(
                            b, strategy.on_way_to_alice(), axis,
                            [&](std::optional<int> e2, Partial c) {
                                for_each_outcome(c, r_obs, [&](int r, Partial d) {
                                    branches.push_back({d.probability, basis, bob_bit,
                                                        r_from_index(static_cast<std::size_t>(r)),
                                                        eve_axis, e1, e2});
                                });
                            });
                    });
            }
        });
    }
    return branches;
}

bool is_detection(RLabel alice_r, const BobBasis& bob_basis, int bob_bit) {
    RoundRecord probe;
    probe.alice_r = alice_r;
    auto claim = retrodict(probe);
    return claim && claim->bit_for(bob_basis) != bob_bit;
}

double total_probability(std::span<const Branch> branches) {
    double total = 0.0;
    for (const auto& b : branches) {
        total += b.probability;
    }
    return total;
}

double exact_s23_fraction(std::span<const Branch> branches) {
    double s23 = 0.0;
    for (const auto& b : branches) {
        if (in_s23(b.alice_r)) {
            s23 += b.probability;
        }
    }
    return s23;
}

double exact_s23_fraction(const EveStrategy& strategy) {
    return exact_s23_fraction(enumerate_joint(strategy));
}

double exact_detection_given_s23(std::span<const Branch> branches) {
    double s23 = 0.0;
    double detected = 0.0;
    for (const auto& b : branches) {
        if (!in_s23(b.alice_r)) {
            continue;
        }
        s23 += b.probability;
        if (is_detection(b.alice_r, b.bob_basis, b.bob_bit)) {
            detected += b.probability;
        }
    }
    if (s23 <= 0.0) {
        throw ZeroProbabilityCondition("P(S23) = 0");
    }
    return detected / s23;
}

double exact_detection_given_s23(const EveStrategy& strategy) {
    return exact_detection_given_s23(enumerate_joint(strategy));
}

double exact_key_agreement(std::span<const Branch> branches) {
    double s14 = 0.0;
    double agree = 0.0;
    for (const auto& b : branches) {
        if (in_s23(b.alice_r)) {
            continue;
        }
        s14 += b.probability;
        const int alice_bit = b.alice_r == RLabel::R1 ? 0 : 1;
        if (alice_bit == b.bob_bit) {
            agree += b.probability;
        }
    }
    if (s14 <= 0.0) {
        throw ZeroProbabilityCondition("P(S14) = 0");
    }
    return agree / s14;
}

double exact_key_agreement(const EveStrategy& strategy) {
    return exact_key_agreement(enumerate_joint(strategy));
}

std::array<double, 4> exact_r_distribution(std::span<const Branch> branches) {
    std::array<double, 4> out{};
    for (const auto& b : branches) {
        out[static_cast<std::size_t>(b.alice_r)] += b.probability;
    }
    return out;
}

ExactSummary exact_summary(const EveStrategy& strategy) {
    const auto branches = enumerate_joint(strategy);
    return {strategy,
            exact_detection_given_s23(branches),
            exact_s23_fraction(branches),
            exact_r_distribution(branches),
            exact_key_agreement(branches),
            total_probability(branches),
            branches.size()};
}

}  // namespace ppqkd
