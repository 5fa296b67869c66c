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

#include "ppqkd/abl.hpp"

#include <cmath>
#include <complex>

#include "ppqkd/errors.hpp"

namespace ppqkd {

std::vector<LabeledProbability> abl_distribution(const ABLQuery& query) {
    const auto dim = query.observable.dim();
    if (query.pre.dim() != dim || query.post.dim() != dim) {
        throw InvalidArgument("pre, post and observable dimensions differ");
    }
    std::vector<LabeledProbability> out;
    out.reserve(query.observable.size());
    double denominator = 0.0;
    for (const auto& o : query.observable.outcomes()) {
        const Complex amp =
            query.pre.amplitudes().dot(o.projector.entries() * query.post.amplitudes());
        const double weight = std::norm(amp);
        denominator += weight;
        out.push_back({o.label, weight});
    }
    if (denominator <= kPostSelectionTol) {
        throw PostSelectionImpossible(
            "post-selected state is unreachable from the pre-selected state through any "
            "outcome");
    }
    for (auto& entry : out) {
        entry.probability /= denominator;
    }
    return out;
}

std::optional<std::string> certain_value(const ABLQuery& query) {
    for (const auto& entry : abl_distribution(query)) {
        if (std::abs(entry.probability - 1.0) <= kCertaintyTol) {
            return entry.label;
        }
    }
    return std::nullopt;
}

int RetrodictionRow::bit(Axis axis) const {
    switch (axis) {
        case Axis::X:
            return x_bit;
        case Axis::Y:
            return y_bit;
        case Axis::Z:
            return z_bit;
    }
    return -1;
}

std::array<RetrodictionRow, 4> retrodiction_table() {
    const auto pre = bell_phi_plus();
    const auto posts = r_basis();
    std::array<RetrodictionRow, 4> rows{};
    for (std::size_t k = 0; k < posts.size(); ++k) {
        const std::string label = "r" + std::to_string(k + 1);
        std::array<int, 3> bits{};
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            ABLQuery query{pre, posts[k], pauli_observable(axis, 1, 2)};
            auto value = certain_value(query);
            if (!value) {
                throw ProtocolError(std::string("no certain sigma_") + axis_name(axis) +
                                    " value for " + label);
            }
            bits[static_cast<std::size_t>(axis)] = std::stoi(*value);
        }
        rows[k] = {label, bits[0], bits[1], bits[2]};
    }
    return rows;
}

}  // namespace ppqkd
