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

#include "ppqkd/protocol.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "ppqkd/abl.hpp"
#include "ppqkd/errors.hpp"
#include "spin_cache.hpp"

namespace ppqkd {

namespace {

const std::array<RetrodictionRow, 4>& table() {
    static const auto rows = retrodiction_table();
    return rows;
}

}  // namespace

std::string_view r_name(RLabel r) {
    static constexpr std::array<std::string_view, 4> names{"r1", "r2", "r3", "r4"};
    return names[static_cast<std::size_t>(r)];
}

RLabel r_from_index(std::size_t index) {
    if (index > 3) {
        throw InvalidArgument("R outcome index out of range");
    }
    return static_cast<RLabel>(index);
}

BobBasis::BobBasis(Axis axis) : axis_(axis) {
    if (axis == Axis::Y) {
        throw InvalidArgument("Bob measures sigma_x or sigma_z only");
    }
}

std::string_view pass_model_name(PassModel passes) {
    switch (passes) {
        case PassModel::ToBobOnly:
            return "to-bob";
        case PassModel::ToAliceOnly:
            return "to-alice";
        case PassModel::BothPasses:
            return "both";
    }
    return "?";
}

std::string EveStrategy::name() const {
    switch (kind) {
        case EveKind::NoAttack:
            return "none";
        case EveKind::RandomXZ:
            return "random-xz";
        case EveKind::FixedAxis:
            return std::string("fixed-") +
                   static_cast<char>(axis_name(axis) - 'A' + 'a');
    }
    return "?";
}

Axis draw_eve_axis(const EveStrategy& strategy, RandomStream& rng) {
    if (strategy.kind == EveKind::RandomXZ) {
        return rng.coin() ? Axis::Z : Axis::X;
    }
    return strategy.axis;
}

int intercept(StateVector& state, Axis axis, int channel, RandomStream& rng) {
    auto m = measure(state, detail::spin_observable(axis, channel, state.n_qubits()), rng);
    state = std::move(m.collapsed);
    return static_cast<int>(m.outcome);
}

RoundRecord run_round(const EveStrategy& strategy, RandomStream& rng, std::uint64_t index) {
    RoundRecord record;
    record.index = index;
    StateVector state = bell_phi_plus();

    std::optional<EveTrace> trace;
    if (strategy.attacks()) {
        trace = EveTrace{draw_eve_axis(strategy, rng), std::nullopt, std::nullopt};
    }
    if (strategy.on_way_to_bob()) {
        trace->to_bob_outcome = intercept(state, trace->axis, kChannelQubit, rng);
    }

    const BobBasis basis = rng.coin() ? BobBasis::z() : BobBasis::x();
    record.bob_basis = basis;
    record.bob_bit = intercept(state, basis.axis(), kChannelQubit, rng);

    if (strategy.on_way_to_alice()) {
        trace->to_alice_outcome = intercept(state, trace->axis, kChannelQubit, rng);
    }

    record.alice_r = r_from_index(measure(state, detail::r_measurement(), rng).outcome);
    record.eve_trace = trace;
    return record;
}

SiftResult sift(std::span<const RoundRecord> records) {
    SiftResult out;
    for (const auto& r : records) {
        (in_s23(r.alice_r) ? out.s23 : out.s14).push_back(r.index);
    }
    return out;
}

std::optional<Retrodiction> retrodict(const RoundRecord& record) {
    if (!in_s23(record.alice_r)) {
        return std::nullopt;
    }
    const auto& row = table()[static_cast<std::size_t>(record.alice_r)];
    return Retrodiction{record.index, row.x_bit, row.z_bit};
}

std::vector<DetectionEvent> check(std::span<const Retrodiction> retrodictions,
                                  std::span<const RoundRecord> records) {
    std::unordered_map<std::uint64_t, const RoundRecord*> by_index;
    by_index.reserve(records.size());
    for (const auto& r : records) {
        by_index.emplace(r.index, &r);
    }
    std::vector<DetectionEvent> events;
    for (const auto& claim : retrodictions) {
        auto it = by_index.find(claim.index);
        if (it == by_index.end()) {
            throw ProtocolError("retrodiction for index " + std::to_string(claim.index) +
                                " has no matching record");
        }
        const RoundRecord& rec = *it->second;
        if (!rec.bob_basis || !rec.bob_bit) {
            throw ProtocolError("record " + std::to_string(claim.index) +
                                " holds no Bob measurement");
        }
        if (claim.bit_for(*rec.bob_basis) != *rec.bob_bit) {
            events.push_back({claim.index});
        }
    }
    return events;
}

KeyPair extract_keys(std::span<const RoundRecord> s14_records) {
    KeyPair keys;
    keys.alice.reserve(s14_records.size());
    keys.bob.reserve(s14_records.size());
    for (const auto& r : s14_records) {
        if (in_s23(r.alice_r)) {
            throw ProtocolError("record " + std::to_string(r.index) + " is not in S14");
        }
        if (!r.bob_bit) {
            throw ProtocolError("record " + std::to_string(r.index) + " holds no Bob bit");
        }
        keys.alice.push_back(r.alice_r == RLabel::R1 ? 0 : 1);
        keys.bob.push_back(static_cast<std::uint8_t>(*r.bob_bit));
    }
    return keys;
}

std::vector<RoundRecord> simulate_rounds(std::uint64_t n, std::uint64_t seed,
                                         const RoundFn& round, unsigned threads) {
    std::vector<RoundRecord> records(n);
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng(seed, i);
            records[i] = round(rng, i);
        }
    };
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n, 1));
    if (workers <= 1) {
        run_range(0, n);
        return records;
    }
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back(run_range, begin, end);
        }
    }
    pool.clear();  // joins
    return records;
}

RunReport assemble_report(std::span<const RoundRecord> records, std::uint64_t seed) {
    RunReport report;
    report.n_rounds = records.size();
    report.seed = seed;

    auto parts = sift(records);
    report.s14_indices = std::move(parts.s14);
    report.s23_indices = std::move(parts.s23);

    std::vector<Retrodiction> announced;
    std::vector<RoundRecord> s14_records;
    for (const auto& r : records) {
        ++report.r_counts[static_cast<std::size_t>(r.alice_r)];
        if (auto claim = retrodict(r)) {
            announced.push_back(*claim);
        } else {
            s14_records.push_back(r);
        }
    }

    for (const auto& e : check(announced, records)) {
        report.detection_indices.push_back(e.index);
    }
    report.detection_count = report.detection_indices.size();
    report.s23_empty = report.s23_indices.empty();
    report.detection_rate_given_s23 =
        report.s23_empty ? 0.0
                         : static_cast<double>(report.detection_count) /
                               static_cast<double>(report.s23_indices.size());

    auto keys = extract_keys(s14_records);
    report.alice_key = std::move(keys.alice);
    report.bob_key = std::move(keys.bob);
    return report;
}

RunReport run_protocol(std::uint64_t n, const EveStrategy& strategy, std::uint64_t seed,
                       unsigned threads) {
    auto records = simulate_rounds(
        n, seed, [&strategy](RandomStream& rng, std::uint64_t i) { return run_round(strategy, rng, i); },
        threads);
    return assemble_report(records, seed);
}

}  // namespace ppqkd
