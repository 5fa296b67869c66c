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

// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "ppqkd/abl.hpp"
#include "ppqkd/circuit.hpp"
#include "ppqkd/deferred.hpp"
#include "ppqkd/oracle.hpp"
#include "ppqkd/protocol.hpp"
#include "support/independent.hpp"

using namespace ppqkd;

namespace {

// Pinned tolerances.
constexpr double kCertain = 1e-10;
constexpr double kAnalytic = 1e-12;
constexpr double kProperty = 1e-10;
constexpr double kEquivalence = 1e-10;
constexpr double kClaimTol = 1e-12;
constexpr double kSigmas = 4.0;
constexpr double kRuntimeLimitSeconds = 10.0;
constexpr std::uint64_t kRounds = 100000;
constexpr std::uint64_t kSeed = 7;
constexpr double kPublishedDetection = 0.375;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double band(double p, double n) { return kSigmas * std::sqrt(p * (1.0 - p) / n); }

void table_regeneration() {
    const auto r = r_basis();
    int matched = 0;
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            ABLQuery q{bell_phi_plus(), r[k], pauli_observable(a, kChannelQubit, 2)};
            const auto dist = abl_distribution(q);
            const ref::Ax ra = a == Axis::X ? ref::Ax::X : a == Axis::Y ? ref::Ax::Y : ref::Ax::Z;
            const int want = ref::table_bit(k, ra);
            const auto value = certain_value(q);
            worst = std::max(worst, std::abs(dist[static_cast<std::size_t>(want)].probability - 1.0));
            if (value && *value == std::to_string(want)) ++matched;
        }
    }
    report(1, matched == 12 && worst < kCertain,
           std::to_string(matched) + "/12 cells match, max |p-1| = " + fmt("%.3g", worst));
}

void overlaps() {
    const auto r = r_basis();
    const auto phi = bell_phi_plus();
    double overlap_dev = 0.0;
    double ortho_dev = 0.0;
    for (int j = 0; j < 4; ++j) {
        overlap_dev = std::max(overlap_dev, std::abs(r[j].inner(phi) - 0.5));
        for (int k = 0; k < 4; ++k) {
            ortho_dev = std::max(ortho_dev, std::abs(r[j].inner(r[k]) - Complex(j == k ? 1.0 : 0.0)));
        }
    }
    report(2, overlap_dev < kAnalytic && ortho_dev < kAnalytic,
           "max |<r_k|phi+> - 1/2| = " + fmt("%.3g", overlap_dev) +
               ", orthonormality deviation = " + fmt("%.3g", ortho_dev));
}

void basis_rewrites() {
    const Vector phi = bell_phi_plus().amplitudes();
    const double s = 1.0 / std::sqrt(2.0);
    auto pair = [](Axis a, int b0, int b1) -> Vector {
        return kron(spin_state(a, b0), spin_state(a, b1)).amplitudes();
    };
    const double dz = max_abs_diff(phi, Vector(s * (pair(Axis::Z, 0, 0) + pair(Axis::Z, 1, 1))));
    const double dx = max_abs_diff(phi, Vector(s * (pair(Axis::X, 0, 0) + pair(Axis::X, 1, 1))));
    const double dy = max_abs_diff(phi, Vector(s * (pair(Axis::Y, 0, 1) + pair(Axis::Y, 1, 0))));
    Vector rsum = Vector::Zero(4);
    for (const auto& rk : r_basis()) rsum += 0.5 * rk.amplitudes();
    const double dr = max_abs_diff(phi, rsum);
    const double worst = std::max({dz, dx, dy, dr});
    report(3, worst < kAnalytic,
           "z/x/y/r rewrites, max entrywise deviation = " + fmt("%.3g", worst));
}

void no_attack() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_protocol(kRounds, EveStrategy::none(), kSeed, 0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double n = static_cast<double>(kRounds);
    const double f = static_cast<double>(rep.s23_indices.size()) / n;
    bool r_ok = true;
    for (auto c : rep.r_counts) r_ok = r_ok && std::abs(c / n - 0.25) <= band(0.25, n);
    const bool ok = rep.detection_count == 0 && rep.alice_key == rep.bob_key &&
                    std::abs(f - 0.5) <= band(0.5, n) && r_ok && secs < kRuntimeLimitSeconds;
    report(4, ok,
           std::to_string(kRounds) + " rounds: detections " + std::to_string(rep.detection_count) +
               ", keys " + (rep.alice_key == rep.bob_key ? "equal" : "differ") + " (" +
               std::to_string(rep.alice_key.size()) + " bits), S23 fraction " + fmt("%.5f", f) +
               ", r uniform " + (r_ok ? "yes" : "no") + ", " + fmt("%.2f s", secs));
}

void published_claim() {
    std::string detail = "published 0.375; exact:";
    bool any_model = false;
    const PassModel models[] = {PassModel::ToBobOnly, PassModel::ToAliceOnly,
                                PassModel::BothPasses};
    for (PassModel p : models) {
        bool all = true;
        detail += std::string(" [") + std::string(pass_model_name(p));
        for (const auto& s : {EveStrategy::random_xz(p), EveStrategy::fixed(Axis::X, p),
                              EveStrategy::fixed(Axis::Z, p)}) {
            const double v = exact_detection_given_s23(s);
            all = all && std::abs(v - kPublishedDetection) < kClaimTol;
            detail += " " + s.name() + "=" + fmt("%.12f", v);
        }
        detail += "]";
        any_model = any_model || all;
    }
    // Monte Carlo against the oracle under both passes; reported either way.
    bool mc_ok = true;
    for (const auto& s : {EveStrategy::random_xz(), EveStrategy::fixed(Axis::X),
                          EveStrategy::fixed(Axis::Z)}) {
        const auto rep = run_protocol(kRounds, s, kSeed, 0);
        const double p = exact_detection_given_s23(s);
        mc_ok = mc_ok && std::abs(rep.detection_rate_given_s23 - p) <=
                             band(p, static_cast<double>(rep.s23_indices.size()));
    }
    detail += std::string("; Monte Carlo vs oracle within 4 sigma: ") + (mc_ok ? "yes" : "no");
    detail += any_model ? "" : "; no pass model reproduces 0.375";
    report(5, any_model && mc_ok, detail);
}

void y_axis() {
    const auto s = EveStrategy::fixed(Axis::Y);
    const double p = exact_detection_given_s23(s);
    const auto rep = run_protocol(kRounds, s, kSeed, 0);
    const double n = static_cast<double>(rep.s23_indices.size());
    const bool ok = std::abs(rep.detection_rate_given_s23 - p) <= band(p, n);
    report(6, ok,
           "exact " + fmt("%.12f", p) + " (published claim 0.375), Monte Carlo " +
               fmt("%.5f", rep.detection_rate_given_s23) + " +/- " + fmt("%.5f", band(p, n)));
}

void abl_properties() {
    std::mt19937_64 gen(0xab1);
    const std::vector<std::vector<int>> shapes{{1, 1, 1, 1}, {2, 2}, {1, 3}, {2, 1, 1}};
    double worst = 0.0;
    constexpr int kInstances = 1000;
    for (int i = 0; i < kInstances; ++i) {
        const ref::Vec pre = ref::random_state(gen, 4);
        const ref::Vec post = ref::random_state(gen, 4);
        const auto proj = ref::grouped_projectors(ref::random_unitary(gen, 4), shapes[i % 4]);
        std::vector<ProjectiveOutcome> outcomes;
        for (std::size_t k = 0; k < proj.size(); ++k) {
            outcomes.push_back({std::to_string(k), Operator(proj[k])});
        }
        ProjectiveObservable obs(std::move(outcomes));
        const auto fwd = abl_distribution({StateVector(2, pre), StateVector(2, post), obs});
        const auto rev = abl_distribution({StateVector(2, post), StateVector(2, pre), obs});
        const auto bayes = ref::forward_bayes(pre, post, proj);
        for (std::size_t k = 0; k < proj.size(); ++k) {
            worst = std::max({worst, std::abs(fwd[k].probability - rev[k].probability),
                              std::abs(fwd[k].probability - bayes[k])});
        }
    }
    report(7, worst < kProperty,
           std::to_string(kInstances) + " random instances, max deviation " + fmt("%.3g", worst));
}

void deferred_mode() {
    const auto rep = equivalence_report();
    const bool ok = rep.total_variation < kEquivalence &&
                    rep.reduced_state_deviation < kEquivalence &&
                    rep.table1_max_deviation < kEquivalence;
    report(8, ok,
           "total variation " + fmt("%.3g", rep.total_variation) + ", reduced state " +
               fmt("%.3g", rep.reduced_state_deviation) + ", retrodiction conditionals " +
               fmt("%.3g", rep.table1_max_deviation));
}

void circuit_checker() {
    const auto lab = implements_r(reference_r_circuit());
    const bool ref_ok = lab.has_value();
    std::mt19937_64 gen(0xf19);
    const auto r = r_basis();
    double worst = 0.0;
    if (ref_ok) {
        const Matrix u = unitary_of(reference_r_circuit()).entries();
        for (int i = 0; i < 100; ++i) {
            const ref::Vec psi = ref::random_state(gen, 4);
            const ref::Vec rotated = u * psi;
            for (int k = 0; k < 4; ++k) {
                worst = std::max(worst, std::abs(std::norm(r[k].amplitudes().dot(psi)) -
                                                 std::norm(rotated(static_cast<Eigen::Index>((*lab)[k])))));
            }
        }
    }
    const auto fig = implements_r(fig1_candidate());
    std::string verdict = fig ? "ACCEPT (labeling" : "REJECT";
    if (fig) {
        for (std::size_t k = 0; k < 4; ++k) {
            verdict += " r" + std::to_string(k + 1) + "->" + std::to_string(((*fig)[k] >> 1) & 1U) +
                       std::to_string((*fig)[k] & 1U);
        }
        verdict += ")";
    }
    report(9, ref_ok && worst < kEquivalence,
           std::string("reference ") + (ref_ok ? "accepted" : "rejected") +
               ", 100-state max deviation " + fmt("%.3g", worst) +
               ", published circuit transcription: " + verdict);
}

void determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--pairs", "20000", "--strategy", "random-xz", "--seed", "3"},
        {"simulate", "--pairs", "20000", "--strategy", "fixed-y", "--passes", "to-bob", "--seed",
         "3", "--format", "csv"},
        {"simulate", "--pairs", "5000", "--strategy", "fixed-z", "--mode", "deferred", "--seed", "3",
         "--threads", "4"},
    };
    bool ok = true;
    for (const auto& args : commands) {
        std::ostringstream a, b, ea, eb;
        const int ca = cli::run(args, a, ea);
        const int cb = cli::run(args, b, eb);
        ok = ok && ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
    }
    report(10, ok, std::to_string(commands.size()) + " stochastic invocations, repeated runs " +
                       (ok ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
    table_regeneration();
    overlaps();
    basis_rewrites();
    no_attack();
    published_claim();
    y_axis();
    abl_properties();
    deferred_mode();
    circuit_checker();
    determinism();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
