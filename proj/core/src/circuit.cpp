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

#include "ppqkd/circuit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ppqkd/errors.hpp"

namespace ppqkd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Operator h2() {
    const double s = std::numbers::sqrt2 / 2.0;
    Matrix m(2, 2);
    m << s, s, s, -s;
    return Operator(std::move(m));
}

Operator phase2(double angle) {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = std::polar(1.0, angle);
    return Operator(std::move(m));
}

Operator controlled(const Operator& single, int control, int target, int n) {
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    return Operator(embed(Operator(p0), control, n).entries() +
                    embed(Operator(p1), control, n).entries() *
                        embed(single, target, n).entries());
}

}  // namespace

Circuit::Circuit(int n_qubits, std::vector<Gate> gates) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw InvalidArgument("circuit qubit count outside [1, 5]");
    }
    gates_.reserve(gates.size());
    for (auto& g : gates) {
        append(std::move(g));
    }
}

void Circuit::validate(const Gate& gate) const {
    auto in_range = [this](int q) { return q >= 0 && q < n_qubits_; };
    std::visit(overloaded{
                   [&](const Hadamard& g) {
                       if (!in_range(g.target)) throw InvalidArgument("H target out of range");
                   },
                   [&](const Phase& g) {
                       if (!in_range(g.target)) throw InvalidArgument("P target out of range");
                       if (!std::isfinite(g.angle)) throw InvalidArgument("P angle not finite");
                   },
                   [&](const ControlledPhase& g) {
                       if (!in_range(g.control) || !in_range(g.target) || g.control == g.target)
                           throw InvalidArgument("CP needs two distinct in-range qubits");
                       if (!std::isfinite(g.angle)) throw InvalidArgument("CP angle not finite");
                   },
                   [&](const ControlledNot& g) {
                       if (!in_range(g.control) || !in_range(g.target) || g.control == g.target)
                           throw InvalidArgument("CNOT needs two distinct in-range qubits");
                   },
                   [&](const ControlledHadamard& g) {
                       if (!in_range(g.control) || !in_range(g.target) || g.control == g.target)
                           throw InvalidArgument("CH needs two distinct in-range qubits");
                   },
               },
               gate);
}

void Circuit::append(Gate gate) {
    validate(gate);
    gates_.push_back(std::move(gate));
}

Circuit Circuit::then(const Circuit& next) const {
    if (next.n_qubits_ != n_qubits_) {
        throw InvalidArgument("cannot concatenate circuits of different widths");
    }
    Circuit out = *this;
    for (const auto& g : next.gates_) {
        out.append(g);
    }
    return out;
}

Operator gate_unitary(const Gate& gate, int n) {
    return std::visit(
        overloaded{
            [n](const Hadamard& g) { return embed(h2(), g.target, n); },
            [n](const Phase& g) { return embed(phase2(g.angle), g.target, n); },
            [n](const ControlledPhase& g) {
                return controlled(phase2(g.angle), g.control, g.target, n);
            },
            [n](const ControlledNot& g) {
                return controlled(pauli(Axis::X), g.control, g.target, n);
            },
            [n](const ControlledHadamard& g) { return controlled(h2(), g.control, g.target, n); },
        },
        gate);
}

Operator unitary_of(const Circuit& circuit) {
    Operator u = Operator::identity(std::size_t{1} << circuit.n_qubits());
    for (const auto& g : circuit.gates()) {
        u = gate_unitary(g, circuit.n_qubits()) * u;
    }
    return u;
}

Operator reference_r_rotation() {
    const auto rs = r_basis();
    Matrix m(4, 4);
    for (Eigen::Index k = 0; k < 4; ++k) {
        m.row(k) = rs[static_cast<std::size_t>(k)].amplitudes().adjoint();
    }
    return Operator(std::move(m));
}

std::optional<RLabeling> implements_r(const Operator& unitary) {
    if (unitary.dim() != 4) {
        return std::nullopt;
    }
    const auto rs = r_basis();
    RLabeling labeling{};
    std::array<bool, 4> used{};
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const Vector image = unitary.entries() * rs[k].amplitudes();
        Eigen::Index best = 0;
        image.cwiseAbs2().maxCoeff(&best);
        if (std::abs(std::norm(image(best)) - 1.0) > kLabelingTol) {
            return std::nullopt;
        }
        for (Eigen::Index j = 0; j < image.size(); ++j) {
            if (j != best && std::abs(image(j)) > kLabelingTol) {
                return std::nullopt;
            }
        }
        const auto slot = static_cast<std::size_t>(best);
        if (used[slot]) {
            return std::nullopt;
        }
        used[slot] = true;
        labeling[k] = slot;
    }
    return labeling;
}

std::optional<RLabeling> implements_r(const Circuit& circuit) {
    if (circuit.n_qubits() != 2) {
        return std::nullopt;
    }
    return implements_r(unitary_of(circuit));
}

Circuit reference_r_circuit() {
    using std::numbers::pi;
    // CNOT folds the |01>,|10> components onto qubit 1 = 1; the controlled
    // e^{-i pi/4} S H S then sends both halves to |0>/|1> on qubit 0, and the
    // final H resolves the +/- pairs.
    return Circuit(2, {
                          ControlledNot{0, 1},
                          ControlledPhase{1, 0, pi / 2},
                          ControlledHadamard{1, 0},
                          ControlledPhase{1, 0, pi / 2},
                          Phase{1, -pi / 4},
                          Hadamard{1},
                      });
}

Circuit fig1_candidate() {
    using std::numbers::pi;
    // Top wire of the figure is qubit 0, bottom wire qubit 1.
    return Circuit(2, {
                          Phase{0, pi},
                          ControlledNot{1, 0},
                          ControlledPhase{0, 1, pi / 2},
                          ControlledHadamard{0, 1},
                          ControlledPhase{0, 1, pi / 2},
                          Phase{0, -3 * pi / 4},
                          Hadamard{0},
                      });
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

int parse_qubit(std::string_view word, std::size_t line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size() || value < 0) {
        throw ParseError(line, "bad qubit index '" + std::string(word) + "'");
    }
    return value;
}

double parse_angle(std::string_view word, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value)) {
        throw ParseError(line, "bad angle '" + std::string(word) + "'");
    }
    return value;
}

std::string format_angle(double angle) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", angle);
    return buf;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    int n_qubits = 2;
    bool saw_gate = false;
    bool saw_size = false;
    std::vector<std::pair<std::size_t, Gate>> gates;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto w = split_words(line);
        if (w.empty()) {
            if (end == text.size()) break;
            continue;
        }
        auto expect = [&](std::size_t count) {
            if (w.size() != count) {
                throw ParseError(line_no, "'" + std::string(w[0]) + "' expects " +
                                              std::to_string(count - 1) + " operand(s)");
            }
        };
        const std::string_view op = w[0];
        if (op == "qubits") {
            expect(2);
            if (saw_gate || saw_size) {
                throw ParseError(line_no, "'qubits' must come first and only once");
            }
            n_qubits = parse_qubit(w[1], line_no);
            if (n_qubits < 1 || n_qubits > kMaxQubits) {
                throw ParseError(line_no, "qubit count outside [1, 5]");
            }
            saw_size = true;
        } else if (op == "H") {
            expect(2);
            gates.emplace_back(line_no, Hadamard{parse_qubit(w[1], line_no)});
        } else if (op == "P") {
            expect(3);
            gates.emplace_back(line_no,
                               Phase{parse_qubit(w[1], line_no), parse_angle(w[2], line_no)});
        } else if (op == "CP") {
            expect(4);
            gates.emplace_back(line_no, ControlledPhase{parse_qubit(w[1], line_no),
                                                        parse_qubit(w[2], line_no),
                                                        parse_angle(w[3], line_no)});
        } else if (op == "CNOT") {
            expect(3);
            gates.emplace_back(line_no, ControlledNot{parse_qubit(w[1], line_no),
                                                      parse_qubit(w[2], line_no)});
        } else if (op == "CH") {
            expect(3);
            gates.emplace_back(line_no, ControlledHadamard{parse_qubit(w[1], line_no),
                                                           parse_qubit(w[2], line_no)});
        } else {
            throw ParseError(line_no, "unknown gate '" + std::string(op) + "'");
        }
        if (op != "qubits") saw_gate = true;
        if (end == text.size()) break;
    }

    Circuit circuit(n_qubits);
    for (auto& [line, gate] : gates) {
        try {
            circuit.append(std::move(gate));
        } catch (const InvalidArgument& e) {
            throw ParseError(line, e.what());
        }
    }
    return circuit;
}

std::string format_circuit(const Circuit& circuit) {
    std::ostringstream out;
    if (circuit.n_qubits() != 2) {
        out << "qubits " << circuit.n_qubits() << '\n';
    }
    for (const auto& gate : circuit.gates()) {
        std::visit(overloaded{
                       [&](const Hadamard& g) { out << "H " << g.target; },
                       [&](const Phase& g) { out << "P " << g.target << ' ' << format_angle(g.angle); },
                       [&](const ControlledPhase& g) {
                           out << "CP " << g.control << ' ' << g.target << ' '
                               << format_angle(g.angle);
                       },
                       [&](const ControlledNot& g) { out << "CNOT " << g.control << ' ' << g.target; },
                       [&](const ControlledHadamard& g) {
                           out << "CH " << g.control << ' ' << g.target;
                       },
                   },
                   gate);
        out << '\n';
    }
    return out.str();
}

}  // namespace ppqkd
