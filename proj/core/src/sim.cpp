// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/sim.hpp"

#include <cmath>
#include <numbers>

#include "gtsynth/tableau.hpp"

namespace gtsynth {

namespace {

using Cplx = std::complex<double>;

StateVector& require_qubit(StateVector& s, std::size_t q) {
    if (q >= s.num_qubits) throw SimulationError("qubit index out of range");
    return s;
}

void apply_2x2(StateVector& s, std::size_t q, Cplx a, Cplx b, Cplx c, Cplx d) {
    const std::size_t bit = std::size_t(1) << q;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (i & bit) continue;
        const Cplx v0 = s.amps[i], v1 = s.amps[i | bit];
        s.amps[i] = a * v0 + b * v1;
        s.amps[i | bit] = c * v0 + d * v1;
    }
}

Cplx phase_of(const Angle& angle) {
    return std::polar(1.0, std::numbers::pi * angle.value());
}

void apply_sq(StateVector& s, const SqInstr& ins) {
    require_qubit(s, ins.qubit);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (ins.gate.kind) {
        case SqGate::Kind::H:
            apply_2x2(s, ins.qubit, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
            break;
        case SqGate::Kind::X:
            apply_2x2(s, ins.qubit, 0, 1, 1, 0);
            break;
        case SqGate::Kind::Z:
            apply_2x2(s, ins.qubit, 1, 0, 0, -1);
            break;
        case SqGate::Kind::S:
            apply_2x2(s, ins.qubit, 1, 0, 0, Cplx(0, 1));
            break;
        case SqGate::Kind::Sdg:
            apply_2x2(s, ins.qubit, 1, 0, 0, Cplx(0, -1));
            break;
        case SqGate::Kind::ZPow:
            apply_2x2(s, ins.qubit, 1, 0, 0, phase_of(ins.gate.angle));
            break;
        case SqGate::Kind::XPow: {
            // H diag(1, e^(i pi a)) H
            const Cplx w = phase_of(ins.gate.angle);
            const Cplx p = 0.5 * (1.0 + w), m = 0.5 * (1.0 - w);
            apply_2x2(s, ins.qubit, p, m, m, p);
            break;
        }
        case SqGate::Kind::C24: {
            const Mat2 m = c24_matrix(ins.gate.c24);
            apply_2x2(s, ins.qubit, m.a, m.b, m.c, m.d);
            break;
        }
    }
}

void apply_pair_phase(StateVector& s, std::size_t a, std::size_t b, Cplx w) {
    const std::size_t mask = (std::size_t(1) << a) | (std::size_t(1) << b);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i & mask) == mask) s.amps[i] *= w;
}

void apply_cx_layer(StateVector& s, const CxLayerInstr& layer) {
    // Bijective index map: targets pick up the matrix action of controls.
    std::vector<Cplx> out(s.amps.size(), 0.0);
    std::vector<std::size_t> control_bits(layer.controls.size()),
        target_bits(layer.targets.size());
    for (std::size_t i = 0; i < layer.controls.size(); ++i)
        control_bits[i] = std::size_t(1) << layer.controls[i];
    for (std::size_t j = 0; j < layer.targets.size(); ++j)
        target_bits[j] = std::size_t(1) << layer.targets[j];
    for (std::size_t idx = 0; idx < s.amps.size(); ++idx) {
        if (s.amps[idx] == 0.0) continue;
        std::size_t out_idx = idx;
        for (std::size_t j = 0; j < target_bits.size(); ++j) {
            bool flip = false;
            for (std::size_t i = 0; i < control_bits.size(); ++i)
                if ((idx & control_bits[i]) && layer.matrix.get(i, j)) flip = !flip;
            if (flip) out_idx ^= target_bits[j];
        }
        out[out_idx] += s.amps[idx];
    }
    s.amps = std::move(out);
}

void apply_measure_x(StateVector& s, const MeasureXInstr& m, bool outcome) {
    require_qubit(s, m.qubit);
    // Project onto |outcome_x> = (|0> + (-1)^outcome |1>)/sqrt(2), keeping the
    // measured qubit in that eigenstate.
    const std::size_t bit = std::size_t(1) << m.qubit;
    const double sgn = outcome ? -1.0 : 1.0;
    double prob = 0.0;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (i & bit) continue;
        const Cplx overlap = (s.amps[i] + sgn * s.amps[i | bit]) / std::sqrt(2.0);
        prob += std::norm(overlap);
        s.amps[i] = overlap / std::sqrt(2.0);
        s.amps[i | bit] = sgn * overlap / std::sqrt(2.0);
    }
    if (prob < 1e-12)
        throw SimulationError("forced measurement outcome has zero probability");
    const double scale = 1.0 / std::sqrt(prob);
    for (auto& a : s.amps) a *= scale;
    s.branch_probability *= prob;
    s.cbits[m.cbit] = outcome;
}

}  // namespace

StateVector StateVector::basis(std::size_t n, std::size_t index) {
    StateVector s(n);
    s.amps[0] = 0.0;
    s.amps.at(index) = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps) acc += std::norm(a);
    return std::sqrt(acc);
}

StateVector simulate(const Circuit& c, const StateVector& input,
                     const OutcomeMap* outcomes) {
    if (input.num_qubits != c.num_qubits)
        throw SimulationError("input state size does not match circuit");
    StateVector s = input;
    for (const auto& ins : c.instructions) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, SqInstr>) {
                    apply_sq(s, v);
                } else if constexpr (std::is_same_v<T, GczInstr>) {
                    for (auto& p : v.pairs) apply_pair_phase(s, p.first, p.second, -1.0);
                } else if constexpr (std::is_same_v<T, GtInstr>) {
                    for (auto& t : v.terms)
                        apply_pair_phase(s, t.a, t.b, phase_of(t.angle));
                } else if constexpr (std::is_same_v<T, CxLayerInstr>) {
                    apply_cx_layer(s, v);
                } else if constexpr (std::is_same_v<T, MeasureXInstr>) {
                    if (!outcomes)
                        throw SimulationError("measurement with no forced outcomes");
                    const auto it = outcomes->find(v.cbit);
                    if (it == outcomes->end())
                        throw SimulationError("missing forced outcome for a measurement");
                    apply_measure_x(s, v, it->second);
                } else if constexpr (std::is_same_v<T, ConditionalInstr>) {
                    const auto it = s.cbits.find(v.cbit);
                    if (it == s.cbits.end())
                        throw SimulationError("conditional on an unmeasured label");
                    if (it->second) apply_sq(s, v.inner);
                }
            },
            ins);
    }
    return s;
}

std::vector<Branch> enumerate_branches(const Circuit& c, const StateVector& input) {
    std::vector<std::uint32_t> labels;
    for (const auto& ins : c.instructions)
        if (const auto* m = std::get_if<MeasureXInstr>(&ins)) labels.push_back(m->cbit);
    if (labels.size() > 20)
        throw SimulationError("too many measurements to enumerate");
    std::vector<Branch> out;
    const std::size_t total = std::size_t(1) << labels.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
        Branch b;
        for (std::size_t i = 0; i < labels.size(); ++i)
            b.outcomes[labels[i]] = (mask >> i) & 1u;
        try {
            b.state = simulate(c, input, &b.outcomes);
            b.probability = b.state.branch_probability;
        } catch (const SimulationError&) {
            b.probability = 0.0;  // zero-probability branch
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<std::vector<std::complex<double>>> extract_unitary(const Circuit& c) {
    if (c.num_qubits > 14) throw SimulationError("extract_unitary: size limit exceeded");
    for (const auto& ins : c.instructions)
        if (std::holds_alternative<MeasureXInstr>(ins))
            throw SimulationError("extract_unitary: circuit has measurements");
    const std::size_t dim = std::size_t(1) << c.num_qubits;
    std::vector<std::vector<Cplx>> u(dim, std::vector<Cplx>(dim, 0.0));
    for (std::size_t col = 0; col < dim; ++col) {
        const StateVector s = simulate(c, StateVector::basis(c.num_qubits, col));
        for (std::size_t row = 0; row < dim; ++row) u[row][col] = s.amps[row];
    }
    return u;
}

}  // namespace gtsynth
