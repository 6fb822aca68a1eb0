// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <map>
#include <vector>

#include "gtsynth/circuit.hpp"

namespace gtsynth {

class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dense state with a classical-bit store for adaptive branches. Amplitude
/// index bit q is qubit q (qubit 0 least significant).
struct StateVector {
    std::size_t num_qubits = 0;
    std::vector<std::complex<double>> amps;
    std::map<std::uint32_t, bool> cbits;
    double branch_probability = 1.0;

    StateVector() = default;
    explicit StateVector(std::size_t n)
        : num_qubits(n), amps(std::size_t(1) << n, 0.0) {
        amps[0] = 1.0;
    }
    static StateVector basis(std::size_t n, std::size_t index);

    double norm() const;
};

/// Forced measurement outcomes, keyed by classical-bit label.
using OutcomeMap = std::map<std::uint32_t, bool>;

/// Applies every instruction. MeasureX projects onto the forced outcome's
/// X eigenstate, records the branch probability and renormalizes; a
/// zero-probability forced branch raises SimulationError. With no `outcomes`
/// the circuit must be measurement-free.
StateVector simulate(const Circuit& c, const StateVector& input,
                     const OutcomeMap* outcomes = nullptr);

struct Branch {
    OutcomeMap outcomes;
    double probability = 0.0;
    StateVector state;  // empty amps if probability is zero
};

/// All 2^m forced-outcome branches, probabilities summing to one.
std::vector<Branch> enumerate_branches(const Circuit& c, const StateVector& input);

/// Column-by-column dense unitary; requires a measurement-free circuit on at
/// most 14 qubits.
std::vector<std::vector<std::complex<double>>> extract_unitary(const Circuit& c);

}  // namespace gtsynth
