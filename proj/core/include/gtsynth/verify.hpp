// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <string>

#include "gtsynth/sim.hpp"
#include "gtsynth/tableau.hpp"

namespace gtsynth {

struct EquivalenceVerdict {
    bool equal = false;
    double max_deviation = 0.0;
    std::complex<double> global_phase = 1.0;
    std::optional<std::size_t> failing_basis_state;
    std::string detail;
};

constexpr double kVerifyTolerance = 1e-9;

/// Verifies the phase-oracle contract: for every x the circuit maps
/// |x>|0...0> to (-1)^{OR(x)} |x>|0...0> up to one global phase (per circuit,
/// or per measurement branch for adaptive circuits).
EquivalenceVerdict check_or_contract(const Circuit& c, std::size_t n_data);

/// Verifies the multiply-controlled X contract on |x>|0...0> inputs: the
/// data register maps to x with the target bit flipped iff all controls are
/// set, ancillae restored, one global phase per circuit or branch.
EquivalenceVerdict check_mct_contract(const Circuit& c, std::size_t num_controls);

enum class CliffordCheckMode { exact_tableau, stabilizer_ancilla };

/// exact_tableau: replay through the stabilizer tableau and compare
/// bit-exactly. stabilizer_ancilla: check c(|psi>|0^n>) = (U|psi>)|0^n> on
/// random stabilizer inputs, dense when 2n <= 12 and via canonical
/// stabilizer groups beyond.
EquivalenceVerdict check_clifford_contract(const Circuit& c, const CliffordTableau& t,
                                           CliffordCheckMode mode, Rng& rng,
                                           int num_stabilizer_inputs = 32);

/// Dense amplitudes of the state fixed by a full stabilizer group.
std::vector<std::complex<double>> dense_from_stabilizer(const StabilizerGroup& g,
                                                        std::size_t num_qubits);

/// True when every enumerated branch has probability 2^-m within tol
/// (equivalently, every measurement is unbiased on every prefix).
bool measurement_probs_uniform(const Circuit& c, const StateVector& input, double tol);

/// Compares two dense states after optimal global-phase alignment.
double phase_aligned_deviation(const std::vector<std::complex<double>>& got,
                               const std::vector<std::complex<double>>& want,
                               std::complex<double>* phase_out = nullptr);

}  // namespace gtsynth
