// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>

#include "gtsynth/circuit.hpp"

namespace gtsynth {

enum class MctMethod { recursive, flat, adaptive_flat, adaptive_recursive };

const char* mct_method_name(MctMethod m);

/// Fixed 2^q-th root of Pauli X: H diag(1, e^{i pi / 2^q}) H.
std::array<std::complex<double>, 4> x_q_unitary(std::uint32_t q);

/// Iterated logarithm: number of base-2 log applications taking n to <= 1.
std::size_t iterated_log(std::size_t n);

/// Smallest p with 2^p >= n + 1.
std::size_t reduced_size(std::size_t n);

/// Length of the reduction chain n -> reduced_size(n) -> ... -> 2. One
/// entangling compute/uncompute pair per link; the textbook iterated log
/// undercounts this for some n because each link shrinks to ceil(log2(n+1)),
/// not log2(n).
std::size_t reduction_levels(std::size_t n);

/// Synthesis plan for the phase-flip oracle on an n-qubit register
/// (n = controls + 1 when wrapping into a multiply-controlled X).
struct MctPlan {
    std::size_t n = 0;
    MctMethod method = MctMethod::flat;
    std::size_t p = 0;                       // reduced register size
    std::vector<std::size_t> level_sizes;    // reduction chain after n (recursive)
    std::size_t num_ancilla = 0;
    std::size_t predicted_gt_cost = 0;
};

MctPlan mct_plan(std::size_t n, MctMethod method);

/// All four ways to build the n-qubit phase-flip oracle: the circuit maps
/// |x>|0...0> to (-1)^{OR(x)} |x>|0...0> up to a global phase (per branch
/// for the adaptive variants, which measure every ancilla in the X basis
/// and patch phases with classically controlled Z powers).
Circuit synth_or_recursive(std::size_t n);
Circuit synth_or_flat(std::size_t n);
Circuit synth_or_adaptive_flat(std::size_t n);
Circuit synth_or_adaptive_recursive(std::size_t n);
Circuit synth_or(std::size_t n, MctMethod method);

/// (num_controls)-controlled X: the oracle on controls+target, conjugated by
/// X on the register and H on the target qubit.
Circuit mct_circuit(std::size_t num_controls, MctMethod method);

}  // namespace gtsynth
