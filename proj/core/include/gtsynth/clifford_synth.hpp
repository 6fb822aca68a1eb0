// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gtsynth/circuit.hpp"
#include "gtsynth/f2.hpp"
#include "gtsynth/tableau.hpp"

namespace gtsynth {

class SynthesisError : public std::runtime_error {
public:
    explicit SynthesisError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Three disjoint qubit index lists covering the register.
struct RegisterSplit {
    std::vector<std::uint32_t> part[3];

    /// Contiguous split with sizes (k, k+1, k+1), (k, k+1, k) or (k, k, k)
    /// depending on n mod 3.
    static RegisterSplit thirds(std::size_t n);
    std::size_t total() const { return part[0].size() + part[1].size() + part[2].size(); }
};

enum class C3Orientation { forward, reversed };

/// The CX-layer map |v> -> |Lv| of a layer instruction, as an n x n matrix.
F2Matrix layer_matrix(const CxLayerInstr& layer, std::size_t n);

/// Register-pair circuit |x,y> -> |A^-1 y, Ax| from three CX layers.
/// forward:  CX_12(A), CX_21(A^-1), CX_12(A) in time order;
/// reversed: CX_21(A^-1), CX_12(A), CX_21(A^-1).
Circuit c3(const F2Matrix& a, const std::vector<std::uint32_t>& reg1,
           const std::vector<std::uint32_t>& reg2,
           C3Orientation orientation = C3Orientation::forward);

/// |x,y> -> |y + Ax, A^-1 y| from CX_12(I+A), CX_21(I), CX_12(I+A^-1).
Circuit c3_prime(const F2Matrix& a, const std::vector<std::uint32_t>& reg1,
                 const std::vector<std::uint32_t>& reg2);

/// |x,y,z> -> |z, Ax, y| on three equal registers, 12 CX layers built from a
/// commutator factorization A = D^-1 B^-1 D B (dirty-ancilla construction).
Circuit w_circuit(const F2Matrix& a, const RegisterSplit& split, Rng& rng);

struct PreprocessResult {
    std::vector<CxLayerInstr> layers;  // 0..2 depth-1 layers, stage order
    F2Matrix a_new;                    // product(layers) * a, applied stage 1 first
};

/// Depth-1 row-addition layers making the leading k x k and (k+k1) x (k+k1)
/// blocks (per the split) invertible: a_new = E2 * E1 * a and
/// a = E1 * E2 * a_new since each layer is an involution.
PreprocessResult preprocess_blocks(const F2Matrix& a, const RegisterSplit& split,
                                   Rng& rng);

struct BlockDiagResult {
    std::vector<CxLayerInstr> layers;  // exactly 3, elimination order
    F2Matrix b0, b1, b2;               // invertible diagonal blocks

    /// a = L1 * L2 * L3 * blockdiag(b0, b1, b2) under the split embedding.
    F2Matrix recompose(const RegisterSplit& split, std::size_t n) const;
};

/// Eliminates off-diagonal blocks column by column; requires the leading
/// blocks invertible (the preprocess postcondition).
BlockDiagResult block_diagonalize(const F2Matrix& a, const RegisterSplit& split);

/// Linear reversible circuit |v> -> |Av| on exactly n qubits. For n >= 9 the
/// block construction applies (cost <= 23 before merge optimization, one more
/// when a leftover qubit needs a standalone decoupling layer); below that a
/// plain elimination schedule is used and costs are simply what they are.
Circuit synth_cx_ancilla_free(const F2Matrix& a, Rng& rng);

/// Theorem circuit on 2n qubits (n data + n clean ancilla), entangling cost
/// exactly 4 for n >= 2. On inputs with ancilla |0^n> acts as U on the data
/// and returns the ancilla to |0^n>.
Circuit synth_with_ancilla(const CliffordTableau& t);

/// Ancilla-free circuit on exactly n qubits whose tableau equals t
/// bit-exactly. Cost <= 25 (27 in rare degenerate leftover cases) before
/// optimization, <= 20/21 after optimize_merges.
Circuit synth_ancilla_free(const CliffordTableau& t, bool optimize, Rng& rng);

}  // namespace gtsynth
