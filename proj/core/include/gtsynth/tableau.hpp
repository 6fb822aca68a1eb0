// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gtsynth/circuit.hpp"
#include "gtsynth/f2.hpp"

namespace gtsynth {

class NonCliffordError : public std::runtime_error {
public:
    explicit NonCliffordError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Pauli operator i^phase * X^x Z^z with phase tracked mod 4.
struct PauliString {
    F2Vector x, z;
    int phase = 0;  // exponent of i

    PauliString() = default;
    explicit PauliString(std::size_t n) : x(n), z(n) {}

    static PauliString x_op(std::size_t n, std::size_t q);
    static PauliString z_op(std::size_t n, std::size_t q);

    std::size_t size() const { return x.size(); }

    PauliString times(const PauliString& o) const;  // this * o, exact phase
    bool commutes(const PauliString& o) const;

    /// popcount(x & z) mod 4; the canonical Hermitian form is
    /// (-1)^sign * i^overlap * X^x Z^z.
    int overlap() const;
    /// Requires phase == overlap (mod 2); true means a leading minus sign.
    bool sign() const;
    void set_sign(bool s);

    bool operator==(const PauliString&) const = default;
};

// --------------------------------------------------------------- C24 table
// The 24 single-qubit Cliffords (mod global phase), generated by H and S via
// breadth-first search; index 0 is the identity. Indices are stable and show
// up in serialized circuits.

struct Mat2 {
    std::complex<double> a, b, c, d;  // [[a, b], [c, d]]
};

int c24_mul(int lhs, int rhs);  // index of (matrix of lhs) * (matrix of rhs)
int c24_inv(int g);
int c24_transpose(int g);
int c24_identity();
int c24_h();
int c24_s();
int c24_sdg();
int c24_x();
int c24_z();
/// X^x Z^z as a C24 index (mod phase).
int c24_from_pauli(bool x, bool z);
Mat2 c24_matrix(int g);
/// Index whose conjugation action sends X -> (im_x) and Z -> (im_z), the
/// images given as Paulis on one qubit. Throws if no element matches.
int c24_from_action(const PauliString& im_x, const PauliString& im_z);

// ----------------------------------------------------------------- Tableau

/// Symplectic tableau with exact phase bits. Rows 0..n-1 hold the images of
/// X_i under conjugation, rows n..2n-1 the images of Z_i.
class CliffordTableau {
public:
    CliffordTableau() = default;
    static CliffordTableau identity(std::size_t n);

    std::size_t num_qubits() const { return n_; }
    const PauliString& x_image(std::size_t q) const { return rows_[q]; }
    const PauliString& z_image(std::size_t q) const { return rows_[n_ + q]; }

    // Left-composition: the tableau becomes gate * U.
    void apply_h(std::size_t q);
    void apply_x(std::size_t q);
    void apply_z(std::size_t q);
    void apply_s(std::size_t q);
    void apply_sdg(std::size_t q);
    void apply_c24(int g, std::size_t q);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_cnot(std::size_t control, std::size_t target);
    /// In-place linear reversible map |v> -> |Mv| (M invertible).
    void apply_linear(const F2Matrix& m);
    /// Throws NonCliffordError for measurements or fractional GT angles.
    void apply_instruction(const Instruction& ins);

    static CliffordTableau of_circuit(const Circuit& c);

    /// Image of an arbitrary Pauli under conjugation, phases exact.
    PauliString image_of(const PauliString& p) const;

    /// Tableau of (U_this * U_other), i.e. U_other acts first.
    CliffordTableau compose_after(const CliffordTableau& other) const;
    CliffordTableau inverted() const;

    bool is_valid() const;  // symplectic invariant
    F2Matrix symplectic() const;
    /// Sign bit per row in canonical Hermitian form.
    std::vector<bool> phase_bits() const;

    bool operator==(const CliffordTableau&) const = default;

    std::string to_text() const;
    static CliffordTableau from_text(const std::string& text);

private:
    std::size_t n_ = 0;
    std::vector<PauliString> rows_;
};

CliffordTableau random_clifford(std::size_t n, Rng& rng);
/// The generator sequence behind random_clifford, as a circuit.
Circuit random_clifford_circuit(std::size_t n, Rng& rng);

// ------------------------------------------------------- layered structure

/// U as the layer chain L1, CX, CZ(cz1), L2, CZ(cz2), L3 applied in that
/// time order. L layers are per-qubit C24 indices; cx_matrix is invertible;
/// cz matrices are symmetric with zero diagonal.
struct LayeredClifford {
    std::vector<int> l1, l2, l3;
    F2Matrix cx_matrix;
    F2Matrix cz1, cz2;
};

CliffordTableau recompose(const LayeredClifford& lc);
/// Exact layered decomposition; recompose(result) equals the input tableau
/// bit-for-bit, phases included.
LayeredClifford layered_decompose(const CliffordTableau& t);

// ---------------------------------------------------------- stabilizer sets

/// A list of independent commuting Pauli generators (a stabilizer group),
/// with a canonical form for exact state comparison.
struct StabilizerGroup {
    std::vector<PauliString> gens;

    void canonicalize();
    bool same_group(const StabilizerGroup& other) const;
};

}  // namespace gtsynth
