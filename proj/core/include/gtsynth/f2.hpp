// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gtsynth {

/// Thrown on dimension mismatches and other precondition violations in the
/// GF(2) layer.
class F2Error : public std::invalid_argument {
public:
    explicit F2Error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Packed bit vector over GF(2). Bits beyond `size()` are kept zero.
class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static F2Vector unit(std::size_t n, std::size_t i);

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    void xor_in(const F2Vector& other);
    bool dot(const F2Vector& other) const;   // parity of bitwise AND
    bool is_zero() const;
    std::size_t popcount() const;
    /// Index of the lowest set bit, or npos if zero.
    std::size_t lowest_set() const;

    bool operator==(const F2Vector& o) const { return n_ == o.n_ && words_ == o.words_; }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense bit-packed binary matrix, row-major, 64-bit words per row chunk.
/// All arithmetic is mod 2. Trailing bits of every row word stay zero.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64),
          bits_(rows * stride_, 0) {
        if (rows == 0 || cols == 0) throw F2Error("F2Matrix: empty dimensions");
    }

    static F2Matrix identity(std::size_t n);
    static F2Matrix zero(std::size_t rows, std::size_t cols) { return F2Matrix(rows, cols); }
    static F2Matrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t m = std::uint64_t(1) << (c & 63);
        if (v) bits_[r * stride_ + (c >> 6)] |= m;
        else   bits_[r * stride_ + (c >> 6)] &= ~m;
    }

    void xor_row(std::size_t dst, std::size_t src);      // row dst ^= row src
    void swap_rows(std::size_t a, std::size_t b);
    F2Vector row(std::size_t r) const;
    void set_row(std::size_t r, const F2Vector& v);
    F2Vector col(std::size_t c) const;

    F2Matrix transposed() const;
    F2Matrix operator^(const F2Matrix& o) const;          // entrywise XOR
    bool operator==(const F2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

    /// Submatrix [r0, r0+h) x [c0, c0+w).
    F2Matrix block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const;
    void set_block(std::size_t r0, std::size_t c0, const F2Matrix& b);

    bool is_identity() const;
    bool is_zero() const;
    bool is_symmetric() const;

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<std::uint64_t> bits_;

    friend F2Matrix mul(const F2Matrix&, const F2Matrix&);
    friend class F2RowEchelon;
};

/// rng-state used across the library; callers own and seed it.
using Rng = std::mt19937_64;

F2Matrix mul(const F2Matrix& a, const F2Matrix& b);
F2Vector mul(const F2Matrix& a, const F2Vector& x);      // a * x
F2Vector mul_left(const F2Vector& x, const F2Matrix& a); // x^T * a

std::size_t rank(const F2Matrix& a);

/// Gauss-Jordan inverse; nullopt iff `a` is singular. Pivots on the
/// lowest-index row with a set bit, so results are deterministic.
std::optional<F2Matrix> inverse(const F2Matrix& a);

/// Any x with coeff * x = rhs, or nullopt if the system is inconsistent.
std::optional<F2Vector> solve_linear(const F2Matrix& coeff, const F2Vector& rhs);

/// Uniformly random bits, resampled until invertible.
F2Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
F2Matrix random_invertible(std::size_t n, Rng& rng);

/// Factorization A = D^-1 B^-1 D B over GF(2) with B, D invertible.
///
/// Finds a cyclic matrix X = X0 + m w^T and Y = A^-1 X sharing one
/// characteristic polynomial; the rank-one update w is obtained by a linear
/// solve (the characteristic polynomial of a rank-one update is affine in
/// w), and the conjugator D maps the Krylov basis of X onto the Krylov
/// basis of Y. Every output is certified by recomposition before returning;
/// nullopt after the retry budget (possible only for n < 3, where not every
/// matrix is a commutator).
std::optional<std::pair<F2Matrix, F2Matrix>>
commutator_decompose(const F2Matrix& a, Rng& rng);

}  // namespace gtsynth
