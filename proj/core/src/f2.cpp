// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/f2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace gtsynth {

// ---------------------------------------------------------------- F2Vector

F2Vector F2Vector::unit(std::size_t n, std::size_t i) {
    F2Vector v(n);
    v.set(i, true);
    return v;
}

void F2Vector::xor_in(const F2Vector& other) {
    if (n_ != other.n_) throw F2Error("F2Vector::xor_in: length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
}

bool F2Vector::dot(const F2Vector& other) const {
    if (n_ != other.n_) throw F2Error("F2Vector::dot: length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1u;
}

bool F2Vector::is_zero() const {
    for (auto w : words_) if (w) return false;
    return true;
}

std::size_t F2Vector::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
}

std::size_t F2Vector::lowest_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return npos;
}

// ---------------------------------------------------------------- F2Matrix

F2Matrix F2Matrix::identity(std::size_t n) {
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

F2Matrix F2Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
    F2Matrix m(rows.size(), rows.at(0).size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) throw F2Error("from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c] & 1);
    }
    return m;
}

void F2Matrix::xor_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = &bits_[dst * stride_];
    const std::uint64_t* s = &bits_[src * stride_];
    for (std::size_t w = 0; w < stride_; ++w) d[w] ^= s[w];
}

void F2Matrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < stride_; ++w)
        std::swap(bits_[a * stride_ + w], bits_[b * stride_ + w]);
}

F2Vector F2Matrix::row(std::size_t r) const {
    F2Vector v(cols_);
    std::copy(bits_.begin() + r * stride_, bits_.begin() + (r + 1) * stride_,
              v.words().begin());
    return v;
}

void F2Matrix::set_row(std::size_t r, const F2Vector& v) {
    if (v.size() != cols_) throw F2Error("set_row: length mismatch");
    std::copy(v.words().begin(), v.words().end(), bits_.begin() + r * stride_);
}

F2Vector F2Matrix::col(std::size_t c) const {
    F2Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.set(r, get(r, c));
    return v;
}

F2Matrix F2Matrix::transposed() const {
    F2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t w = 0; w < stride_; ++w) {
            std::uint64_t x = bits_[r * stride_ + w];
            while (x) {
                const int b = std::countr_zero(x);
                x &= x - 1;
                t.set(w * 64 + b, r, true);
            }
        }
    return t;
}

F2Matrix F2Matrix::operator^(const F2Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw F2Error("operator^: shape mismatch");
    F2Matrix r = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] ^= o.bits_[i];
    return r;
}

F2Matrix F2Matrix::block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const {
    F2Matrix b(h, w);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c)
            if (get(r0 + r, c0 + c)) b.set(r, c, true);
    return b;
}

void F2Matrix::set_block(std::size_t r0, std::size_t c0, const F2Matrix& b) {
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
            set(r0 + r, c0 + c, b.get(r, c));
}

bool F2Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c) != (r == c)) return false;
    return true;
}

bool F2Matrix::is_zero() const {
    for (auto w : bits_) if (w) return false;
    return true;
}

bool F2Matrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            if (get(r, c) != get(c, r)) return false;
    return true;
}

// ---------------------------------------------------------------- products

F2Matrix mul(const F2Matrix& a, const F2Matrix& b) {
    if (a.cols() != b.rows()) throw F2Error("mul: inner dimension mismatch");
    F2Matrix c(a.rows(), b.cols());
    // Row-combination method: c.row(i) = XOR of b-rows selected by a's bits.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t* dst = &c.bits_[i * c.stride_];
        for (std::size_t w = 0; w < a.stride_; ++w) {
            std::uint64_t x = a.bits_[i * a.stride_ + w];
            while (x) {
                const int bit = std::countr_zero(x);
                x &= x - 1;
                const std::uint64_t* src = &b.bits_[(w * 64 + bit) * b.stride_];
                for (std::size_t v = 0; v < b.stride_; ++v) dst[v] ^= src[v];
            }
        }
    }
    return c;
}

F2Vector mul(const F2Matrix& a, const F2Vector& x) {
    if (a.cols() != x.size()) throw F2Error("mul: vector length mismatch");
    F2Vector y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) y.set(r, a.row(r).dot(x));
    return y;
}

F2Vector mul_left(const F2Vector& x, const F2Matrix& a) {
    if (a.rows() != x.size()) throw F2Error("mul_left: vector length mismatch");
    F2Vector y(a.cols());
    std::size_t i = 0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        if (x.get(r)) { y.xor_in(a.row(r)); }
    (void)i;
    return y;
}

// ------------------------------------------------------------- elimination

namespace {

// Forward elimination over a working copy; returns pivot columns.
// If `companion` is non-null it receives the same row operations.
std::vector<std::size_t> echelon(F2Matrix& m, F2Matrix* companion) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = F2Vector::npos;
        for (std::size_t i = r; i < m.rows(); ++i)
            if (m.get(i, c)) { p = i; break; }
        if (p == F2Vector::npos) continue;
        m.swap_rows(r, p);
        if (companion) companion->swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != r && m.get(i, c)) {
                m.xor_row(i, r);
                if (companion) companion->xor_row(i, r);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const F2Matrix& a) {
    F2Matrix m = a;
    return echelon(m, nullptr).size();
}

std::optional<F2Matrix> inverse(const F2Matrix& a) {
    if (a.rows() != a.cols()) throw F2Error("inverse: matrix not square");
    F2Matrix m = a;
    F2Matrix inv = F2Matrix::identity(a.rows());
    const auto pivots = echelon(m, &inv);
    if (pivots.size() < a.rows()) return std::nullopt;
    return inv;
}

std::optional<F2Vector> solve_linear(const F2Matrix& coeff, const F2Vector& rhs) {
    if (coeff.rows() != rhs.size()) throw F2Error("solve_linear: rhs length mismatch");
    F2Matrix m(coeff.rows(), coeff.cols() + 1);
    m.set_block(0, 0, coeff);
    for (std::size_t r = 0; r < rhs.size(); ++r) m.set(r, coeff.cols(), rhs.get(r));
    F2Matrix work = m;
    const auto pivots = echelon(work, nullptr);
    F2Vector x(coeff.cols());
    std::size_t row = 0;
    for (auto c : pivots) {
        if (c == coeff.cols()) return std::nullopt;  // pivot in the rhs column
        x.set(c, work.get(row, coeff.cols()));
        ++row;
    }
    return x;
}

F2Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    F2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.set(r, c, rng() & 1u);
    return m;
}

F2Matrix random_invertible(std::size_t n, Rng& rng) {
    if (n == 0) throw F2Error("random_invertible: n must be >= 1");
    for (;;) {
        F2Matrix m = random_matrix(n, n, rng);
        if (rank(m) == n) return m;
    }
}

// ---------------------------------------------------- commutator factoring

namespace {

// Krylov chain b, Mb, ..., M^(n)b. Returns n+1 vectors.
std::vector<F2Vector> krylov_chain(const F2Matrix& m, const F2Vector& b) {
    std::vector<F2Vector> k;
    k.reserve(m.rows() + 1);
    k.push_back(b);
    for (std::size_t i = 0; i < m.rows(); ++i) k.push_back(mul(m, k.back()));
    return k;
}

F2Matrix cols_to_matrix(const std::vector<F2Vector>& cols, std::size_t n) {
    F2Matrix m(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r)
            if (cols[c].get(r)) m.set(r, c, true);
    return m;
}

// Characteristic polynomial of M read off a full-rank Krylov chain:
// M^n b = sum_j a_j M^(j-1) b with chi(x) = x^n + sum a_j x^(j-1).
// Returns coefficients a_0..a_(n-1); requires chain[0..n) independent.
std::optional<F2Vector> charpoly_from_chain(const std::vector<F2Vector>& chain,
                                            const F2Matrix& krylov_inv) {
    const std::size_t n = chain[0].size();
    return mul(krylov_inv, chain[n]);
}

// Coefficient vectors of adj(xI - M) b: entry d is the vector coefficient of
// x^d, equal to sum_{j>d} a_j M^(j-1-d) b with a_n = 1.
std::vector<F2Vector> adjugate_vectors(const std::vector<F2Vector>& chain,
                                       const F2Vector& chi) {
    const std::size_t n = chain[0].size();
    std::vector<F2Vector> out(n, F2Vector(n));
    for (std::size_t d = 0; d < n; ++d) {
        F2Vector acc(n);
        for (std::size_t j = d + 1; j <= n; ++j) {
            const bool aj = (j == n) ? true : chi.get(j);
            if (aj) acc.xor_in(chain[j - 1 - d]);
        }
        out[d] = acc;
    }
    return out;
}

}  // namespace

std::optional<std::pair<F2Matrix, F2Matrix>>
commutator_decompose(const F2Matrix& a, Rng& rng) {
    if (a.rows() != a.cols()) throw F2Error("commutator_decompose: not square");
    const std::size_t n = a.rows();
    const auto a_inv_opt = inverse(a);
    if (!a_inv_opt) throw F2Error("commutator_decompose: input is singular");
    const F2Matrix& a_inv = *a_inv_opt;
    const F2Matrix id = F2Matrix::identity(n);

    if (a.is_identity()) return std::make_pair(id, id);

    constexpr int kAttempts = 256;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const F2Matrix x0 = random_matrix(n, n, rng);
        const F2Vector m = [&] {
            F2Vector v(n);
            for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1u);
            return v;
        }();
        if (m.is_zero()) continue;

        const F2Matrix m0 = mul(a_inv, x0);
        const F2Vector b2 = mul(a_inv, m);

        // Both pairs must be controllable so the rank-one updates stay cyclic.
        auto chain_x = krylov_chain(x0, m);
        auto chain_y = krylov_chain(m0, b2);
        std::vector<F2Vector> kx_cols(chain_x.begin(), chain_x.begin() + n);
        std::vector<F2Vector> ky_cols(chain_y.begin(), chain_y.begin() + n);
        const F2Matrix kx = cols_to_matrix(kx_cols, n);
        const F2Matrix ky = cols_to_matrix(ky_cols, n);
        const auto kx_inv = inverse(kx);
        if (!kx_inv) continue;
        const auto ky_inv = inverse(ky);
        if (!ky_inv) continue;

        const auto chi_x = charpoly_from_chain(chain_x, *kx_inv);
        const auto chi_y = charpoly_from_chain(chain_y, *ky_inv);
        if (!chi_x || !chi_y) continue;

        const auto adj_x = adjugate_vectors(chain_x, *chi_x);
        const auto adj_y = adjugate_vectors(chain_y, *chi_y);

        // charpoly(X0 + m w^T) = chi_x - w . adj_x[d] per degree d, and the
        // same for Y = A^-1 X. Matching them, plus the constant-term-1
        // condition (invertibility), is linear in w.
        F2Matrix sys(n + 1, n);
        F2Vector rhs(n + 1);
        for (std::size_t d = 0; d < n; ++d) {
            F2Vector rowv = adj_x[d];
            rowv.xor_in(adj_y[d]);
            sys.set_row(d, rowv);
            rhs.set(d, chi_x->get(d) ^ chi_y->get(d));
        }
        sys.set_row(n, adj_x[0]);
        rhs.set(n, chi_x->get(0) ^ 1u);

        const auto w = solve_linear(sys, rhs);
        if (!w) continue;

        // X = X0 + m w^T, Y = A^-1 X; cyclic with cyclic vectors m and A^-1 m.
        F2Matrix x = x0;
        for (std::size_t r = 0; r < n; ++r)
            if (m.get(r))
                for (std::size_t c = 0; c < n; ++c)
                    if (w->get(c)) x.set(r, c, !x.get(r, c));
        const F2Matrix y = mul(a_inv, x);

        const auto y_inv = inverse(y);
        const auto x_inv_chk = inverse(x);
        if (!y_inv || !x_inv_chk) continue;

        // Conjugator D with D^-1 Y D = X, built from the two Krylov bases.
        auto cx = krylov_chain(x, m);
        auto cy = krylov_chain(y, b2);
        std::vector<F2Vector> cx_cols(cx.begin(), cx.begin() + n);
        std::vector<F2Vector> cy_cols(cy.begin(), cy.begin() + n);
        const F2Matrix kxx = cols_to_matrix(cx_cols, n);
        const F2Matrix kyy = cols_to_matrix(cy_cols, n);
        const auto kxx_inv = inverse(kxx);
        if (!kxx_inv) continue;
        const F2Matrix d = mul(kyy, *kxx_inv);
        const auto d_inv = inverse(d);
        if (!d_inv) continue;

        const F2Matrix b = *y_inv;
        const auto b_inv = inverse(b);
        if (!b_inv) continue;

        // Certify D^-1 B^-1 D B = A exactly before returning.
        const F2Matrix recomposed = mul(*d_inv, mul(*b_inv, mul(d, b)));
        if (recomposed == a) return std::make_pair(b, d);
    }
    return std::nullopt;
}

}  // namespace gtsynth
