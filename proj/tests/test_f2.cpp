// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "gtsynth/f2.hpp"

using namespace gtsynth;

namespace {

// Independent reference multiplier: triple loop mod 2.
F2Matrix naive_mul(const F2Matrix& a, const F2Matrix& b) {
    F2Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            int acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc ^= (a.get(i, k) && b.get(k, j)) ? 1 : 0;
            c.set(i, j, acc);
        }
    return c;
}

// Independent Gauss-Jordan on int vectors.
std::optional<std::vector<std::vector<int>>> naive_inverse(const F2Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<int>> m(n, std::vector<int>(2 * n, 0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m[r][c] = a.get(r, c);
        m[r][n + r] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t r = col; r < n; ++r)
            if (m[r][col]) { piv = r; break; }
        if (piv == n) return std::nullopt;
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < n; ++r)
            if (r != col && m[r][col])
                for (std::size_t c = 0; c < 2 * n; ++c) m[r][c] ^= m[col][c];
    }
    std::vector<std::vector<int>> inv(n, std::vector<int>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv[r][c] = m[r][n + c];
    return inv;
}

F2Matrix from_bits(std::size_t n, unsigned bits) {
    F2Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if ((bits >> (r * n + c)) & 1u) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_CASE("mul identity and transvection") {
    Rng rng(11);
    const F2Matrix a = random_matrix(3, 3, rng);
    CHECK(mul(F2Matrix::identity(3), a) == a);

    const F2Matrix t = F2Matrix::from_rows({{1, 1}, {0, 1}});
    CHECK(mul(t, t) == F2Matrix::identity(2));
}

TEST_CASE("mul matches naive reference on random pairs") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const F2Matrix a = random_matrix(6, 6, rng);
        const F2Matrix b = random_matrix(6, 6, rng);
        CHECK(mul(a, b) == naive_mul(a, b));
    }
    // rectangular shapes too
    const F2Matrix a = random_matrix(3, 5, rng);
    const F2Matrix b = random_matrix(5, 4, rng);
    CHECK(mul(a, b) == naive_mul(a, b));
    CHECK_THROWS_AS(mul(a, a), F2Error);
}

TEST_CASE("mul is associative and distributes over xor") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const F2Matrix a = random_matrix(5, 5, rng);
        const F2Matrix b = random_matrix(5, 5, rng);
        const F2Matrix c = random_matrix(5, 5, rng);
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, b ^ c) == (mul(a, b) ^ mul(a, c)));
    }
}

TEST_CASE("inverse basics") {
    CHECK(*inverse(F2Matrix::identity(4)) == F2Matrix::identity(4));
    const F2Matrix swap = F2Matrix::from_rows({{0, 1}, {1, 0}});
    CHECK(*inverse(swap) == swap);
    CHECK(!inverse(F2Matrix(3, 3)).has_value());
}

TEST_CASE("inverse cross-checked by independent elimination") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const F2Matrix a = random_invertible(8, rng);
        const auto inv = inverse(a);
        REQUIRE(inv.has_value());
        CHECK(mul(a, *inv) == F2Matrix::identity(8));
        CHECK(mul(*inv, a) == F2Matrix::identity(8));
        const auto ref = naive_inverse(a);
        REQUIRE(ref.has_value());
        for (std::size_t r = 0; r < 8; ++r)
            for (std::size_t c = 0; c < 8; ++c)
                CHECK(static_cast<int>(inv->get(r, c)) == (*ref)[r][c]);
    }
}

TEST_CASE("inverse postcondition exhaustive for n <= 3") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const unsigned total = 1u << (n * n);
        for (unsigned bits = 0; bits < total; ++bits) {
            const F2Matrix m = from_bits(n, bits);
            const auto inv = inverse(m);
            if (rank(m) == n) {
                REQUIRE(inv.has_value());
                CHECK(mul(m, *inv).is_identity());
            } else {
                CHECK(!inv.has_value());
            }
        }
    }
}

TEST_CASE("rank basics and brute-force cross-check") {
    CHECK(rank(F2Matrix(3, 3)) == 0);
    CHECK(rank(F2Matrix::identity(4)) == 4);

    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        F2Matrix m = random_matrix(5, 5, rng);
        m.set_row(4, m.row(2));  // force two equal rows
        CHECK(rank(m) <= 4);
        // Row-space enumeration over all 2^5 combinations.
        std::set<std::vector<bool>> span;
        for (unsigned mask = 0; mask < 32; ++mask) {
            F2Vector acc(5);
            for (std::size_t r = 0; r < 5; ++r)
                if ((mask >> r) & 1u) acc.xor_in(m.row(r));
            std::vector<bool> key;
            for (std::size_t c = 0; c < 5; ++c) key.push_back(acc.get(c));
            span.insert(key);
        }
        std::size_t dim = 0;
        while ((std::size_t(1) << dim) < span.size()) ++dim;
        CHECK(rank(m) == dim);
    }
}

TEST_CASE("solve_linear") {
    const F2Matrix id = F2Matrix::identity(5);
    Rng rng(3);
    F2Vector b(5);
    for (int i = 0; i < 5; ++i) b.set(i, rng() & 1);
    CHECK(*solve_linear(id, b) == b);

    F2Vector nz(3);
    nz.set(1, true);
    CHECK(!solve_linear(F2Matrix(3, 3), nz).has_value());

    for (int trial = 0; trial < 30; ++trial) {
        const F2Matrix a = random_matrix(10, 10, rng);
        F2Vector x(10);
        for (int i = 0; i < 10; ++i) x.set(i, rng() & 1);
        const F2Vector rhs = mul(a, x);
        const auto sol = solve_linear(a, rhs);
        REQUIRE(sol.has_value());
        CHECK(mul(a, *sol) == rhs);  // never a violating solution
    }
}

TEST_CASE("random_invertible") {
    Rng rng(1);
    CHECK(random_invertible(1, rng) == F2Matrix::identity(1));

    for (int trial = 0; trial < 1000; ++trial)
        CHECK(rank(random_invertible(6, rng)) == 6);

    // GL(2,2) has exactly six elements; enough draws hit all of them.
    std::set<std::vector<bool>> seen;
    for (int trial = 0; trial < 300; ++trial) {
        const F2Matrix m = random_invertible(2, rng);
        seen.insert({m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)});
    }
    std::size_t brute = 0;
    for (unsigned bits = 0; bits < 16; ++bits)
        if (rank(from_bits(2, bits)) == 2) ++brute;
    CHECK(brute == 6);
    CHECK(seen.size() == 6);
}

TEST_CASE("commutator recomposes exactly") {
    Rng rng(97);
    SUBCASE("identity input") {
        const auto bd = commutator_decompose(F2Matrix::identity(4), rng);
        REQUIRE(bd.has_value());
        const auto [b, d] = *bd;
        const F2Matrix rec = mul(*inverse(d), mul(*inverse(b), mul(d, b)));
        CHECK(rec.is_identity());
    }
    SUBCASE("exhaustive over GL(3,2)") {
        int count = 0;
        for (unsigned bits = 0; bits < 512; ++bits) {
            const F2Matrix a = from_bits(3, bits);
            if (rank(a) != 3) continue;
            ++count;
            const auto bd = commutator_decompose(a, rng);
            REQUIRE_MESSAGE(bd.has_value(), "failed at bits=" << bits);
            const auto& [b, d] = *bd;
            const F2Matrix rec = mul(*inverse(d), mul(*inverse(b), mul(d, b)));
            CHECK(rec == a);
        }
        CHECK(count == 168);
    }
    SUBCASE("random large sizes") {
        for (std::size_t n : {8, 16, 33, 64}) {
            for (int trial = 0; trial < 8; ++trial) {
                const F2Matrix a = random_invertible(n, rng);
                const auto bd = commutator_decompose(a, rng);
                REQUIRE(bd.has_value());
                const auto& [b, d] = *bd;
                CHECK(mul(*inverse(d), mul(*inverse(b), mul(d, b))) == a);
            }
        }
    }
    SUBCASE("an order-2 element of GL(2,2) is not a commutator") {
        const F2Matrix a = F2Matrix::from_rows({{0, 1}, {1, 0}});
        CHECK(!commutator_decompose(a, rng).has_value());
    }
}
