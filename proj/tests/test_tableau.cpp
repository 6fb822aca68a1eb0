// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <set>

#include "gtsynth/sim.hpp"
#include "gtsynth/tableau.hpp"

using namespace gtsynth;
using Cplx = std::complex<double>;

namespace {

// Dense check that U P = Q U for the claimed image Q of P, avoiding any
// matrix-matrix product: both sides are row/column permutations with phases.
bool image_consistent(const std::vector<std::vector<Cplx>>& u, const PauliString& p,
                      const PauliString& q) {
    const std::size_t n = p.size();
    const std::size_t dim = std::size_t(1) << n;
    std::size_t px = 0, pz = 0, qx = 0, qz = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.x.get(i)) px |= std::size_t(1) << i;
        if (p.z.get(i)) pz |= std::size_t(1) << i;
        if (q.x.get(i)) qx |= std::size_t(1) << i;
        if (q.z.get(i)) qz |= std::size_t(1) << i;
    }
    const Cplx pip = std::pow(Cplx(0, 1), p.phase);
    const Cplx piq = std::pow(Cplx(0, 1), q.phase);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            // (U P)_{r,c} = U_{r, c^px} * i^gp * (-1)^{pz.(c^px)}
            const Cplx lhs = u[r][c ^ px] * pip *
                             ((std::popcount((c ^ px) & pz) & 1) ? -1.0 : 1.0);
            // (Q U)_{r,c} = i^gq * (-1)^{qz.(r^qx)} ... Q|b> = i^g (-1)^{z.b}|b^x>
            const Cplx rhs = piq * ((std::popcount((r ^ qx) & qz) & 1) ? -1.0 : 1.0) *
                             u[r ^ qx][c];
            if (std::abs(lhs - rhs) > 1e-9) return false;
        }
    return true;
}

bool tableau_matches_dense(const Circuit& c) {
    const CliffordTableau t = CliffordTableau::of_circuit(c);
    const auto u = extract_unitary(c);
    const std::size_t n = c.num_qubits;
    for (std::size_t qb = 0; qb < n; ++qb) {
        if (!image_consistent(u, PauliString::x_op(n, qb), t.x_image(qb))) return false;
        if (!image_consistent(u, PauliString::z_op(n, qb), t.z_image(qb))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("pauli string products track phases exactly") {
    const std::size_t n = 1;
    PauliString x = PauliString::x_op(n, 0);
    PauliString z = PauliString::z_op(n, 0);
    const PauliString xz = x.times(z);
    CHECK(xz.phase == 0);  // X Z stored canonically
    const PauliString zx = z.times(x);
    CHECK(zx.phase == 2);  // Z X = - X Z
    CHECK(!x.commutes(z));
}

TEST_CASE("C24 table basics") {
    CHECK(c24_mul(c24_h(), c24_h()) == c24_identity());
    CHECK(c24_mul(c24_s(), c24_sdg()) == c24_identity());
    CHECK(c24_mul(c24_s(), c24_s()) == c24_z());
    CHECK(c24_inv(c24_h()) == c24_h());
    CHECK(c24_transpose(c24_h()) == c24_h());
    CHECK(c24_transpose(c24_s()) == c24_s());
    for (int g = 0; g < 24; ++g) {
        CHECK(c24_mul(g, c24_inv(g)) == c24_identity());
        CHECK(c24_transpose(c24_transpose(g)) == g);
    }
}

TEST_CASE("H swaps X and Z images") {
    CliffordTableau t = CliffordTableau::identity(2);
    t.apply_h(0);
    CHECK(t.x_image(0) == PauliString::z_op(2, 0));
    CHECK(t.z_image(0) == PauliString::x_op(2, 0));
    CHECK(t.x_image(1) == PauliString::x_op(2, 1));
}

TEST_CASE("CZ applied twice is the identity") {
    CliffordTableau t = CliffordTableau::identity(2);
    t.apply_cz(0, 1);
    t.apply_cz(0, 1);
    CHECK(t == CliffordTableau::identity(2));
}

TEST_CASE("tableau agrees with dense conjugation on random circuits") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 4;  // up to 5 qubits
        Circuit c = random_clifford_circuit(n, rng);
        CHECK(tableau_matches_dense(c));
    }
}

TEST_CASE("apply_instruction covers the Clifford gate set and rejects others") {
    CliffordTableau t = CliffordTableau::identity(3);
    Circuit c(3, 3);
    c.push(SqInstr{0, SqGate::zpow(Angle::one())});
    c.push(SqInstr{1, SqGate::zpow(Angle::make(1, 1))});
    c.push(SqInstr{2, SqGate::xpow(Angle::make(3, 1))});
    c.push(SqInstr{0, SqGate::c24_gate(c24_h())});
    for (const auto& ins : c.instructions) t.apply_instruction(ins);
    CHECK(t.is_valid());

    CHECK_THROWS_AS(t.apply_instruction(SqInstr{0, SqGate::zpow(Angle::make(1, 2))}),
                    NonCliffordError);
    CHECK_THROWS_AS(
        t.apply_instruction(GtInstr::make({{0, 1, Angle::make(1, 1)}})),
        NonCliffordError);
    CHECK_THROWS_AS(t.apply_instruction(MeasureXInstr{0, 0}), NonCliffordError);
}

TEST_CASE("random tableaus are symplectic") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const CliffordTableau t = random_clifford(1 + rng() % 8, rng);
        CHECK(t.is_valid());
    }
}

TEST_CASE("random single-qubit tableaus cover all 24 Cliffords") {
    Rng rng(6);
    std::set<std::string> seen;
    for (int trial = 0; trial < 1500 && seen.size() < 24; ++trial)
        seen.insert(random_clifford(1, rng).to_text());
    CHECK(seen.size() == 24);
}

TEST_CASE("two-qubit draws lie in the brute-force symplectic group") {
    // Enumerate Sp(4,2) over all 16-bit matrices.
    std::set<std::vector<bool>> sp;
    F2Matrix omega(4, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        omega.set(i, 2 + i, true);
        omega.set(2 + i, i, true);
    }
    for (unsigned bits = 0; bits < (1u << 16); ++bits) {
        F2Matrix m(4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                if ((bits >> (4 * r + c)) & 1u) m.set(r, c, true);
        if (mul(m, mul(omega, m.transposed())) == omega) {
            std::vector<bool> key;
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c) key.push_back(m.get(r, c));
            sp.insert(key);
        }
    }
    CHECK(sp.size() == 720);

    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const F2Matrix s = random_clifford(2, rng).symplectic();
        std::vector<bool> key;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) key.push_back(s.get(r, c));
        CHECK(sp.count(key) == 1);
    }
}

TEST_CASE("compose and inverse") {
    Rng rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        const CliffordTableau t = random_clifford(n, rng);
        const CliffordTableau inv = t.inverted();
        CHECK(inv.compose_after(t) == CliffordTableau::identity(n));
        CHECK(t.compose_after(inv) == CliffordTableau::identity(n));
    }
}

TEST_CASE("tableau text round-trip") {
    Rng rng(14);
    const CliffordTableau t = random_clifford(4, rng);
    CHECK(CliffordTableau::from_text(t.to_text()) == t);
    CHECK_THROWS_AS(CliffordTableau::from_text("garbage"), ParseError);
}

TEST_CASE("layered decomposition: identity and bare CZ") {
    const CliffordTableau id = CliffordTableau::identity(3);
    const LayeredClifford lc = layered_decompose(id);
    CHECK(recompose(lc) == id);
    CHECK(rank(lc.cx_matrix) == 3);

    CliffordTableau cz = CliffordTableau::identity(3);
    cz.apply_cz(0, 1);
    const LayeredClifford lc2 = layered_decompose(cz);
    CHECK(recompose(lc2) == cz);
}

TEST_CASE("layered decomposition recomposes exactly on random tableaus") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng() % 10;  // 3..12
        const CliffordTableau t = random_clifford(n, rng);
        const LayeredClifford lc = layered_decompose(t);
        CHECK(recompose(lc) == t);
        CHECK(rank(lc.cx_matrix) == n);
        CHECK(lc.cz1.is_symmetric());
        CHECK(lc.cz2.is_symmetric());
        for (std::size_t q = 0; q < n; ++q) {
            CHECK(!lc.cz1.get(q, q));
            CHECK(!lc.cz2.get(q, q));
        }
    }
}

TEST_CASE("layered decomposition handles single qubits") {
    Rng rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const CliffordTableau t = random_clifford(1, rng);
        CHECK(recompose(layered_decompose(t)) == t);
    }
}

TEST_CASE("stabilizer group canonical comparison") {
    Rng rng(3);
    const CliffordTableau t = random_clifford(4, rng);
    StabilizerGroup a, b;
    for (std::size_t q = 0; q < 4; ++q) a.gens.push_back(t.z_image(q));
    // Same group, generators multiplied together in a different order.
    b.gens = a.gens;
    b.gens[0] = b.gens[0].times(b.gens[1]);
    b.gens[2] = b.gens[2].times(b.gens[3]);
    CHECK(a.same_group(b));
    // Flip one sign: different group.
    StabilizerGroup c = a;
    c.gens[1].set_sign(!c.gens[1].sign());
    CHECK(!a.same_group(c));
}
