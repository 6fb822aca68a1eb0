// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gtsynth/circuit.hpp"
#include "gtsynth/sim.hpp"
#include "gtsynth/verify.hpp"

using namespace gtsynth;

namespace {

Circuit random_circuit(Rng& rng, bool with_measurements) {
    const std::size_t n = 2 + rng() % 5;
    Circuit c(n, n, with_measurements ? 4 : 0);
    const std::size_t len = 1 + rng() % 12;
    std::uint32_t next_cbit = 0;
    for (std::size_t i = 0; i < len; ++i) {
        switch (rng() % (with_measurements ? 6 : 4)) {
            case 0: {
                const int kind = static_cast<int>(rng() % 8);
                SqGate g;
                switch (kind) {
                    case 0: g = SqGate::h(); break;
                    case 1: g = SqGate::x(); break;
                    case 2: g = SqGate::z(); break;
                    case 3: g = SqGate::s(); break;
                    case 4: g = SqGate::sdg(); break;
                    case 5: g = SqGate::zpow(Angle::make(rng() % 16, rng() % 4)); break;
                    case 6: g = SqGate::xpow(Angle::make(rng() % 16, rng() % 4)); break;
                    default: g = SqGate::c24_gate(static_cast<int>(rng() % 24));
                }
                c.push(SqInstr{static_cast<std::uint32_t>(rng() % n), g});
                break;
            }
            case 1: {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
                for (std::uint32_t a = 0; a < n; ++a)
                    for (std::uint32_t b = a + 1; b < n; ++b)
                        if (rng() % 3 == 0) pairs.emplace_back(a, b);
                c.push(GczInstr::make(std::move(pairs)));
                break;
            }
            case 2: {
                std::vector<GtInstr::Term> terms;
                for (std::uint32_t a = 0; a < n; ++a)
                    for (std::uint32_t b = a + 1; b < n; ++b)
                        if (rng() % 3 == 0)
                            terms.push_back({a, b, Angle::make(rng() % 8, rng() % 3)});
                c.push(GtInstr::make(std::move(terms)));
                break;
            }
            case 3: {
                const std::uint32_t split = 1 + rng() % (n - 1);
                std::vector<std::uint32_t> controls, targets;
                for (std::uint32_t q = 0; q < split; ++q) controls.push_back(q);
                for (std::uint32_t q = split; q < n; ++q) targets.push_back(q);
                F2Matrix m(controls.size(), targets.size());
                for (std::size_t r = 0; r < m.rows(); ++r)
                    for (std::size_t col = 0; col < m.cols(); ++col)
                        m.set(r, col, rng() & 1);
                c.push(CxLayerInstr::make(std::move(controls), std::move(targets),
                                          std::move(m)));
                break;
            }
            case 4: {
                if (next_cbit < 4)
                    c.push(MeasureXInstr{static_cast<std::uint32_t>(rng() % n),
                                         next_cbit++});
                break;
            }
            default: {
                if (next_cbit > 0)
                    c.push(ConditionalInstr{static_cast<std::uint32_t>(rng() % next_cbit),
                                            SqInstr{static_cast<std::uint32_t>(rng() % n),
                                                    SqGate::z()}});
                break;
            }
        }
    }
    return c;
}

}  // namespace

TEST_CASE("angles stay reduced and dyadic") {
    CHECK(Angle::make(2, 1) == Angle::one());
    CHECK(Angle::make(4, 2) == Angle::one());
    CHECK(Angle::make(0, 7).is_zero());
    CHECK(Angle::make(5, 1) == Angle::make(1, 1));  // 5/2 mod 2
    CHECK(Angle::one().negated() == Angle::one());
    CHECK(Angle::make(1, 1).negated() == Angle::make(3, 1));
    CHECK(Angle::make(1, 1).halved() == Angle::make(1, 2));
    CHECK(Angle::make(3, 2).value() == doctest::Approx(0.75));
}

TEST_CASE("gt_cost counts entangling instructions only") {
    Circuit c(4, 4);
    CHECK(gt_cost(c) == 0);
    for (int i = 0; i < 40; ++i) c.push(SqInstr{0, SqGate::h()});
    c.push(GczInstr::make({{0, 1}}));
    CHECK(gt_cost(c) == 1);
    c.push(GtInstr::make({{2, 3, Angle::make(1, 1)}}));
    F2Matrix m(1, 1);
    m.set(0, 0, true);
    c.push(CxLayerInstr::make({0}, {1}, std::move(m)));
    CHECK(gt_cost(c) == 3);
}

TEST_CASE("lower_cx_layer is the CNOT identity") {
    F2Matrix one(1, 1);
    one.set(0, 0, true);
    const auto instrs = lower_cx_layer(CxLayerInstr::make({0}, {1}, one));
    REQUIRE(instrs.size() == 3);
    Circuit lowered_c(2, 2), direct(2, 2);
    for (auto& i : instrs) lowered_c.push(i);
    F2Matrix m(1, 1);
    m.set(0, 0, true);
    direct.push(CxLayerInstr::make({0}, {1}, std::move(m)));
    const auto u1 = extract_unitary(lowered_c);
    const auto u2 = extract_unitary(direct);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c2 = 0; c2 < 4; ++c2)
            CHECK(std::abs(u1[r][c2] - u2[r][c2]) < 1e-12);
}

TEST_CASE("lower_cx_layer zero matrix is the identity overall") {
    const auto instrs = lower_cx_layer(CxLayerInstr::make({0}, {1, 2}, F2Matrix(1, 2)));
    Circuit c(3, 3);
    for (auto& i : instrs) c.push(i);
    const auto u = extract_unitary(c);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t col = 0; col < 8; ++col)
            CHECK(std::abs(u[r][col] - (r == col ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("dense all-ones 2x2 layer equals four CNOTs") {
    F2Matrix m(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.set(r, c, true);
    Circuit layer(4, 4);
    layer.push(CxLayerInstr::make({0, 1}, {2, 3}, std::move(m)));
    Circuit cnots(4, 4);
    F2Matrix one(1, 1);
    one.set(0, 0, true);
    for (auto [c0, t0] : {std::pair{0u, 2u}, {0u, 3u}, {1u, 2u}, {1u, 3u}}) {
        F2Matrix mm(1, 1);
        mm.set(0, 0, true);
        cnots.push(CxLayerInstr::make({c0}, {t0}, std::move(mm)));
    }
    const auto u1 = extract_unitary(lowered(layer));
    const auto u2 = extract_unitary(cnots);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c2 = 0; c2 < 16; ++c2)
            CHECK(std::abs(u1[r][c2] - u2[r][c2]) < 1e-9);
}

TEST_CASE("optimize_merges merges layers with a shared control region") {
    // X -> Y and X -> Z merge into one X -> Y u Z layer.
    F2Matrix m1(2, 1), m2(2, 1);
    m1.set(0, 0, true);
    m2.set(1, 0, true);
    Circuit c(4, 4);
    c.push(CxLayerInstr::make({0, 1}, {2}, std::move(m1)));
    c.push(CxLayerInstr::make({0, 1}, {3}, std::move(m2)));
    const Circuit merged = optimize_merges(c);
    CHECK(gt_cost(merged) == 1);
    const auto& layer = std::get<CxLayerInstr>(merged.instructions[0]);
    CHECK(layer.controls == std::vector<std::uint32_t>{0, 1});
    CHECK(layer.targets == std::vector<std::uint32_t>{2, 3});
}

TEST_CASE("optimize_merges leaves incompatible neighbours alone") {
    F2Matrix one(1, 1);
    one.set(0, 0, true);
    Circuit c(3, 3);
    F2Matrix a(1, 1), b(1, 1);
    a.set(0, 0, true);
    b.set(0, 0, true);
    c.push(CxLayerInstr::make({0}, {1}, std::move(a)));
    c.push(CxLayerInstr::make({1}, {2}, std::move(b)));
    CHECK(optimize_merges(c) == c);
}

TEST_CASE("optimize_merges preserves the unitary, never raises cost, idempotent") {
    Rng rng(19);
    int merged_something = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Circuit c = random_circuit(rng, false);
        const Circuit m = optimize_merges(c);
        CHECK(gt_cost(m) <= gt_cost(c));
        if (gt_cost(m) < gt_cost(c)) ++merged_something;
        CHECK(optimize_merges(m) == m);
        if (c.num_qubits <= 10) {
            const auto u1 = extract_unitary(c);
            const auto u2 = extract_unitary(m);
            std::vector<std::complex<double>> f1, f2;
            for (auto& row : u1) f1.insert(f1.end(), row.begin(), row.end());
            for (auto& row : u2) f2.insert(f2.end(), row.begin(), row.end());
            CHECK(phase_aligned_deviation(f2, f1) < 1e-9);
        }
    }
    CHECK(merged_something > 0);
}

TEST_CASE("serialization round-trips bit-exactly") {
    Circuit empty(3, 3);
    CHECK(deserialize(serialize(empty)) == empty);

    Circuit c(4, 2, 0);
    c.push(GtInstr::make({{0, 1, Angle::make(1, 1)}, {2, 3, Angle::make(3, 2)}}));
    const Circuit rt = deserialize(serialize(c));
    CHECK(rt == c);
    const auto& gt = std::get<GtInstr>(rt.instructions[0]);
    CHECK(gt.terms[0].angle == Angle::make(1, 1));
    CHECK(gt.terms[1].angle == Angle::make(3, 2));

    Rng rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const Circuit rc = random_circuit(rng, true);
        CHECK(deserialize(serialize(rc)) == rc);
        CHECK(deserialize_json(serialize_json(rc)) == rc);
    }
}

TEST_CASE("deserialize reports line and column on malformed input") {
    try {
        deserialize("qubits 3 data 3 cbits 0\nSQ 0 H\nBOGUS 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(deserialize("qubits x"), ParseError);
    CHECK_THROWS_AS(deserialize_json("{"), ParseError);
}

TEST_CASE("circuit validation") {
    Circuit c(2, 2, 1);
    c.push(ConditionalInstr{0, SqInstr{0, SqGate::z()}});
    CHECK_THROWS_AS(c.validate(), F2Error);  // label never measured

    Circuit ok(2, 2, 1);
    ok.push(MeasureXInstr{1, 0});
    ok.push(ConditionalInstr{0, SqInstr{0, SqGate::z()}});
    ok.validate();
}
