// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gtsynth/f2.hpp"

namespace gtsynth {

/// Parse failure for the text and JSON circuit formats.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error(msg + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

/// Exact dyadic angle numerator / 2^log2den, taken mod 2 (the exponent a of
/// CZ^a = e^{i pi a |11><11|} or of Z^a). Stored reduced: numerator odd or
/// zero, numerator < 2^(log2den+1).
struct Angle {
    std::uint64_t num = 0;
    std::uint32_t log2den = 0;

    static Angle make(std::uint64_t numerator, std::uint32_t log2_denominator);
    static Angle one() { return make(1, 0); }
    static Angle half() { return make(1, 1); }
    static Angle inv_pow2(std::uint32_t q) { return make(1, q); }  // 1/2^q

    Angle negated() const;
    Angle halved() const { return Angle{num, log2den + 1}; }
    bool is_zero() const { return num == 0; }
    bool is_integer() const { return log2den == 0; }
    double value() const;  // in [0, 2)

    bool operator==(const Angle&) const = default;
};

struct SqGate {
    enum class Kind { H, X, Z, S, Sdg, ZPow, XPow, C24 };
    Kind kind = Kind::H;
    Angle angle;      // ZPow / XPow only
    int c24 = 0;      // C24 only

    static SqGate h() { return {Kind::H, {}, 0}; }
    static SqGate x() { return {Kind::X, {}, 0}; }
    static SqGate z() { return {Kind::Z, {}, 0}; }
    static SqGate s() { return {Kind::S, {}, 0}; }
    static SqGate sdg() { return {Kind::Sdg, {}, 0}; }
    static SqGate zpow(Angle a) { return {Kind::ZPow, a, 0}; }
    static SqGate xpow(Angle a) { return {Kind::XPow, a, 0}; }
    static SqGate c24_gate(int idx) { return {Kind::C24, {}, idx}; }

    bool operator==(const SqGate&) const = default;
};

struct SqInstr {
    std::uint32_t qubit = 0;
    SqGate gate;
    bool operator==(const SqInstr&) const = default;
};

/// Layer of plain CZ gates on a set of unordered qubit pairs; one GT unit.
struct GczInstr {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // sorted, i<j

    static GczInstr make(std::vector<std::pair<std::uint32_t, std::uint32_t>> ps);
    bool operator==(const GczInstr&) const = default;
};

/// Global tunable gate: simultaneous CZ^a on qubit pairs with per-pair angles.
struct GtInstr {
    struct Term {
        std::uint32_t a = 0, b = 0;  // a < b
        Angle angle;
        bool operator==(const Term&) const = default;
    };
    std::vector<Term> terms;  // sorted by (a, b)

    static GtInstr make(std::vector<Term> terms);
    bool operator==(const GtInstr&) const = default;
};

/// CNOT layer: controls in one region, targets in a disjoint region,
/// matrix(i,j) = 1 meaning control i EXORs onto target j. One GT unit.
struct CxLayerInstr {
    std::vector<std::uint32_t> controls;
    std::vector<std::uint32_t> targets;
    F2Matrix matrix;  // |controls| x |targets|

    static CxLayerInstr make(std::vector<std::uint32_t> controls,
                             std::vector<std::uint32_t> targets,
                             F2Matrix matrix);
    bool operator==(const CxLayerInstr&) const = default;
};

struct MeasureXInstr {
    std::uint32_t qubit = 0;
    std::uint32_t cbit = 0;
    bool operator==(const MeasureXInstr&) const = default;
};

/// Classically controlled single-qubit gate.
struct ConditionalInstr {
    std::uint32_t cbit = 0;
    SqInstr inner;
    bool operator==(const ConditionalInstr&) const = default;
};

using Instruction = std::variant<SqInstr, GczInstr, GtInstr, CxLayerInstr,
                                 MeasureXInstr, ConditionalInstr>;

/// Qubits an instruction touches (controls, targets, pair members).
std::vector<std::uint32_t> instruction_qubits(const Instruction& ins);

/// Ordered instruction list over a sized register. Qubits [0, num_data) are
/// data, the rest ancilla. Value type; passes return new circuits.
struct Circuit {
    std::size_t num_qubits = 0;
    std::size_t num_data = 0;
    std::size_t num_cbits = 0;
    std::vector<Instruction> instructions;

    Circuit() = default;
    Circuit(std::size_t qubits, std::size_t data, std::size_t cbits = 0)
        : num_qubits(qubits), num_data(data), num_cbits(cbits) {}

    void push(Instruction ins) { instructions.push_back(std::move(ins)); }

    /// Throws F2Error if any invariant is violated (range, disjointness,
    /// conditional labels produced by an earlier MeasureX).
    void validate() const;

    bool operator==(const Circuit&) const = default;
};

/// Number of entangling units: GCZ + GT + CXLayer instructions. Single-qubit
/// and classical instructions are free.
std::size_t gt_cost(const Circuit& c);

/// H on targets, one GCZ with a pair per matrix 1-bit, H on targets.
std::vector<Instruction> lower_cx_layer(const CxLayerInstr& layer);

/// Replace every CXLayer by its lowered form.
Circuit lowered(const Circuit& c);

/// Merges adjacent CXLayer pairs whose combined controls and targets stay
/// disjoint (single-qubit gates on untouched qubits may sit between them).
/// Unitary-preserving; never increases gt_cost; idempotent.
Circuit optimize_merges(const Circuit& c);

std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& text);

std::string serialize_json(const Circuit& c);
Circuit deserialize_json(const std::string& text);

}  // namespace gtsynth
