// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gtsynth {

// ------------------------------------------------------------------- Angle

Angle Angle::make(std::uint64_t numerator, std::uint32_t log2_denominator) {
    std::uint32_t k = log2_denominator;
    // Values live mod 2, i.e. numerator mod 2^(k+1).
    if (k + 1 < 64) numerator &= (std::uint64_t(1) << (k + 1)) - 1;
    while (k > 0 && (numerator & 1u) == 0) {
        numerator >>= 1;
        --k;
    }
    if (numerator == 0) k = 0;
    return Angle{numerator, k};
}

Angle Angle::negated() const {
    if (num == 0) return *this;
    const std::uint64_t mod = std::uint64_t(1) << (log2den + 1);
    return make(mod - num, log2den);
}

double Angle::value() const {
    return static_cast<double>(num) / std::ldexp(1.0, static_cast<int>(log2den));
}

// ------------------------------------------------------------ constructors

GczInstr GczInstr::make(std::vector<std::pair<std::uint32_t, std::uint32_t>> ps) {
    for (auto& p : ps) {
        if (p.first == p.second) throw F2Error("GCZ: pair on a single qubit");
        if (p.first > p.second) std::swap(p.first, p.second);
    }
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw F2Error("GCZ: duplicate pair");
    return GczInstr{std::move(ps)};
}

GtInstr GtInstr::make(std::vector<Term> terms) {
    for (auto& t : terms) {
        if (t.a == t.b) throw F2Error("GT: pair on a single qubit");
        if (t.a > t.b) std::swap(t.a, t.b);
    }
    std::sort(terms.begin(), terms.end(), [](const Term& l, const Term& r) {
        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].a == terms[i - 1].a && terms[i].b == terms[i - 1].b)
            throw F2Error("GT: duplicate pair");
    return GtInstr{std::move(terms)};
}

CxLayerInstr CxLayerInstr::make(std::vector<std::uint32_t> controls,
                                std::vector<std::uint32_t> targets,
                                F2Matrix matrix) {
    if (controls.empty() || targets.empty())
        throw F2Error("CXLayer: empty control or target region");
    if (matrix.rows() != controls.size() || matrix.cols() != targets.size())
        throw F2Error("CXLayer: matrix shape does not match regions");
    std::set<std::uint32_t> cs(controls.begin(), controls.end());
    std::set<std::uint32_t> ts(targets.begin(), targets.end());
    if (cs.size() != controls.size() || ts.size() != targets.size())
        throw F2Error("CXLayer: duplicate qubit in region");
    for (auto c : cs)
        if (ts.count(c)) throw F2Error("CXLayer: control/target overlap");
    return CxLayerInstr{std::move(controls), std::move(targets), std::move(matrix)};
}

std::vector<std::uint32_t> instruction_qubits(const Instruction& ins) {
    std::vector<std::uint32_t> q;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SqInstr>) {
                q.push_back(v.qubit);
            } else if constexpr (std::is_same_v<T, GczInstr>) {
                for (auto& p : v.pairs) { q.push_back(p.first); q.push_back(p.second); }
            } else if constexpr (std::is_same_v<T, GtInstr>) {
                for (auto& t : v.terms) { q.push_back(t.a); q.push_back(t.b); }
            } else if constexpr (std::is_same_v<T, CxLayerInstr>) {
                q.insert(q.end(), v.controls.begin(), v.controls.end());
                q.insert(q.end(), v.targets.begin(), v.targets.end());
            } else if constexpr (std::is_same_v<T, MeasureXInstr>) {
                q.push_back(v.qubit);
            } else if constexpr (std::is_same_v<T, ConditionalInstr>) {
                q.push_back(v.inner.qubit);
            }
        },
        ins);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    return q;
}

void Circuit::validate() const {
    if (num_data > num_qubits) throw F2Error("Circuit: num_data > num_qubits");
    std::set<std::uint32_t> measured;
    for (const auto& ins : instructions) {
        for (auto q : instruction_qubits(ins))
            if (q >= num_qubits) throw F2Error("Circuit: qubit index out of range");
        if (const auto* m = std::get_if<MeasureXInstr>(&ins)) {
            if (m->cbit >= num_cbits) throw F2Error("Circuit: cbit out of range");
            measured.insert(m->cbit);
        } else if (const auto* c = std::get_if<ConditionalInstr>(&ins)) {
            if (c->cbit >= num_cbits) throw F2Error("Circuit: cbit out of range");
            if (!measured.count(c->cbit))
                throw F2Error("Circuit: conditional on a label with no earlier MeasureX");
        }
    }
}

std::size_t gt_cost(const Circuit& c) {
    std::size_t n = 0;
    for (const auto& ins : c.instructions)
        if (std::holds_alternative<GczInstr>(ins) || std::holds_alternative<GtInstr>(ins) ||
            std::holds_alternative<CxLayerInstr>(ins))
            ++n;
    return n;
}

std::vector<Instruction> lower_cx_layer(const CxLayerInstr& layer) {
    std::vector<Instruction> out;
    for (auto t : layer.targets) out.push_back(SqInstr{t, SqGate::h()});
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::size_t i = 0; i < layer.controls.size(); ++i)
        for (std::size_t j = 0; j < layer.targets.size(); ++j)
            if (layer.matrix.get(i, j))
                pairs.emplace_back(layer.controls[i], layer.targets[j]);
    out.push_back(GczInstr::make(std::move(pairs)));
    for (auto t : layer.targets) out.push_back(SqInstr{t, SqGate::h()});
    return out;
}

Circuit lowered(const Circuit& c) {
    Circuit out(c.num_qubits, c.num_data, c.num_cbits);
    for (const auto& ins : c.instructions) {
        if (const auto* l = std::get_if<CxLayerInstr>(&ins)) {
            for (auto& i : lower_cx_layer(*l)) out.push(std::move(i));
        } else {
            out.push(ins);
        }
    }
    return out;
}

// ----------------------------------------------------------------- merging

namespace {

bool mergeable(const CxLayerInstr& a, const CxLayerInstr& b) {
    std::set<std::uint32_t> controls(a.controls.begin(), a.controls.end());
    controls.insert(b.controls.begin(), b.controls.end());
    std::set<std::uint32_t> targets(a.targets.begin(), a.targets.end());
    targets.insert(b.targets.begin(), b.targets.end());
    for (auto c : controls)
        if (targets.count(c)) return false;
    return true;
}

CxLayerInstr merge_layers(const CxLayerInstr& a, const CxLayerInstr& b) {
    std::vector<std::uint32_t> controls(a.controls.begin(), a.controls.end());
    controls.insert(controls.end(), b.controls.begin(), b.controls.end());
    std::sort(controls.begin(), controls.end());
    controls.erase(std::unique(controls.begin(), controls.end()), controls.end());
    std::vector<std::uint32_t> targets(a.targets.begin(), a.targets.end());
    targets.insert(targets.end(), b.targets.begin(), b.targets.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    std::map<std::uint32_t, std::size_t> cidx, tidx;
    for (std::size_t i = 0; i < controls.size(); ++i) cidx[controls[i]] = i;
    for (std::size_t j = 0; j < targets.size(); ++j) tidx[targets[j]] = j;

    F2Matrix m(controls.size(), targets.size());
    auto add = [&](const CxLayerInstr& l) {
        for (std::size_t i = 0; i < l.controls.size(); ++i)
            for (std::size_t j = 0; j < l.targets.size(); ++j)
                if (l.matrix.get(i, j)) {
                    const auto r = cidx[l.controls[i]], c = tidx[l.targets[j]];
                    m.set(r, c, !m.get(r, c));
                }
    };
    add(a);
    add(b);
    return CxLayerInstr::make(std::move(controls), std::move(targets), std::move(m));
}

}  // namespace

Circuit optimize_merges(const Circuit& c) {
    std::vector<Instruction> ins = c.instructions;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < ins.size(); ++i) {
            const auto* first = std::get_if<CxLayerInstr>(&ins[i]);
            if (!first) continue;
            std::set<std::uint32_t> first_qubits;
            for (auto q : instruction_qubits(ins[i])) first_qubits.insert(q);

            // Scan past single-qubit gates on qubits neither layer touches.
            std::size_t j = i + 1;
            std::vector<std::uint32_t> interposed;
            bool found = false;
            for (; j < ins.size(); ++j) {
                if (const auto* sq = std::get_if<SqInstr>(&ins[j])) {
                    if (first_qubits.count(sq->qubit)) break;
                    interposed.push_back(sq->qubit);
                    continue;
                }
                if (std::holds_alternative<CxLayerInstr>(ins[j])) found = true;
                break;
            }
            if (!found) continue;
            const auto& second = std::get<CxLayerInstr>(ins[j]);
            if (!mergeable(*first, second)) continue;
            bool blocked = false;
            for (auto q : instruction_qubits(ins[j]))
                if (std::find(interposed.begin(), interposed.end(), q) != interposed.end())
                    blocked = true;
            if (blocked) continue;

            Instruction merged = merge_layers(*first, second);
            ins[i] = std::move(merged);
            ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(j));
            changed = true;
            break;
        }
    }
    Circuit out(c.num_qubits, c.num_data, c.num_cbits);
    out.instructions = std::move(ins);
    return out;
}

// ----------------------------------------------------------- serialization

namespace {

const char* sq_name(SqGate::Kind k) {
    switch (k) {
        case SqGate::Kind::H: return "H";
        case SqGate::Kind::X: return "X";
        case SqGate::Kind::Z: return "Z";
        case SqGate::Kind::S: return "S";
        case SqGate::Kind::Sdg: return "SDG";
        case SqGate::Kind::ZPow: return "ZPOW";
        case SqGate::Kind::XPow: return "XPOW";
        case SqGate::Kind::C24: return "C24";
    }
    return "?";
}

void write_sq(std::ostringstream& os, const SqInstr& sq) {
    os << "SQ " << sq.qubit << ' ' << sq_name(sq.gate.kind);
    if (sq.gate.kind == SqGate::Kind::ZPow || sq.gate.kind == SqGate::Kind::XPow)
        os << ' ' << sq.gate.angle.num << ' ' << sq.gate.angle.log2den;
    if (sq.gate.kind == SqGate::Kind::C24) os << ' ' << sq.gate.c24;
}

std::string hex_row(const F2Matrix& m, std::size_t r) {
    // Bit j of the row value corresponds to target column j.
    std::uint64_t acc = 0;
    std::string out;
    std::size_t bits = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.get(r, j)) acc |= std::uint64_t(1) << (j % 4);
        if (j % 4 == 3 || j + 1 == m.cols()) {
            out += "0123456789abcdef"[acc];
            acc = 0;
            ++bits;
        }
    }
    // Digits are emitted low nibble first.
    return out;
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t col = 1;

    explicit Cursor(const std::string& t) : text(t) {}

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') { ++line; col = 1; } else { ++col; }
        ++pos;
    }
    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    std::string token() {
        skip_spaces();
        if (eof() || peek() == '\n') fail("unexpected end of line");
        std::size_t start = pos;
        while (!eof() && peek() != ' ' && peek() != '\t' && peek() != '\n' && peek() != '\r')
            advance();
        return text.substr(start, pos - start);
    }
    bool line_has_more() {
        skip_spaces();
        return !eof() && peek() != '\n';
    }
    void end_line() {
        skip_spaces();
        if (!eof()) {
            if (peek() != '\n') fail("trailing characters");
            advance();
        }
    }
    std::uint64_t number() {
        const std::string t = token();
        try {
            std::size_t used = 0;
            std::uint64_t v = std::stoull(t, &used);
            if (used != t.size()) fail("bad number '" + t + "'");
            return v;
        } catch (const ParseError&) {
            throw;
        } catch (...) {
            fail("bad number '" + t + "'");
        }
    }
};

std::vector<std::uint32_t> parse_qubit_list(Cursor& cur) {
    const std::string t = cur.token();
    std::vector<std::uint32_t> out;
    std::size_t i = 0;
    while (i < t.size()) {
        std::size_t j = t.find(',', i);
        if (j == std::string::npos) j = t.size();
        try {
            out.push_back(static_cast<std::uint32_t>(std::stoul(t.substr(i, j - i))));
        } catch (...) {
            cur.fail("bad qubit list '" + t + "'");
        }
        i = j + 1;
    }
    if (out.empty()) cur.fail("empty qubit list");
    return out;
}

Angle parse_angle_fraction(Cursor& cur, const std::string& t) {
    const auto slash = t.find('/');
    if (slash == std::string::npos) cur.fail("bad angle '" + t + "'");
    try {
        const std::uint64_t num = std::stoull(t.substr(0, slash));
        const std::uint32_t den = static_cast<std::uint32_t>(std::stoul(t.substr(slash + 1)));
        const Angle a = Angle::make(num, den);
        if (a.num != num || a.log2den != den) cur.fail("angle not in reduced form: " + t);
        return a;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        cur.fail("bad angle '" + t + "'");
    }
}

SqGate parse_sq_gate(Cursor& cur) {
    const std::string g = cur.token();
    if (g == "H") return SqGate::h();
    if (g == "X") return SqGate::x();
    if (g == "Z") return SqGate::z();
    if (g == "S") return SqGate::s();
    if (g == "SDG") return SqGate::sdg();
    if (g == "ZPOW" || g == "XPOW") {
        const std::uint64_t num = cur.number();
        const std::uint32_t den = static_cast<std::uint32_t>(cur.number());
        const Angle a = Angle::make(num, den);
        if (a.num != num || a.log2den != den) cur.fail("angle not in reduced form");
        return g == "ZPOW" ? SqGate::zpow(a) : SqGate::xpow(a);
    }
    if (g == "C24") {
        const std::uint64_t idx = cur.number();
        if (idx >= 24) cur.fail("C24 index out of range");
        return SqGate::c24_gate(static_cast<int>(idx));
    }
    cur.fail("unknown single-qubit gate '" + g + "'");
}

}  // namespace

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.num_qubits << " data " << c.num_data << " cbits "
       << c.num_cbits << '\n';
    for (const auto& ins : c.instructions) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, SqInstr>) {
                    write_sq(os, v);
                } else if constexpr (std::is_same_v<T, GczInstr>) {
                    os << "GCZ";
                    for (auto& p : v.pairs) os << " (" << p.first << ',' << p.second << ')';
                } else if constexpr (std::is_same_v<T, GtInstr>) {
                    os << "GT";
                    for (auto& t : v.terms)
                        os << " (" << t.a << ',' << t.b << "):" << t.angle.num << '/'
                           << t.angle.log2den;
                } else if constexpr (std::is_same_v<T, CxLayerInstr>) {
                    os << "CXL controls ";
                    for (std::size_t i = 0; i < v.controls.size(); ++i)
                        os << (i ? "," : "") << v.controls[i];
                    os << " targets ";
                    for (std::size_t i = 0; i < v.targets.size(); ++i)
                        os << (i ? "," : "") << v.targets[i];
                    os << " matrix ";
                    for (std::size_t r = 0; r < v.matrix.rows(); ++r)
                        os << (r ? "," : "") << hex_row(v.matrix, r);
                } else if constexpr (std::is_same_v<T, MeasureXInstr>) {
                    os << "MX " << v.qubit << " -> " << v.cbit;
                } else if constexpr (std::is_same_v<T, ConditionalInstr>) {
                    os << "IF " << v.cbit << ' ';
                    write_sq(os, v.inner);
                }
            },
            ins);
        os << '\n';
    }
    return os.str();
}

Circuit deserialize(const std::string& text) {
    Cursor cur(text);
    cur.skip_spaces();
    if (cur.token() != "qubits") cur.fail("expected 'qubits' header");
    Circuit c;
    c.num_qubits = cur.number();
    if (cur.token() != "data") cur.fail("expected 'data'");
    c.num_data = cur.number();
    if (cur.token() != "cbits") cur.fail("expected 'cbits'");
    c.num_cbits = cur.number();
    cur.end_line();

    while (!cur.eof()) {
        cur.skip_spaces();
        if (!cur.eof() && cur.peek() == '\n') { cur.advance(); continue; }
        if (cur.eof()) break;
        const std::string op = cur.token();
        if (op == "SQ") {
            const auto q = static_cast<std::uint32_t>(cur.number());
            c.push(SqInstr{q, parse_sq_gate(cur)});
        } else if (op == "GCZ") {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
            while (cur.line_has_more()) {
                const std::string t = cur.token();
                if (t.size() < 5 || t.front() != '(' || t.back() != ')')
                    cur.fail("bad pair '" + t + "'");
                const auto comma = t.find(',');
                if (comma == std::string::npos) cur.fail("bad pair '" + t + "'");
                try {
                    pairs.emplace_back(std::stoul(t.substr(1, comma - 1)),
                                       std::stoul(t.substr(comma + 1, t.size() - comma - 2)));
                } catch (...) {
                    cur.fail("bad pair '" + t + "'");
                }
            }
            c.push(GczInstr::make(std::move(pairs)));
        } else if (op == "GT") {
            std::vector<GtInstr::Term> terms;
            while (cur.line_has_more()) {
                const std::string t = cur.token();
                const auto close = t.find(')');
                const auto colon = t.find(':');
                if (t.front() != '(' || close == std::string::npos ||
                    colon == std::string::npos || colon < close)
                    cur.fail("bad GT term '" + t + "'");
                const auto comma = t.find(',');
                GtInstr::Term term;
                try {
                    term.a = static_cast<std::uint32_t>(std::stoul(t.substr(1, comma - 1)));
                    term.b = static_cast<std::uint32_t>(
                        std::stoul(t.substr(comma + 1, close - comma - 1)));
                } catch (...) {
                    cur.fail("bad GT term '" + t + "'");
                }
                term.angle = parse_angle_fraction(cur, t.substr(colon + 1));
                terms.push_back(term);
            }
            c.push(GtInstr::make(std::move(terms)));
        } else if (op == "CXL") {
            if (cur.token() != "controls") cur.fail("expected 'controls'");
            auto controls = parse_qubit_list(cur);
            if (cur.token() != "targets") cur.fail("expected 'targets'");
            auto targets = parse_qubit_list(cur);
            if (cur.token() != "matrix") cur.fail("expected 'matrix'");
            const std::string rows = cur.token();
            F2Matrix m(controls.size(), targets.size());
            std::size_t r = 0, i = 0;
            while (i <= rows.size() && r < controls.size()) {
                std::size_t j = rows.find(',', i);
                if (j == std::string::npos) j = rows.size();
                const std::string digits = rows.substr(i, j - i);
                if (digits.size() != (targets.size() + 3) / 4)
                    cur.fail("matrix row has wrong digit count");
                for (std::size_t d = 0; d < digits.size(); ++d) {
                    const char ch = digits[d];
                    int v = -1;
                    if (ch >= '0' && ch <= '9') v = ch - '0';
                    else if (ch >= 'a' && ch <= 'f') v = 10 + ch - 'a';
                    else cur.fail("bad hex digit");
                    for (int b = 0; b < 4; ++b) {
                        const std::size_t col = d * 4 + static_cast<std::size_t>(b);
                        if (col < targets.size() && ((v >> b) & 1)) m.set(r, col, true);
                        else if (col >= targets.size() && ((v >> b) & 1))
                            cur.fail("matrix row has bits beyond targets");
                    }
                }
                ++r;
                i = j + 1;
            }
            if (r != controls.size()) cur.fail("matrix row count mismatch");
            c.push(CxLayerInstr::make(std::move(controls), std::move(targets), std::move(m)));
        } else if (op == "MX") {
            MeasureXInstr m;
            m.qubit = static_cast<std::uint32_t>(cur.number());
            if (cur.token() != "->") cur.fail("expected '->'");
            m.cbit = static_cast<std::uint32_t>(cur.number());
            c.push(m);
        } else if (op == "IF") {
            ConditionalInstr ci;
            ci.cbit = static_cast<std::uint32_t>(cur.number());
            if (cur.token() != "SQ") cur.fail("expected 'SQ' after IF label");
            ci.inner.qubit = static_cast<std::uint32_t>(cur.number());
            ci.inner.gate = parse_sq_gate(cur);
            c.push(ci);
        } else {
            cur.fail("unknown instruction '" + op + "'");
        }
        cur.end_line();
    }
    c.validate();
    return c;
}

// ------------------------------------------------------------- JSON mirror

namespace {

using nlohmann::json;

json angle_json(const Angle& a) { return json{{"num", a.num}, {"log2den", a.log2den}}; }

Angle angle_from_json(const json& j) {
    const Angle a = Angle::make(j.at("num").get<std::uint64_t>(),
                                j.at("log2den").get<std::uint32_t>());
    return a;
}

json sq_json(const SqInstr& s) {
    json j{{"op", "SQ"}, {"q", s.qubit}, {"gate", sq_name(s.gate.kind)}};
    if (s.gate.kind == SqGate::Kind::ZPow || s.gate.kind == SqGate::Kind::XPow)
        j["angle"] = angle_json(s.gate.angle);
    if (s.gate.kind == SqGate::Kind::C24) j["index"] = s.gate.c24;
    return j;
}

SqInstr sq_from_json(const json& j) {
    SqInstr s;
    s.qubit = j.at("q").get<std::uint32_t>();
    const std::string g = j.at("gate").get<std::string>();
    if (g == "H") s.gate = SqGate::h();
    else if (g == "X") s.gate = SqGate::x();
    else if (g == "Z") s.gate = SqGate::z();
    else if (g == "S") s.gate = SqGate::s();
    else if (g == "SDG") s.gate = SqGate::sdg();
    else if (g == "ZPOW") s.gate = SqGate::zpow(angle_from_json(j.at("angle")));
    else if (g == "XPOW") s.gate = SqGate::xpow(angle_from_json(j.at("angle")));
    else if (g == "C24") s.gate = SqGate::c24_gate(j.at("index").get<int>());
    else throw ParseError("unknown gate '" + g + "'", 0, 0);
    return s;
}

}  // namespace

std::string serialize_json(const Circuit& c) {
    json j;
    j["qubits"] = c.num_qubits;
    j["data"] = c.num_data;
    j["cbits"] = c.num_cbits;
    j["instructions"] = json::array();
    for (const auto& ins : c.instructions) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, SqInstr>) {
                    j["instructions"].push_back(sq_json(v));
                } else if constexpr (std::is_same_v<T, GczInstr>) {
                    json pairs = json::array();
                    for (auto& p : v.pairs) pairs.push_back({p.first, p.second});
                    j["instructions"].push_back({{"op", "GCZ"}, {"pairs", pairs}});
                } else if constexpr (std::is_same_v<T, GtInstr>) {
                    json terms = json::array();
                    for (auto& t : v.terms)
                        terms.push_back({{"a", t.a}, {"b", t.b}, {"angle", angle_json(t.angle)}});
                    j["instructions"].push_back({{"op", "GT"}, {"terms", terms}});
                } else if constexpr (std::is_same_v<T, CxLayerInstr>) {
                    json rows = json::array();
                    for (std::size_t r = 0; r < v.matrix.rows(); ++r) {
                        json row = json::array();
                        for (std::size_t cidx = 0; cidx < v.matrix.cols(); ++cidx)
                            row.push_back(v.matrix.get(r, cidx) ? 1 : 0);
                        rows.push_back(row);
                    }
                    j["instructions"].push_back({{"op", "CXL"},
                                                 {"controls", v.controls},
                                                 {"targets", v.targets},
                                                 {"matrix", rows}});
                } else if constexpr (std::is_same_v<T, MeasureXInstr>) {
                    j["instructions"].push_back(
                        {{"op", "MX"}, {"q", v.qubit}, {"cbit", v.cbit}});
                } else if constexpr (std::is_same_v<T, ConditionalInstr>) {
                    j["instructions"].push_back(
                        {{"op", "IF"}, {"cbit", v.cbit}, {"inner", sq_json(v.inner)}});
                }
            },
            ins);
    }
    return j.dump(2);
}

Circuit deserialize_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), 0, static_cast<std::size_t>(e.byte));
    }
    try {
        Circuit c;
        c.num_qubits = j.at("qubits").get<std::size_t>();
        c.num_data = j.at("data").get<std::size_t>();
        c.num_cbits = j.at("cbits").get<std::size_t>();
        for (const auto& ji : j.at("instructions")) {
            const std::string op = ji.at("op").get<std::string>();
            if (op == "SQ") {
                c.push(sq_from_json(ji));
            } else if (op == "GCZ") {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
                for (const auto& p : ji.at("pairs"))
                    pairs.emplace_back(p.at(0).get<std::uint32_t>(),
                                       p.at(1).get<std::uint32_t>());
                c.push(GczInstr::make(std::move(pairs)));
            } else if (op == "GT") {
                std::vector<GtInstr::Term> terms;
                for (const auto& t : ji.at("terms"))
                    terms.push_back({t.at("a").get<std::uint32_t>(),
                                     t.at("b").get<std::uint32_t>(),
                                     angle_from_json(t.at("angle"))});
                c.push(GtInstr::make(std::move(terms)));
            } else if (op == "CXL") {
                auto controls = ji.at("controls").get<std::vector<std::uint32_t>>();
                auto targets = ji.at("targets").get<std::vector<std::uint32_t>>();
                F2Matrix m(controls.size(), targets.size());
                const auto& rows = ji.at("matrix");
                for (std::size_t r = 0; r < controls.size(); ++r)
                    for (std::size_t cc = 0; cc < targets.size(); ++cc)
                        if (rows.at(r).at(cc).get<int>()) m.set(r, cc, true);
                c.push(CxLayerInstr::make(std::move(controls), std::move(targets),
                                          std::move(m)));
            } else if (op == "MX") {
                c.push(MeasureXInstr{ji.at("q").get<std::uint32_t>(),
                                     ji.at("cbit").get<std::uint32_t>()});
            } else if (op == "IF") {
                c.push(ConditionalInstr{ji.at("cbit").get<std::uint32_t>(),
                                        sq_from_json(ji.at("inner"))});
            } else {
                throw ParseError("unknown op '" + op + "'", 0, 0);
            }
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0, 0);
    }
}

}  // namespace gtsynth
