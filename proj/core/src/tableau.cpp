// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/tableau.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <map>
#include <sstream>

namespace gtsynth {

// ------------------------------------------------------------- PauliString

PauliString PauliString::x_op(std::size_t n, std::size_t q) {
    PauliString p(n);
    p.x.set(q, true);
    return p;
}

PauliString PauliString::z_op(std::size_t n, std::size_t q) {
    PauliString p(n);
    p.z.set(q, true);
    return p;
}

PauliString PauliString::times(const PauliString& o) const {
    // (i^g X^a Z^b)(i^h X^c Z^d) = i^(g+h) (-1)^(b.c) X^(a+c) Z^(b+d)
    PauliString r(size());
    r.phase = (phase + o.phase + 2 * static_cast<int>(z.dot(o.x))) & 3;
    r.x = x;
    r.x.xor_in(o.x);
    r.z = z;
    r.z.xor_in(o.z);
    return r;
}

bool PauliString::commutes(const PauliString& o) const {
    return (static_cast<int>(x.dot(o.z)) ^ static_cast<int>(z.dot(o.x))) == 0;
}

int PauliString::overlap() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < x.words().size(); ++w)
        c += std::popcount(x.words()[w] & z.words()[w]);
    return static_cast<int>(c & 3u);
}

bool PauliString::sign() const {
    const int ov = overlap();
    if (((phase - ov) & 1) != 0)
        throw NonCliffordError("PauliString: phase is not real relative to Hermitian form");
    return ((phase - ov) & 3) == 2;
}

void PauliString::set_sign(bool s) {
    phase = (overlap() + (s ? 2 : 0)) & 3;
}

// ------------------------------------------------- derived conjugation data
//
// Conjugation rules for the basic gates are derived once from dense 2x2/4x4
// matrices, so there are no hand-written sign tables to get wrong.

namespace {

using Cplx = std::complex<double>;

struct DenseMat {
    std::size_t d = 0;
    std::vector<Cplx> e;  // row-major

    static DenseMat eye(std::size_t d) {
        DenseMat m{d, std::vector<Cplx>(d * d, 0.0)};
        for (std::size_t i = 0; i < d; ++i) m.e[i * d + i] = 1.0;
        return m;
    }
    Cplx& at(std::size_t r, std::size_t c) { return e[r * d + c]; }
    Cplx at(std::size_t r, std::size_t c) const { return e[r * d + c]; }
};

DenseMat matmul(const DenseMat& a, const DenseMat& b) {
    DenseMat c{a.d, std::vector<Cplx>(a.d * a.d, 0.0)};
    for (std::size_t i = 0; i < a.d; ++i)
        for (std::size_t k = 0; k < a.d; ++k) {
            const Cplx v = a.at(i, k);
            if (std::abs(v) < 1e-14) continue;
            for (std::size_t j = 0; j < a.d; ++j) c.at(i, j) += v * b.at(k, j);
        }
    return c;
}

DenseMat dagger(const DenseMat& a) {
    DenseMat c{a.d, std::vector<Cplx>(a.d * a.d, 0.0)};
    for (std::size_t i = 0; i < a.d; ++i)
        for (std::size_t j = 0; j < a.d; ++j) c.at(i, j) = std::conj(a.at(j, i));
    return c;
}

DenseMat kron(const DenseMat& a, const DenseMat& b) {
    DenseMat c{a.d * b.d, std::vector<Cplx>(a.d * b.d * a.d * b.d, 0.0)};
    for (std::size_t i = 0; i < a.d; ++i)
        for (std::size_t j = 0; j < a.d; ++j)
            for (std::size_t k = 0; k < b.d; ++k)
                for (std::size_t l = 0; l < b.d; ++l)
                    c.at(i * b.d + k, j * b.d + l) = a.at(i, j) * b.at(k, l);
    return c;
}

DenseMat pauli1(bool x, bool z) {
    DenseMat m = DenseMat::eye(2);
    if (x) {
        DenseMat xm{2, {0, 1, 1, 0}};
        m = xm;
    }
    if (z) {
        DenseMat zm{2, {1, 0, 0, -1}};
        m = matmul(m, zm);  // X^x Z^z order
    }
    return m;
}

bool approx(const DenseMat& a, const DenseMat& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i)
        if (std::abs(a.e[i] - b.e[i]) > 1e-9) return false;
    return true;
}

struct ConjEntry {
    std::uint8_t x = 0, z = 0, dg = 0;  // image bits and i-phase increment
};

// Match m against i^dg X^x Z^z (single qubit).
ConjEntry match1(const DenseMat& m) {
    for (int dg = 0; dg < 4; ++dg)
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                DenseMat cand = pauli1(x, z);
                const Cplx ph = std::pow(Cplx(0, 1), dg);
                for (auto& v : cand.e) v *= ph;
                if (approx(m, cand))
                    return {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(z),
                            static_cast<std::uint8_t>(dg)};
            }
    throw NonCliffordError("conjugation result is not a Pauli");
}

struct Conj1q {
    ConjEntry map[2][2];  // indexed by input (x, z); (0,0) is identity
};

Conj1q derive_1q(const DenseMat& u) {
    Conj1q t;
    const DenseMat ud = dagger(u);
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            if (!x && !z) { t.map[0][0] = {0, 0, 0}; continue; }
            t.map[x][z] = match1(matmul(matmul(u, pauli1(x, z)), ud));
        }
    return t;
}

struct Conj2qEntry {
    std::uint8_t xa, za, xb, zb, dg;
};

struct Conj2q {
    Conj2qEntry map[16];  // index: xa | za<<1 | xb<<2 | zb<<3
};

Conj2qEntry match2(const DenseMat& m) {
    for (int dg = 0; dg < 4; ++dg)
        for (int bits = 0; bits < 16; ++bits) {
            const int xa = bits & 1, za = (bits >> 1) & 1, xb = (bits >> 2) & 1,
                      zb = (bits >> 3) & 1;
            DenseMat cand = kron(pauli1(xa, za), pauli1(xb, zb));
            const Cplx ph = std::pow(Cplx(0, 1), dg);
            for (auto& v : cand.e) v *= ph;
            if (approx(m, cand))
                return {static_cast<std::uint8_t>(xa), static_cast<std::uint8_t>(za),
                        static_cast<std::uint8_t>(xb), static_cast<std::uint8_t>(zb),
                        static_cast<std::uint8_t>(dg)};
        }
    throw NonCliffordError("two-qubit conjugation result is not a Pauli");
}

Conj2q derive_2q(const DenseMat& u) {
    Conj2q t;
    const DenseMat ud = dagger(u);
    for (int bits = 0; bits < 16; ++bits) {
        const int xa = bits & 1, za = (bits >> 1) & 1, xb = (bits >> 2) & 1,
                  zb = (bits >> 3) & 1;
        const DenseMat p = kron(pauli1(xa, za), pauli1(xb, zb));
        t.map[bits] = match2(matmul(matmul(u, p), ud));
    }
    return t;
}

struct C24Element {
    DenseMat matrix{2, {1, 0, 0, 1}};
    Conj1q conj;
    std::vector<int> word;  // generator sequence, 0 = H, 1 = S
};

struct C24Tables {
    std::vector<C24Element> elems;
    int mul[24][24];
    int inv[24];
    int transpose[24];
    int idx_h, idx_s, idx_sdg, idx_x, idx_z, idx_y;
    std::map<std::array<int, 6>, int> by_action;

    static std::array<int, 6> action_key(const Conj1q& c) {
        return {c.map[1][0].x, c.map[1][0].z, c.map[1][0].dg,
                c.map[0][1].x, c.map[0][1].z, c.map[0][1].dg};
    }
};

const C24Tables& c24_tables() {
    static const C24Tables tables = [] {
        C24Tables t;
        const DenseMat h{2, {Cplx(1 / std::sqrt(2.0)), Cplx(1 / std::sqrt(2.0)),
                             Cplx(1 / std::sqrt(2.0)), Cplx(-1 / std::sqrt(2.0))}};
        const DenseMat s{2, {1, 0, 0, Cplx(0, 1)}};
        const std::array<DenseMat, 2> gens{h, s};

        // BFS over words in H, S keyed by conjugation action.
        std::map<std::array<int, 6>, int> seen;
        C24Element id;
        id.conj = derive_1q(id.matrix);
        t.elems.push_back(id);
        seen[C24Tables::action_key(id.conj)] = 0;
        for (std::size_t head = 0; head < t.elems.size(); ++head) {
            for (int g = 0; g < 2; ++g) {
                C24Element next;
                next.matrix = matmul(gens[g], t.elems[head].matrix);
                next.conj = derive_1q(next.matrix);
                const auto key = C24Tables::action_key(next.conj);
                if (seen.count(key)) continue;
                next.word = t.elems[head].word;
                next.word.push_back(g);
                seen[key] = static_cast<int>(t.elems.size());
                t.elems.push_back(std::move(next));
            }
        }
        if (t.elems.size() != 24)
            throw NonCliffordError("C24 enumeration did not produce 24 elements");
        t.by_action = seen;

        auto find_by_matrix_action = [&](const DenseMat& m) {
            const auto key = C24Tables::action_key(derive_1q(m));
            const auto it = t.by_action.find(key);
            if (it == t.by_action.end())
                throw NonCliffordError("matrix is not a single-qubit Clifford");
            return it->second;
        };

        for (int a = 0; a < 24; ++a)
            for (int b = 0; b < 24; ++b)
                t.mul[a][b] = find_by_matrix_action(
                    matmul(t.elems[static_cast<std::size_t>(a)].matrix,
                           t.elems[static_cast<std::size_t>(b)].matrix));
        for (int a = 0; a < 24; ++a) {
            t.inv[a] = find_by_matrix_action(dagger(t.elems[static_cast<std::size_t>(a)].matrix));
            DenseMat tr{2, {t.elems[static_cast<std::size_t>(a)].matrix.e[0],
                            t.elems[static_cast<std::size_t>(a)].matrix.e[2],
                            t.elems[static_cast<std::size_t>(a)].matrix.e[1],
                            t.elems[static_cast<std::size_t>(a)].matrix.e[3]}};
            t.transpose[a] = find_by_matrix_action(tr);
        }
        t.idx_h = find_by_matrix_action(h);
        t.idx_s = find_by_matrix_action(s);
        t.idx_sdg = t.inv[t.idx_s];
        t.idx_x = find_by_matrix_action(pauli1(1, 0));
        t.idx_z = find_by_matrix_action(pauli1(0, 1));
        t.idx_y = find_by_matrix_action(pauli1(1, 1));
        return t;
    }();
    return tables;
}

const Conj2q& cz_table() {
    static const Conj2q t = [] {
        DenseMat cz = DenseMat::eye(4);
        cz.at(3, 3) = -1;
        return derive_2q(cz);
    }();
    return t;
}

const Conj2q& cnot_table() {
    static const Conj2q t = [] {
        DenseMat cx{4, std::vector<Cplx>(16, 0.0)};
        cx.at(0, 0) = cx.at(1, 1) = cx.at(2, 3) = cx.at(3, 2) = 1;  // control first
        return derive_2q(cx);
    }();
    return t;
}

void conj_1q(PauliString& p, const Conj1q& t, std::size_t q) {
    const int x = p.x.get(q), z = p.z.get(q);
    if (!x && !z) return;
    const auto& e = t.map[x][z];
    p.x.set(q, e.x);
    p.z.set(q, e.z);
    p.phase = (p.phase + e.dg) & 3;
}

void conj_2q(PauliString& p, const Conj2q& t, std::size_t a, std::size_t b) {
    const int bits = static_cast<int>(p.x.get(a)) | (static_cast<int>(p.z.get(a)) << 1) |
                     (static_cast<int>(p.x.get(b)) << 2) | (static_cast<int>(p.z.get(b)) << 3);
    if (!bits) return;
    const auto& e = t.map[bits];
    p.x.set(a, e.xa);
    p.z.set(a, e.za);
    p.x.set(b, e.xb);
    p.z.set(b, e.zb);
    p.phase = (p.phase + e.dg) & 3;
}

}  // namespace

int c24_mul(int lhs, int rhs) { return c24_tables().mul[lhs][rhs]; }
int c24_inv(int g) { return c24_tables().inv[g]; }
int c24_transpose(int g) { return c24_tables().transpose[g]; }
int c24_identity() { return 0; }
int c24_h() { return c24_tables().idx_h; }
int c24_s() { return c24_tables().idx_s; }
int c24_sdg() { return c24_tables().idx_sdg; }
int c24_x() { return c24_tables().idx_x; }
int c24_z() { return c24_tables().idx_z; }

int c24_from_pauli(bool x, bool z) {
    if (!x && !z) return 0;
    if (x && z) return c24_tables().idx_y;
    return x ? c24_tables().idx_x : c24_tables().idx_z;
}

Mat2 c24_matrix(int g) {
    const auto& m = c24_tables().elems[static_cast<std::size_t>(g)].matrix;
    return Mat2{m.e[0], m.e[1], m.e[2], m.e[3]};
}

int c24_from_action(const PauliString& im_x, const PauliString& im_z) {
    const std::array<int, 6> key = {
        static_cast<int>(im_x.x.get(0)), static_cast<int>(im_x.z.get(0)), im_x.phase,
        static_cast<int>(im_z.x.get(0)), static_cast<int>(im_z.z.get(0)), im_z.phase};
    const auto it = c24_tables().by_action.find(key);
    if (it == c24_tables().by_action.end())
        throw NonCliffordError("no single-qubit Clifford with the requested action");
    return it->second;
}

// ---------------------------------------------------------- CliffordTableau

CliffordTableau CliffordTableau::identity(std::size_t n) {
    CliffordTableau t;
    t.n_ = n;
    t.rows_.reserve(2 * n);
    for (std::size_t q = 0; q < n; ++q) t.rows_.push_back(PauliString::x_op(n, q));
    for (std::size_t q = 0; q < n; ++q) t.rows_.push_back(PauliString::z_op(n, q));
    return t;
}

void CliffordTableau::apply_c24(int g, std::size_t q) {
    const auto& tab = c24_tables().elems[static_cast<std::size_t>(g)].conj;
    for (auto& r : rows_) conj_1q(r, tab, q);
}

void CliffordTableau::apply_h(std::size_t q) { apply_c24(c24_h(), q); }
void CliffordTableau::apply_x(std::size_t q) { apply_c24(c24_x(), q); }
void CliffordTableau::apply_z(std::size_t q) { apply_c24(c24_z(), q); }
void CliffordTableau::apply_s(std::size_t q) { apply_c24(c24_s(), q); }
void CliffordTableau::apply_sdg(std::size_t q) { apply_c24(c24_sdg(), q); }

void CliffordTableau::apply_cz(std::size_t a, std::size_t b) {
    for (auto& r : rows_) conj_2q(r, cz_table(), a, b);
}

void CliffordTableau::apply_cnot(std::size_t control, std::size_t target) {
    for (auto& r : rows_) conj_2q(r, cnot_table(), control, target);
}

void CliffordTableau::apply_linear(const F2Matrix& m) {
    if (m.rows() != n_ || m.cols() != n_)
        throw F2Error("apply_linear: matrix size mismatch");
    const auto minv = inverse(m);
    if (!minv) throw F2Error("apply_linear: matrix is singular");
    const F2Matrix minv_t = minv->transposed();
    for (auto& r : rows_) {
        r.x = mul(m, r.x);
        r.z = mul(minv_t, r.z);
    }
}

void CliffordTableau::apply_instruction(const Instruction& ins) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SqInstr>) {
                const auto q = v.qubit;
                switch (v.gate.kind) {
                    case SqGate::Kind::H: apply_h(q); break;
                    case SqGate::Kind::X: apply_x(q); break;
                    case SqGate::Kind::Z: apply_z(q); break;
                    case SqGate::Kind::S: apply_s(q); break;
                    case SqGate::Kind::Sdg: apply_sdg(q); break;
                    case SqGate::Kind::C24: apply_c24(v.gate.c24, q); break;
                    case SqGate::Kind::ZPow: {
                        const Angle a = v.gate.angle;
                        if (a.is_zero()) break;
                        if (a == Angle::one()) { apply_z(q); break; }
                        if (a == Angle::make(1, 1)) { apply_s(q); break; }
                        if (a == Angle::make(3, 1)) { apply_sdg(q); break; }
                        throw NonCliffordError("ZPow angle is not Clifford");
                    }
                    case SqGate::Kind::XPow: {
                        const Angle a = v.gate.angle;
                        if (a.is_zero()) break;
                        if (a == Angle::one()) { apply_x(q); break; }
                        if (a == Angle::make(1, 1)) { apply_h(q); apply_s(q); apply_h(q); break; }
                        if (a == Angle::make(3, 1)) { apply_h(q); apply_sdg(q); apply_h(q); break; }
                        throw NonCliffordError("XPow angle is not Clifford");
                    }
                }
            } else if constexpr (std::is_same_v<T, GczInstr>) {
                for (auto& p : v.pairs) apply_cz(p.first, p.second);
            } else if constexpr (std::is_same_v<T, GtInstr>) {
                for (auto& t : v.terms) {
                    if (t.angle.is_zero()) continue;
                    if (t.angle == Angle::one()) { apply_cz(t.a, t.b); continue; }
                    throw NonCliffordError("GT with fractional angle is not Clifford");
                }
            } else if constexpr (std::is_same_v<T, CxLayerInstr>) {
                for (std::size_t i = 0; i < v.controls.size(); ++i)
                    for (std::size_t j = 0; j < v.targets.size(); ++j)
                        if (v.matrix.get(i, j)) apply_cnot(v.controls[i], v.targets[j]);
            } else {
                throw NonCliffordError("measurement/feedforward is not a Clifford instruction");
            }
        },
        ins);
}

CliffordTableau CliffordTableau::of_circuit(const Circuit& c) {
    CliffordTableau t = identity(c.num_qubits);
    for (const auto& ins : c.instructions) t.apply_instruction(ins);
    return t;
}

PauliString CliffordTableau::image_of(const PauliString& p) const {
    PauliString acc(n_);
    for (std::size_t q = 0; q < n_; ++q)
        if (p.x.get(q)) acc = acc.times(rows_[q]);
    for (std::size_t q = 0; q < n_; ++q)
        if (p.z.get(q)) acc = acc.times(rows_[n_ + q]);
    acc.phase = (acc.phase + p.phase) & 3;
    return acc;
}

CliffordTableau CliffordTableau::compose_after(const CliffordTableau& other) const {
    CliffordTableau out;
    out.n_ = n_;
    out.rows_.reserve(2 * n_);
    for (const auto& r : other.rows_) out.rows_.push_back(image_of(r));
    return out;
}

CliffordTableau CliffordTableau::inverted() const {
    // Symplectic inverse Omega S^T Omega, then fix phases so the composition
    // with *this is the all-plus identity.
    const F2Matrix s = symplectic();
    F2Matrix omega(2 * n_, 2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        omega.set(i, n_ + i, true);
        omega.set(n_ + i, i, true);
    }
    const F2Matrix sinv = mul(omega, mul(s.transposed(), omega));

    CliffordTableau inv;
    inv.n_ = n_;
    inv.rows_.resize(2 * n_, PauliString(n_));
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        for (std::size_t q = 0; q < n_; ++q) {
            inv.rows_[r].x.set(q, sinv.get(r, q));
            inv.rows_[r].z.set(q, sinv.get(r, n_ + q));
        }
        inv.rows_[r].phase = inv.rows_[r].overlap();  // provisional + sign
    }
    // inv0 * this is some Pauli P; the true inverse is P * inv0, i.e. each
    // row of inv0 flips sign iff it anti-commutes with P.
    const CliffordTableau check = inv.compose_after(*this);
    F2Vector px(n_), pz(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        pz.set(q, check.x_image(q).sign());
        px.set(q, check.z_image(q).sign());
    }
    for (auto& r : inv.rows_) {
        const bool anti = static_cast<bool>(r.x.dot(pz)) ^ static_cast<bool>(r.z.dot(px));
        if (anti) r.set_sign(!r.sign());
    }
    return inv;
}

F2Matrix CliffordTableau::symplectic() const {
    F2Matrix s(2 * n_, 2 * n_);
    for (std::size_t r = 0; r < 2 * n_; ++r)
        for (std::size_t q = 0; q < n_; ++q) {
            if (rows_[r].x.get(q)) s.set(r, q, true);
            if (rows_[r].z.get(q)) s.set(r, n_ + q, true);
        }
    return s;
}

std::vector<bool> CliffordTableau::phase_bits() const {
    std::vector<bool> out;
    out.reserve(2 * n_);
    for (const auto& r : rows_) out.push_back(r.sign());
    return out;
}

bool CliffordTableau::is_valid() const {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
        if (((rows_[i].phase - rows_[i].overlap()) & 1) != 0) return false;
        for (std::size_t j = i; j < 2 * n_; ++j) {
            const bool want = (j == i + n_);
            const bool got = !rows_[i].commutes(rows_[j]);
            if (want != got) return false;
        }
    }
    return true;
}

std::string CliffordTableau::to_text() const {
    std::ostringstream os;
    os << n_ << '\n';
    for (const auto& r : rows_) {
        for (std::size_t q = 0; q < n_; ++q) os << (r.x.get(q) ? '1' : '0');
        for (std::size_t q = 0; q < n_; ++q) os << (r.z.get(q) ? '1' : '0');
        os << '\n';
    }
    for (const auto& r : rows_) os << (r.sign() ? '1' : '0');
    os << '\n';
    return os.str();
}

CliffordTableau CliffordTableau::from_text(const std::string& text) {
    std::istringstream is(text);
    std::size_t n = 0;
    if (!(is >> n) || n == 0) throw ParseError("bad tableau header", 1, 1);
    CliffordTableau t;
    t.n_ = n;
    t.rows_.resize(2 * n, PauliString(n));
    std::string line;
    for (std::size_t r = 0; r < 2 * n; ++r) {
        if (!(is >> line) || line.size() != 2 * n)
            throw ParseError("bad tableau row", r + 2, 1);
        for (std::size_t q = 0; q < n; ++q) {
            t.rows_[r].x.set(q, line[q] == '1');
            t.rows_[r].z.set(q, line[n + q] == '1');
        }
    }
    if (!(is >> line) || line.size() != 2 * n)
        throw ParseError("bad tableau phase row", 2 * n + 2, 1);
    for (std::size_t r = 0; r < 2 * n; ++r) {
        t.rows_[r].phase = t.rows_[r].overlap();
        if (line[r] == '1') t.rows_[r].set_sign(true);
        else if (line[r] != '0') throw ParseError("bad phase bit", 2 * n + 2, r + 1);
    }
    if (!t.is_valid()) throw ParseError("tableau is not symplectic", 1, 1);
    return t;
}

Circuit random_clifford_circuit(std::size_t n, Rng& rng) {
    if (n == 0) throw F2Error("random_clifford_circuit: n must be >= 1");
    Circuit c(n, n, 0);
    // 5 n^2 generators plus a random tail; a fixed word length cannot reach
    // the whole group (word length mod 2 is invariant for <H, S>).
    const std::size_t steps = 5 * n * n + static_cast<std::size_t>(rng() % 4);
    for (std::size_t s = 0; s < steps; ++s) {
        const std::uint64_t kind = n >= 2 ? rng() % 3 : rng() % 2;
        if (kind == 0) {
            c.push(SqInstr{static_cast<std::uint32_t>(rng() % n), SqGate::h()});
        } else if (kind == 1) {
            c.push(SqInstr{static_cast<std::uint32_t>(rng() % n), SqGate::s()});
        } else {
            const auto a = static_cast<std::uint32_t>(rng() % n);
            auto b = static_cast<std::uint32_t>(rng() % (n - 1));
            if (b >= a) ++b;
            c.push(GczInstr::make({{std::min(a, b), std::max(a, b)}}));
        }
    }
    return c;
}

CliffordTableau random_clifford(std::size_t n, Rng& rng) {
    return CliffordTableau::of_circuit(random_clifford_circuit(n, rng));
}

// --------------------------------------------------------- layered support

CliffordTableau recompose(const LayeredClifford& lc) {
    const std::size_t n = lc.cx_matrix.rows();
    CliffordTableau t = CliffordTableau::identity(n);
    for (std::size_t q = 0; q < n; ++q) t.apply_c24(lc.l1[q], q);
    t.apply_linear(lc.cx_matrix);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (lc.cz1.get(a, b)) t.apply_cz(a, b);
    for (std::size_t q = 0; q < n; ++q) t.apply_c24(lc.l2[q], q);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (lc.cz2.get(a, b)) t.apply_cz(a, b);
    for (std::size_t q = 0; q < n; ++q) t.apply_c24(lc.l3[q], q);
    return t;
}

namespace {

// Stabilizer rows of the Choi state of U on 2n qubits (inputs first).
std::vector<PauliString> choi_rows(const CliffordTableau& t) {
    const std::size_t n = t.num_qubits();
    std::vector<PauliString> rows;
    rows.reserve(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        PauliString g(2 * n);
        g.x.set(q, true);
        const PauliString& im = t.x_image(q);
        for (std::size_t j = 0; j < n; ++j) {
            g.x.set(n + j, im.x.get(j));
            g.z.set(n + j, im.z.get(j));
        }
        g.phase = im.phase;
        rows.push_back(g);
    }
    for (std::size_t q = 0; q < n; ++q) {
        PauliString g(2 * n);
        g.z.set(q, true);
        const PauliString& im = t.z_image(q);
        for (std::size_t j = 0; j < n; ++j) {
            g.x.set(n + j, im.x.get(j));
            g.z.set(n + j, im.z.get(j));
        }
        g.phase = im.phase;
        rows.push_back(g);
    }
    return rows;
}

std::vector<F2Vector> nullspace_basis(const F2Matrix& a) {
    F2Matrix m = a;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = F2Vector::npos;
        for (std::size_t i = r; i < m.rows(); ++i)
            if (m.get(i, c)) { p = i; break; }
        if (p == F2Vector::npos) continue;
        m.swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.xor_row(i, r);
        pivots.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<F2Vector> basis;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        F2Vector v(m.cols());
        v.set(c, true);
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            if (m.get(pr, c)) v.set(pivots[pr], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

LayeredClifford layered_decompose(const CliffordTableau& t) {
    const std::size_t n = t.num_qubits();
    const std::size_t nn = 2 * n;
    std::vector<PauliString> gens = choi_rows(t);

    // Accumulated local Clifford applied to each Choi qubit.
    std::vector<int> applied(nn, c24_identity());
    auto apply_local = [&](int g, std::size_t q) {
        const auto& tab = c24_tables().elems[static_cast<std::size_t>(g)].conj;
        for (auto& row : gens) conj_1q(row, tab, q);
        applied[q] = c24_mul(g, applied[q]);
    };

    // 1. Hadamard subset making the x-block invertible. The pure-Z
    // combinations of the generators are the left kernel of the x-block;
    // toggling the RREF lead columns of their z-vectors removes the defect.
    {
        F2Matrix ax(nn, nn), az(nn, nn);
        for (std::size_t r = 0; r < nn; ++r)
            for (std::size_t q = 0; q < nn; ++q) {
                if (gens[r].x.get(q)) ax.set(r, q, true);
                if (gens[r].z.get(q)) az.set(r, q, true);
            }
        const auto kernel = nullspace_basis(ax.transposed());
        if (!kernel.empty()) {
            F2Matrix pure_z(kernel.size(), nn);
            for (std::size_t k = 0; k < kernel.size(); ++k)
                pure_z.set_row(k, mul_left(kernel[k], az));
            F2Matrix work = pure_z;
            std::vector<std::size_t> leads;
            std::size_t r = 0;
            for (std::size_t c = 0; c < nn && r < work.rows(); ++c) {
                std::size_t p = F2Vector::npos;
                for (std::size_t i = r; i < work.rows(); ++i)
                    if (work.get(i, c)) { p = i; break; }
                if (p == F2Vector::npos) continue;
                work.swap_rows(r, p);
                for (std::size_t i = 0; i < work.rows(); ++i)
                    if (i != r && work.get(i, c)) work.xor_row(i, r);
                leads.push_back(c);
                ++r;
            }
            for (auto q : leads) apply_local(c24_h(), q);
        }
    }

    // 2. Row-reduce the x-block to the identity (generator multiplications).
    {
        for (std::size_t c = 0; c < nn; ++c) {
            std::size_t p = F2Vector::npos;
            for (std::size_t r = c; r < nn; ++r)
                if (gens[r].x.get(c)) { p = r; break; }
            if (p == F2Vector::npos)
                throw NonCliffordError("layered_decompose: x-block is singular");
            std::swap(gens[c], gens[p]);
            for (std::size_t r = 0; r < nn; ++r)
                if (r != c && gens[r].x.get(c)) gens[r] = gens[r].times(gens[c]);
        }
    }

    // 3. Kill the z-diagonal with S gates, then signs with Z gates; the
    // remaining z-block is the graph adjacency.
    for (std::size_t q = 0; q < nn; ++q)
        if (gens[q].z.get(q)) apply_local(c24_s(), q);
    for (std::size_t q = 0; q < nn; ++q)
        if (gens[q].sign()) apply_local(c24_z(), q);

    F2Matrix gamma(nn, nn);
    for (std::size_t r = 0; r < nn; ++r)
        for (std::size_t q = 0; q < nn; ++q)
            if (gens[r].z.get(q)) gamma.set(r, q, true);
    if (!gamma.is_symmetric())
        throw NonCliffordError("layered_decompose: graph adjacency not symmetric");
    for (std::size_t r = 0; r < nn; ++r) {
        if (gamma.get(r, r)) throw NonCliffordError("layered_decompose: nonzero diagonal");
        if (gens[r].sign()) throw NonCliffordError("layered_decompose: sign not cleared");
    }

    // Choi state = C_loc |graph(Gamma)>, C_loc[q] = inverse of applied[q].
    std::vector<int> c_in(n), c_out(n);
    for (std::size_t q = 0; q < n; ++q) c_in[q] = c24_inv(applied[q]);
    for (std::size_t q = 0; q < n; ++q) c_out[q] = c24_inv(applied[n + q]);

    const F2Matrix e = gamma.block(0, n, n, n);  // input-output biadjacency
    const auto e_inv = inverse(e);
    if (!e_inv) throw NonCliffordError("layered_decompose: biadjacency block singular");

    LayeredClifford lc;
    lc.cx_matrix = e.transposed();
    lc.cz2 = gamma.block(n, n, n, n);
    lc.l1.resize(n);
    lc.l2.resize(n);
    lc.l3.resize(n);
    for (std::size_t q = 0; q < n; ++q) lc.l1[q] = c24_transpose(c_in[q]);
    for (std::size_t q = 0; q < n; ++q) lc.l3[q] = c_out[q];

    // Push CZ(Gamma_in) through the linear map: the quadratic form
    // q(x) = sum_{a<b} G_ab x_a x_b becomes, in y = E^T x coordinates,
    // a new CZ layer plus single-qubit Z gates.
    const F2Matrix gamma_in = gamma.block(0, 0, n, n);
    F2Matrix cz1(n, n);
    F2Vector zlin(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!gamma_in.get(a, b)) continue;
            const F2Vector u = e_inv->col(a);  // (E^-T y)_a = col_a(E^-1) . y
            const F2Vector v = e_inv->col(b);
            for (std::size_t i = 0; i < n; ++i) {
                if (u.get(i) && v.get(i)) zlin.flip(i);
                for (std::size_t j = i + 1; j < n; ++j) {
                    const bool bit = (u.get(i) && v.get(j)) ^ (u.get(j) && v.get(i));
                    if (bit) {
                        cz1.set(i, j, !cz1.get(i, j));
                        cz1.set(j, i, !cz1.get(j, i));
                    }
                }
            }
        }
    lc.cz1 = cz1;
    for (std::size_t q = 0; q < n; ++q)
        lc.l2[q] = c24_mul(c24_h(), zlin.get(q) ? c24_z() : c24_identity());

    // Certify; absorb any residual Pauli into L3, then require equality.
    CliffordTableau rec = recompose(lc);
    if (rec.symplectic() == t.symplectic()) {
        const CliffordTableau delta = t.compose_after(rec.inverted());
        if (!delta.symplectic().is_identity())
            throw NonCliffordError("layered_decompose: non-Pauli residual");
        for (std::size_t q = 0; q < n; ++q) {
            const bool zq = delta.x_image(q).sign();  // anti-commutes iff Z content
            const bool xq = delta.z_image(q).sign();
            if (xq || zq)
                lc.l3[q] = c24_mul(c24_from_pauli(xq, zq), lc.l3[q]);
        }
        rec = recompose(lc);
    }
    if (!(rec == t))
        throw NonCliffordError("layered_decompose: recomposition mismatch");
    return lc;
}

// ---------------------------------------------------------- StabilizerGroup

void StabilizerGroup::canonicalize() {
    const std::size_t m = gens.size();
    if (m == 0) return;
    const std::size_t n = gens[0].size();
    std::size_t r = 0;
    auto column_pass = [&](auto bit_getter) {
        for (std::size_t q = 0; q < n && r < m; ++q) {
            std::size_t p = F2Vector::npos;
            for (std::size_t i = r; i < m; ++i)
                if (bit_getter(gens[i], q)) { p = i; break; }
            if (p == F2Vector::npos) continue;
            std::swap(gens[r], gens[p]);
            for (std::size_t i = 0; i < m; ++i)
                if (i != r && bit_getter(gens[i], q)) gens[i] = gens[i].times(gens[r]);
            ++r;
        }
    };
    column_pass([](const PauliString& p, std::size_t q) { return p.x.get(q); });
    column_pass([](const PauliString& p, std::size_t q) { return p.z.get(q); });
}

bool StabilizerGroup::same_group(const StabilizerGroup& other) const {
    StabilizerGroup a = *this, b = other;
    a.canonicalize();
    b.canonicalize();
    return a.gens == b.gens;
}

}  // namespace gtsynth
