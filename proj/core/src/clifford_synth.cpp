// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/clifford_synth.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace gtsynth {

namespace {

F2Matrix submatrix(const F2Matrix& a, const std::vector<std::uint32_t>& rows,
                   const std::vector<std::uint32_t>& cols) {
    F2Matrix m(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (a.get(rows[r], cols[c])) m.set(r, c, true);
    return m;
}

// Layer from its action matrix: action(t, s) = 1 means target t picks up
// control s. The stored CXLayer matrix is indexed (control, target).
CxLayerInstr make_layer(std::vector<std::uint32_t> controls,
                        std::vector<std::uint32_t> targets, const F2Matrix& action) {
    F2Matrix m(controls.size(), targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t)
        for (std::size_t s = 0; s < controls.size(); ++s)
            if (action.get(t, s)) m.set(s, t, true);
    return CxLayerInstr::make(std::move(controls), std::move(targets), std::move(m));
}

F2Matrix require_inverse(const F2Matrix& m, const char* what) {
    auto inv = inverse(m);
    if (!inv) throw SynthesisError(std::string(what) + ": singular matrix");
    return *inv;
}

// Incremental GF(2) row basis for greedy independence fixes.
class IncrementalBasis {
public:
    bool reduces_to_zero(F2Vector v) const {
        reduce(v);
        return v.is_zero();
    }
    bool insert(F2Vector v) {
        reduce(v);
        if (v.is_zero()) return false;
        rows_.emplace_back(v.lowest_set(), std::move(v));
        std::sort(rows_.begin(), rows_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return true;
    }
    std::size_t size() const { return rows_.size(); }

private:
    void reduce(F2Vector& v) const {
        for (const auto& [lead, row] : rows_)
            if (v.get(lead)) v.xor_in(row);
    }
    std::vector<std::pair<std::size_t, F2Vector>> rows_;
};

}  // namespace

RegisterSplit RegisterSplit::thirds(std::size_t n) {
    if (n < 3) throw SynthesisError("RegisterSplit: need at least 3 qubits");
    const std::size_t k = n / 3, m = n % 3;
    const std::size_t s1 = k + (m >= 1 ? 1 : 0);
    const std::size_t s2 = k + (m == 2 ? 1 : 0);
    RegisterSplit s;
    for (std::size_t i = 0; i < k; ++i) s.part[0].push_back(static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < s1; ++i) s.part[1].push_back(static_cast<std::uint32_t>(k + i));
    for (std::size_t i = 0; i < s2; ++i)
        s.part[2].push_back(static_cast<std::uint32_t>(k + s1 + i));
    return s;
}

F2Matrix layer_matrix(const CxLayerInstr& layer, std::size_t n) {
    F2Matrix m = F2Matrix::identity(n);
    for (std::size_t i = 0; i < layer.controls.size(); ++i)
        for (std::size_t j = 0; j < layer.targets.size(); ++j)
            if (layer.matrix.get(i, j)) m.set(layer.targets[j], layer.controls[i], true);
    return m;
}

// --------------------------------------------------------------- C3 family

namespace {

std::size_t span_qubits(const std::vector<std::uint32_t>& r1,
                        const std::vector<std::uint32_t>& r2) {
    std::uint32_t hi = 0;
    for (auto q : r1) hi = std::max(hi, q);
    for (auto q : r2) hi = std::max(hi, q);
    return hi + 1;
}

}  // namespace

Circuit c3(const F2Matrix& a, const std::vector<std::uint32_t>& reg1,
           const std::vector<std::uint32_t>& reg2, C3Orientation orientation) {
    const std::size_t n = a.rows();
    if (reg1.size() != n || reg2.size() != n)
        throw SynthesisError("c3: register sizes must match the matrix");
    const F2Matrix a_inv = require_inverse(a, "c3");
    Circuit c(span_qubits(reg1, reg2), span_qubits(reg1, reg2));
    if (orientation == C3Orientation::forward) {
        c.push(make_layer(reg1, reg2, a));
        c.push(make_layer(reg2, reg1, a_inv));
        c.push(make_layer(reg1, reg2, a));
    } else {
        c.push(make_layer(reg2, reg1, a_inv));
        c.push(make_layer(reg1, reg2, a));
        c.push(make_layer(reg2, reg1, a_inv));
    }
    return c;
}

Circuit c3_prime(const F2Matrix& a, const std::vector<std::uint32_t>& reg1,
                 const std::vector<std::uint32_t>& reg2) {
    const std::size_t n = a.rows();
    if (reg1.size() != n || reg2.size() != n)
        throw SynthesisError("c3_prime: register sizes must match the matrix");
    const F2Matrix a_inv = require_inverse(a, "c3_prime");
    const F2Matrix id = F2Matrix::identity(n);
    Circuit c(span_qubits(reg1, reg2), span_qubits(reg1, reg2));
    c.push(make_layer(reg1, reg2, id ^ a));
    c.push(make_layer(reg2, reg1, id));
    c.push(make_layer(reg1, reg2, id ^ a_inv));
    return c;
}

namespace {

// The twelve layers of W(A) on (X, Y, Z), commutator orientations fixed so
// the tail/head merges line up. Layers are returned in time order.
std::vector<CxLayerInstr> w_layers(const F2Matrix& a,
                                   const std::vector<std::uint32_t>& xr,
                                   const std::vector<std::uint32_t>& yr,
                                   const std::vector<std::uint32_t>& zr, Rng& rng) {
    const auto comm = commutator_decompose(a, rng);
    if (!comm) throw SynthesisError("w_circuit: commutator factorization failed");
    const F2Matrix& b = comm->first;
    const F2Matrix& d = comm->second;
    const F2Matrix b_inv = require_inverse(b, "w_circuit");
    const F2Matrix d_inv = require_inverse(d, "w_circuit");

    std::vector<CxLayerInstr> L;
    // C3(B) forward on (X, Y)
    L.push_back(make_layer(xr, yr, b));
    L.push_back(make_layer(yr, xr, b_inv));
    L.push_back(make_layer(xr, yr, b));
    // C3(D) reversed on (Y, Z)
    L.push_back(make_layer(zr, yr, d_inv));
    L.push_back(make_layer(yr, zr, d));
    L.push_back(make_layer(zr, yr, d_inv));
    // C3(B^-1) forward on (Z, X)
    L.push_back(make_layer(zr, xr, b_inv));
    L.push_back(make_layer(xr, zr, b));
    L.push_back(make_layer(zr, xr, b_inv));
    // C3(D^-1) reversed on (X, Y)
    L.push_back(make_layer(yr, xr, d));
    L.push_back(make_layer(xr, yr, d_inv));
    L.push_back(make_layer(yr, xr, d));
    return L;
}

}  // namespace

Circuit w_circuit(const F2Matrix& a, const RegisterSplit& split, Rng& rng) {
    const std::size_t k = a.rows();
    if (split.part[0].size() != k || split.part[1].size() != k || split.part[2].size() != k)
        throw SynthesisError("w_circuit: need three equal parts matching the matrix");
    if (k < 3) throw SynthesisError("w_circuit: parts must have size >= 3");
    std::uint32_t hi = 0;
    for (int p = 0; p < 3; ++p)
        for (auto q : split.part[p]) hi = std::max(hi, q);
    Circuit c(hi + 1, hi + 1);
    for (auto& l : w_layers(a, split.part[0], split.part[1], split.part[2], rng))
        c.push(std::move(l));
    return c;
}

// ------------------------------------------------------------ preprocessing

PreprocessResult preprocess_blocks(const F2Matrix& a, const RegisterSplit& split,
                                   Rng& rng) {
    const std::size_t n = a.rows();
    if (a.cols() != n || split.total() != n)
        throw SynthesisError("preprocess_blocks: split does not cover the matrix");
    F2Matrix work = a;

    auto prefix_of = [&](std::uint32_t row, const std::vector<std::uint32_t>& cols) {
        F2Vector v(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (work.get(row, cols[c])) v.set(c, true);
        return v;
    };

    struct Stage {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> adds;  // (donor, target)
    };

    auto run_stage = [&](const std::vector<std::uint32_t>& target_rows,
                         const std::vector<std::uint32_t>& seed_rows,
                         std::vector<std::uint32_t> donors,
                         const std::vector<std::uint32_t>& cols) -> std::optional<Stage> {
        std::shuffle(donors.begin(), donors.end(), rng);
        IncrementalBasis basis;
        for (auto r : seed_rows)
            if (!basis.insert(prefix_of(r, cols)))
                return std::nullopt;  // seed rows must already be independent
        Stage st;
        std::vector<bool> used(donors.size(), false);
        for (auto r : target_rows) {
            F2Vector v = prefix_of(r, cols);
            if (basis.insert(v)) continue;
            bool fixed = false;
            for (std::size_t di = 0; di < donors.size(); ++di) {
                if (used[di]) continue;
                F2Vector cand = prefix_of(r, cols);
                cand.xor_in(prefix_of(donors[di], cols));
                if (basis.reduces_to_zero(cand)) continue;
                basis.insert(cand);
                used[di] = true;
                st.adds.emplace_back(donors[di], r);
                work.xor_row(r, donors[di]);
                fixed = true;
                break;
            }
            if (!fixed) return std::nullopt;
        }
        return st;
    };

    std::vector<std::uint32_t> donors1 = split.part[1];
    donors1.insert(donors1.end(), split.part[2].begin(), split.part[2].end());
    const auto stage1 = run_stage(split.part[0], {}, donors1, split.part[0]);
    if (!stage1) throw SynthesisError("preprocess_blocks: preprocessing failed (stage 1)");

    std::vector<std::uint32_t> cols01 = split.part[0];
    cols01.insert(cols01.end(), split.part[1].begin(), split.part[1].end());
    const auto stage2 = run_stage(split.part[1], split.part[0], split.part[2], cols01);
    if (!stage2) throw SynthesisError("preprocess_blocks: preprocessing failed (stage 2)");

    PreprocessResult out;
    auto stage_layer = [](const Stage& st) -> std::optional<CxLayerInstr> {
        if (st.adds.empty()) return std::nullopt;
        std::vector<std::uint32_t> controls, targets;
        for (auto& [d, t] : st.adds) {
            controls.push_back(d);
            targets.push_back(t);
        }
        F2Matrix m(controls.size(), targets.size());
        for (std::size_t i = 0; i < controls.size(); ++i) m.set(i, i, true);
        return CxLayerInstr::make(std::move(controls), std::move(targets), std::move(m));
    };
    if (auto l = stage_layer(*stage1)) out.layers.push_back(std::move(*l));
    if (auto l = stage_layer(*stage2)) out.layers.push_back(std::move(*l));
    out.a_new = work;

    if (rank(submatrix(work, split.part[0], split.part[0])) != split.part[0].size())
        throw SynthesisError("preprocess_blocks: leading block still singular");
    std::vector<std::uint32_t> rows01 = cols01;
    if (rank(submatrix(work, rows01, cols01)) != cols01.size())
        throw SynthesisError("preprocess_blocks: second block still singular");
    return out;
}

// -------------------------------------------------------- block elimination

BlockDiagResult block_diagonalize(const F2Matrix& a, const RegisterSplit& split) {
    const std::size_t n = a.rows();
    if (a.cols() != n || split.total() != n)
        throw SynthesisError("block_diagonalize: split does not cover the matrix");
    F2Matrix work = a;
    BlockDiagResult out;

    auto eliminate = [&](int pivot_part, int tgt_a, int tgt_b) {
        const auto& pcols = split.part[pivot_part];
        const F2Matrix pivot = submatrix(work, pcols, pcols);
        const F2Matrix pivot_inv = require_inverse(pivot, "block_diagonalize");
        const F2Matrix pa = mul(submatrix(work, split.part[tgt_a], pcols), pivot_inv);
        const F2Matrix pb = mul(submatrix(work, split.part[tgt_b], pcols), pivot_inv);
        std::vector<std::uint32_t> targets = split.part[tgt_a];
        targets.insert(targets.end(), split.part[tgt_b].begin(), split.part[tgt_b].end());
        F2Matrix action(targets.size(), pcols.size());
        for (std::size_t t = 0; t < pa.rows(); ++t)
            for (std::size_t s = 0; s < pcols.size(); ++s)
                if (pa.get(t, s)) action.set(t, s, true);
        for (std::size_t t = 0; t < pb.rows(); ++t)
            for (std::size_t s = 0; s < pcols.size(); ++s)
                if (pb.get(t, s)) action.set(pa.rows() + t, s, true);
        // Apply the row additions to the working matrix.
        for (std::size_t t = 0; t < targets.size(); ++t)
            for (std::size_t s = 0; s < pcols.size(); ++s)
                if (action.get(t, s)) work.xor_row(targets[t], pcols[s]);
        out.layers.push_back(make_layer(pcols, std::move(targets), action));
    };

    eliminate(0, 1, 2);
    eliminate(1, 0, 2);
    eliminate(2, 0, 1);

    out.b0 = submatrix(work, split.part[0], split.part[0]);
    out.b1 = submatrix(work, split.part[1], split.part[1]);
    out.b2 = submatrix(work, split.part[2], split.part[2]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && !submatrix(work, split.part[i], split.part[j]).is_zero())
                throw SynthesisError("block_diagonalize: off-diagonal block not cleared");
    if (rank(out.b0) != out.b0.rows() || rank(out.b1) != out.b1.rows() ||
        rank(out.b2) != out.b2.rows())
        throw SynthesisError("block_diagonalize: diagonal block singular");
    return out;
}

F2Matrix BlockDiagResult::recompose(const RegisterSplit& split, std::size_t n) const {
    F2Matrix d(n, n);
    const F2Matrix* blocks[3] = {&b0, &b1, &b2};
    for (int p = 0; p < 3; ++p)
        for (std::size_t r = 0; r < split.part[p].size(); ++r)
            for (std::size_t c = 0; c < split.part[p].size(); ++c)
                if (blocks[p]->get(r, c)) d.set(split.part[p][r], split.part[p][c], true);
    F2Matrix acc = d;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        acc = mul(layer_matrix(*it, n), acc);
    return acc;
}

// ----------------------------------------------------- leftover-qubit plans

namespace {

struct VictimPlan {
    std::size_t pos = 0;     // position inside the oversized part
    bool row_mode = true;    // row-mode merges for free; col-mode costs one layer
    F2Vector cleaner;        // d (row) or c (col), over part-local coordinates
    F2Vector residual;       // u (row) or w (col), over reduced-part coordinates
    F2Matrix reduced;        // the k x k block that survives
};

// Try to decouple position `a` of block m (size k+1). Row mode requires
// (m^-1)_aa = 1, col mode requires m_aa = 1.
std::optional<VictimPlan> plan_victim(const F2Matrix& m, std::size_t a) {
    const std::size_t kk = m.rows();
    const auto m_inv_opt = inverse(m);
    if (!m_inv_opt) return std::nullopt;
    const F2Matrix& m_inv = *m_inv_opt;

    std::vector<std::uint32_t> rest;
    for (std::size_t i = 0; i < kk; ++i)
        if (i != a) rest.push_back(static_cast<std::uint32_t>(i));

    auto restrict_vec = [&](const F2Vector& v) {
        F2Vector out(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i) out.set(i, v.get(rest[i]));
        return out;
    };

    if (m_inv.get(a, a)) {  // row mode
        F2Vector v = m.row(a);
        v.flip(a);
        F2Vector d = mul(m_inv.transposed(), v);
        if (d.get(a)) return std::nullopt;  // cannot happen when (m^-1)_aa = 1
        F2Matrix em = m;
        F2Vector combo = mul_left(d, m);
        F2Vector new_row = em.row(a);
        new_row.xor_in(combo);
        em.set_row(a, new_row);

        VictimPlan p;
        p.pos = a;
        p.row_mode = true;
        p.cleaner = d;
        p.reduced = submatrix(em, rest, rest);
        const auto red_inv = inverse(p.reduced);
        if (!red_inv) return std::nullopt;
        p.residual = mul(*red_inv, restrict_vec(em.col(a)));
        return p;
    }
    if (m.get(a, a)) {  // col mode
        F2Vector c = m.col(a);
        c.flip(a);
        F2Matrix em = m;
        for (std::size_t r = 0; r < kk; ++r)
            if (c.get(r)) {
                F2Vector row = em.row(r);
                row.xor_in(m.row(a));
                em.set_row(r, row);
            }
        VictimPlan p;
        p.pos = a;
        p.row_mode = false;
        p.cleaner = c;
        p.reduced = submatrix(em, rest, rest);
        const auto red_inv = inverse(p.reduced);
        if (!red_inv) return std::nullopt;
        p.residual = mul(red_inv->transposed(), restrict_vec(em.row(a)));
        return p;
    }
    return std::nullopt;
}

std::optional<VictimPlan> plan_part(const F2Matrix& m) {
    // Prefer row mode at any position (merges for free), then col mode.
    for (std::size_t a = 0; a < m.rows(); ++a) {
        const auto m_inv = inverse(m);
        if (m_inv && m_inv->get(a, a))
            if (auto p = plan_victim(m, a)) return p;
    }
    for (std::size_t a = 0; a < m.rows(); ++a)
        if (m.get(a, a))
            if (auto p = plan_victim(m, a)) return p;
    return std::nullopt;
}

struct CxSynthesis {
    std::vector<Instruction> instrs;  // time order
};

// Builds the ancilla-free CX-part instruction stream for a given partition.
// Fails (nullopt) when the greedy preprocessing or the leftover-qubit
// decoupling cannot be arranged; the caller retries with a fresh partition.
std::optional<CxSynthesis> build_cx_block(const F2Matrix& a, const RegisterSplit& split,
                                          Rng& rng) {
    const std::size_t n = a.rows();
    PreprocessResult pre;
    try {
        pre = preprocess_blocks(a, split, rng);
    } catch (const SynthesisError&) {
        return std::nullopt;
    }
    BlockDiagResult diag;
    try {
        diag = block_diagonalize(pre.a_new, split);
    } catch (const SynthesisError&) {
        return std::nullopt;
    }

    const std::size_t k = split.part[0].size();
    std::optional<VictimPlan> vic1, vic2;
    std::vector<std::uint32_t> yr = split.part[1], zr = split.part[2];
    F2Matrix m1 = diag.b1, m2 = diag.b2;
    if (split.part[1].size() == k + 1) {
        vic1 = plan_part(diag.b1);
        if (!vic1) return std::nullopt;
        yr.erase(yr.begin() + static_cast<std::ptrdiff_t>(vic1->pos));
        m1 = vic1->reduced;
    }
    if (split.part[2].size() == k + 1) {
        vic2 = plan_part(diag.b2);
        if (!vic2) return std::nullopt;
        zr.erase(zr.begin() + static_cast<std::ptrdiff_t>(vic2->pos));
        m2 = vic2->reduced;
    }

    const auto& xr = split.part[0];
    const F2Matrix b0 = diag.b0;
    const F2Matrix c3b = mul(m2, b0);
    const F2Matrix wmat = mul(m1, c3b);

    std::vector<CxLayerInstr> wl;
    try {
        wl = w_layers(wmat, xr, yr, zr, rng);
    } catch (const SynthesisError&) {
        return std::nullopt;
    }

    // Head layer: CX(X -> Z) with B0, extended by the row-mode residual
    // additions (victim controls feed their part remainders).
    CxSynthesis out;
    {
        std::vector<std::uint32_t> controls = xr, targets = zr;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> extra;  // (control, target)
        auto add_residual = [&](const std::optional<VictimPlan>& vic,
                                const std::vector<std::uint32_t>& part_full,
                                const std::vector<std::uint32_t>& part_rest) {
            if (!vic || !vic->row_mode) return;
            const std::uint32_t vq = part_full[vic->pos];
            controls.push_back(vq);
            for (std::size_t j = 0; j < part_rest.size(); ++j)
                if (vic->residual.get(j)) extra.emplace_back(vq, part_rest[j]);
        };
        add_residual(vic1, split.part[1], yr);
        add_residual(vic2, split.part[2], zr);
        std::vector<std::uint32_t> tlist = targets;
        for (auto& [c, t] : extra)
            if (std::find(tlist.begin(), tlist.end(), t) == tlist.end()) tlist.push_back(t);
        F2Matrix mat(controls.size(), tlist.size());
        auto cpos = [&](std::uint32_t q) {
            return static_cast<std::size_t>(
                std::find(controls.begin(), controls.end(), q) - controls.begin());
        };
        auto tpos = [&](std::uint32_t q) {
            return static_cast<std::size_t>(
                std::find(tlist.begin(), tlist.end(), q) - tlist.begin());
        };
        for (std::size_t t = 0; t < zr.size(); ++t)
            for (std::size_t s = 0; s < xr.size(); ++s)
                if (b0.get(t, s)) mat.set(cpos(xr[s]), tpos(zr[t]), true);
        for (auto& [c, t] : extra) mat.set(cpos(c), tpos(t), true);
        out.instrs.push_back(CxLayerInstr::make(std::move(controls), std::move(tlist),
                                                std::move(mat)));
    }
    out.instrs.push_back(make_layer(zr, xr, require_inverse(b0, "synth")));
    out.instrs.push_back(make_layer(xr, zr, b0));
    // C3(M2' B0) forward on (X, Y)
    out.instrs.push_back(make_layer(xr, yr, c3b));
    out.instrs.push_back(make_layer(yr, xr, require_inverse(c3b, "synth")));
    out.instrs.push_back(make_layer(xr, yr, c3b));
    // W body; its tail absorbs the row-mode cleaners / col-mode residuals.
    for (std::size_t i = 0; i + 1 < wl.size(); ++i) out.instrs.push_back(wl[i]);
    {
        const CxLayerInstr& tail = wl.back();  // CX(Y -> X) with D
        std::vector<std::uint32_t> controls = tail.controls;
        std::vector<std::uint32_t> targets = tail.targets;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> extra;
        auto add_cleaner = [&](const std::optional<VictimPlan>& vic,
                               const std::vector<std::uint32_t>& part_full) {
            if (!vic) return;
            const std::uint32_t vq = part_full[vic->pos];
            // Row mode merges the cleaner E = I + e_a d^T (d over full part
            // coordinates); col mode merges the residual C' = I + e_a w^T
            // (w over reduced coordinates). Both feed the victim target.
            bool any = false;
            std::size_t reduced_j = 0;
            for (std::size_t local = 0; local < part_full.size(); ++local) {
                if (local == vic->pos) continue;
                const bool bit = vic->row_mode ? vic->cleaner.get(local)
                                               : vic->residual.get(reduced_j);
                ++reduced_j;
                if (!bit) continue;
                extra.emplace_back(part_full[local], vq);
                any = true;
            }
            if (any && std::find(targets.begin(), targets.end(), vq) == targets.end())
                targets.push_back(vq);
        };
        add_cleaner(vic1, split.part[1]);
        add_cleaner(vic2, split.part[2]);
        for (auto& [c, t] : extra)
            if (std::find(controls.begin(), controls.end(), c) == controls.end())
                controls.push_back(c);
        F2Matrix mat(controls.size(), targets.size());
        auto cpos = [&](std::uint32_t q) {
            return static_cast<std::size_t>(
                std::find(controls.begin(), controls.end(), q) - controls.begin());
        };
        auto tpos = [&](std::uint32_t q) {
            return static_cast<std::size_t>(
                std::find(targets.begin(), targets.end(), q) - targets.begin());
        };
        for (std::size_t i = 0; i < tail.controls.size(); ++i)
            for (std::size_t j = 0; j < tail.targets.size(); ++j)
                if (tail.matrix.get(i, j))
                    mat.set(cpos(tail.controls[i]), tpos(tail.targets[j]), true);
        for (auto& [c, t] : extra) mat.set(cpos(c), tpos(t), true);
        out.instrs.push_back(CxLayerInstr::make(std::move(controls), std::move(targets),
                                                std::move(mat)));
    }
    // Col-mode cleaners stand alone (one extra layer each).
    auto add_col_cleaner = [&](const std::optional<VictimPlan>& vic,
                               const std::vector<std::uint32_t>& part_full) {
        if (!vic || vic->row_mode) return;
        const std::uint32_t vq = part_full[vic->pos];
        std::vector<std::uint32_t> tgts;
        for (std::size_t i = 0; i < part_full.size(); ++i)
            if (i != vic->pos && vic->cleaner.get(i)) tgts.push_back(part_full[i]);
        if (tgts.empty()) return;
        F2Matrix m(1, tgts.size());
        for (std::size_t j = 0; j < tgts.size(); ++j) m.set(0, j, true);
        out.instrs.push_back(CxLayerInstr::make({vq}, std::move(tgts), std::move(m)));
    };
    add_col_cleaner(vic1, split.part[1]);
    add_col_cleaner(vic2, split.part[2]);

    // Elimination layers (reverse order), then preprocessing layers.
    for (auto it = diag.layers.rbegin(); it != diag.layers.rend(); ++it)
        if (!it->matrix.is_zero()) out.instrs.push_back(*it);
    for (auto it = pre.layers.rbegin(); it != pre.layers.rend(); ++it)
        out.instrs.push_back(*it);
    return out;
}

std::vector<CxLayerInstr> small_cx_layers(const F2Matrix& a) {
    const std::size_t n = a.rows();
    F2Matrix work = a;
    std::vector<CxLayerInstr> ops;  // discovery order; emit reversed
    for (std::size_t j = 0; j < n; ++j) {
        if (!work.get(j, j)) {
            // A pivot below the diagonal always exists: the processed columns
            // are unit vectors, so column j has support in rows >= j.
            std::size_t i = F2Vector::npos;
            for (std::size_t r = j + 1; r < n; ++r)
                if (work.get(r, j)) { i = r; break; }
            if (i == F2Vector::npos) throw SynthesisError("small synthesis: singular matrix");
            work.xor_row(j, i);
            F2Matrix m(1, 1);
            m.set(0, 0, true);
            ops.push_back(CxLayerInstr::make({static_cast<std::uint32_t>(i)},
                                             {static_cast<std::uint32_t>(j)}, std::move(m)));
        }
        std::vector<std::uint32_t> targets;
        for (std::size_t r = 0; r < n; ++r)
            if (r != j && work.get(r, j)) targets.push_back(static_cast<std::uint32_t>(r));
        if (!targets.empty()) {
            for (auto t : targets) work.xor_row(t, j);
            F2Matrix m(1, targets.size());
            for (std::size_t t = 0; t < targets.size(); ++t) m.set(0, t, true);
            ops.push_back(CxLayerInstr::make({static_cast<std::uint32_t>(j)},
                                             std::move(targets), std::move(m)));
        }
    }
    if (!work.is_identity()) throw SynthesisError("small synthesis: reduction failed");
    std::reverse(ops.begin(), ops.end());
    return ops;
}

}  // namespace

Circuit synth_cx_ancilla_free(const F2Matrix& a, Rng& rng) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw SynthesisError("synth_cx_ancilla_free: matrix not square");
    if (rank(a) != n) throw SynthesisError("synth_cx_ancilla_free: matrix is singular");

    Circuit c(n, n);
    if (n < 9) {
        if (a.is_identity()) return c;
        for (auto& l : small_cx_layers(a)) c.push(std::move(l));
        return c;
    }

    constexpr int kPartitionAttempts = 512;
    for (int attempt = 0; attempt < kPartitionAttempts; ++attempt) {
        RegisterSplit split = RegisterSplit::thirds(n);
        if (attempt > 0) {
            std::vector<std::uint32_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::size_t at = 0;
            for (int p = 0; p < 3; ++p)
                for (auto& q : split.part[p]) q = perm[at++];
            for (int p = 0; p < 3; ++p) std::sort(split.part[p].begin(), split.part[p].end());
        }
        auto built = build_cx_block(a, split, rng);
        if (!built) continue;
        // Certify the assembled map before accepting the attempt.
        F2Matrix acc = F2Matrix::identity(n);
        for (const auto& ins : built->instrs)
            acc = mul(layer_matrix(std::get<CxLayerInstr>(ins), n), acc);
        if (!(acc == a)) continue;
        for (auto& ins : built->instrs) c.push(std::move(ins));
        return c;
    }
    throw SynthesisError("synth_cx_ancilla_free: no partition admitted the construction");
}

Circuit synth_with_ancilla(const CliffordTableau& t) {
    const std::size_t n = t.num_qubits();
    const LayeredClifford lc = layered_decompose(t);
    Circuit c(2 * n, n);

    std::vector<std::uint32_t> data(n), anc(n);
    for (std::size_t q = 0; q < n; ++q) {
        data[q] = static_cast<std::uint32_t>(q);
        anc[q] = static_cast<std::uint32_t>(n + q);
    }
    for (std::size_t q = 0; q < n; ++q)
        if (lc.l1[q] != c24_identity())
            c.push(SqInstr{data[q], SqGate::c24_gate(lc.l1[q])});

    if (n >= 2) {
        const F2Matrix id = F2Matrix::identity(n);
        const F2Matrix m_inv = require_inverse(lc.cx_matrix, "synth_with_ancilla");
        // C3'(M) against |0^n> ancilla realizes |x,0> -> |Mx,0> in three
        // layers; the first CZ layer of the layered form rides on the last
        // one (it commutes with the Hadamads on the ancilla half).
        c.push(make_layer(data, anc, id ^ lc.cx_matrix));
        c.push(make_layer(anc, data, id));
        for (auto q : anc) c.push(SqInstr{q, SqGate::h()});
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        const F2Matrix last = id ^ m_inv;  // action: anc_t += last(t,s) data_s
        for (std::size_t tq = 0; tq < n; ++tq)
            for (std::size_t s = 0; s < n; ++s)
                if (last.get(tq, s)) pairs.emplace_back(data[s], anc[tq]);
        for (std::size_t q1 = 0; q1 < n; ++q1)
            for (std::size_t q2 = q1 + 1; q2 < n; ++q2)
                if (lc.cz1.get(q1, q2)) pairs.emplace_back(data[q1], data[q2]);
        c.push(GczInstr::make(std::move(pairs)));
        for (auto q : anc) c.push(SqInstr{q, SqGate::h()});
    } else {
        // GL(1) is trivial; everything lives in the local layers.
        for (std::size_t q1 = 0; q1 < n; ++q1)
            for (std::size_t q2 = q1 + 1; q2 < n; ++q2)
                if (lc.cz1.get(q1, q2)) c.push(GczInstr::make({{data[q1], data[q2]}}));
    }

    for (std::size_t q = 0; q < n; ++q)
        if (lc.l2[q] != c24_identity())
            c.push(SqInstr{data[q], SqGate::c24_gate(lc.l2[q])});
    if (n >= 2) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t q1 = 0; q1 < n; ++q1)
            for (std::size_t q2 = q1 + 1; q2 < n; ++q2)
                if (lc.cz2.get(q1, q2)) pairs.emplace_back(data[q1], data[q2]);
        c.push(GczInstr::make(std::move(pairs)));
    }
    for (std::size_t q = 0; q < n; ++q)
        if (lc.l3[q] != c24_identity())
            c.push(SqInstr{data[q], SqGate::c24_gate(lc.l3[q])});
    return c;
}

Circuit synth_ancilla_free(const CliffordTableau& t, bool optimize, Rng& rng) {
    const std::size_t n = t.num_qubits();
    const LayeredClifford lc = layered_decompose(t);
    Circuit c(n, n);
    for (std::size_t q = 0; q < n; ++q)
        if (lc.l1[q] != c24_identity())
            c.push(SqInstr{static_cast<std::uint32_t>(q), SqGate::c24_gate(lc.l1[q])});
    {
        const Circuit v = synth_cx_ancilla_free(lc.cx_matrix, rng);
        for (const auto& ins : v.instructions) c.push(ins);
    }
    auto push_cz = [&](const F2Matrix& cz) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t q1 = 0; q1 < n; ++q1)
            for (std::size_t q2 = q1 + 1; q2 < n; ++q2)
                if (cz.get(q1, q2))
                    pairs.emplace_back(static_cast<std::uint32_t>(q1),
                                       static_cast<std::uint32_t>(q2));
        if (!pairs.empty()) c.push(GczInstr::make(std::move(pairs)));
    };
    push_cz(lc.cz1);
    for (std::size_t q = 0; q < n; ++q)
        if (lc.l2[q] != c24_identity())
            c.push(SqInstr{static_cast<std::uint32_t>(q), SqGate::c24_gate(lc.l2[q])});
    push_cz(lc.cz2);
    for (std::size_t q = 0; q < n; ++q)
        if (lc.l3[q] != c24_identity())
            c.push(SqInstr{static_cast<std::uint32_t>(q), SqGate::c24_gate(lc.l3[q])});
    if (optimize) return optimize_merges(c);
    return c;
}

}  // namespace gtsynth
