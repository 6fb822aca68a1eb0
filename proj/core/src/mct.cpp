// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/mct.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gtsynth {

const char* mct_method_name(MctMethod m) {
    switch (m) {
        case MctMethod::recursive: return "recursive";
        case MctMethod::flat: return "flat";
        case MctMethod::adaptive_flat: return "adaptive-flat";
        case MctMethod::adaptive_recursive: return "adaptive-recursive";
    }
    return "?";
}

std::array<std::complex<double>, 4> x_q_unitary(std::uint32_t q) {
    using Cplx = std::complex<double>;
    const Cplx w = std::polar(1.0, std::numbers::pi / std::ldexp(1.0, static_cast<int>(q)));
    // H diag(1, w) H
    return {0.5 * (1.0 + w), 0.5 * (1.0 - w), 0.5 * (1.0 - w), 0.5 * (1.0 + w)};
}

std::size_t iterated_log(std::size_t n) {
    if (n == 0) throw std::invalid_argument("iterated_log: n must be >= 1");
    std::size_t count = 0;
    double x = static_cast<double>(n);
    while (x > 1.0) {
        x = std::log2(x);
        ++count;
    }
    return count;
}

std::size_t reduced_size(std::size_t n) { return std::bit_width(n); }

std::size_t reduction_levels(std::size_t n) {
    if (n < 2) throw std::invalid_argument("reduction_levels: n must be >= 2");
    std::size_t t = 0;
    while (n > 2) {
        n = reduced_size(n);
        ++t;
    }
    return t;
}

MctPlan mct_plan(std::size_t n, MctMethod method) {
    if (n < 2) throw std::invalid_argument("mct_plan: register must have >= 2 qubits");
    MctPlan plan;
    plan.n = n;
    plan.method = method;
    plan.p = reduced_size(n);
    const std::size_t t = reduction_levels(n);
    if (method == MctMethod::recursive || method == MctMethod::adaptive_recursive) {
        std::size_t s = n;
        while (s > 2) {
            s = reduced_size(s);
            plan.level_sizes.push_back(s);
            plan.num_ancilla += s;
        }
        plan.predicted_gt_cost =
            method == MctMethod::recursive ? 2 * t + 1 : t + 1;
    } else {
        plan.num_ancilla = (std::size_t(1) << plan.p) - 1;
        plan.predicted_gt_cost = method == MctMethod::flat ? 4 : 2;
    }
    return plan;
}

namespace {

// H on the target block, CZ^(1/2^q) pairs (one GT), H again: a layer of
// fractional CNOTs CX_q from every source qubit onto target block qubit q.
void push_frac_layer(Circuit& c, const std::vector<std::uint32_t>& sources,
                     const std::vector<std::uint32_t>& targets, bool dagger) {
    for (auto t : targets) c.push(SqInstr{t, SqGate::h()});
    std::vector<GtInstr::Term> terms;
    for (std::size_t q = 0; q < targets.size(); ++q) {
        Angle a = Angle::inv_pow2(static_cast<std::uint32_t>(q));
        if (dagger) a = a.negated();
        for (auto s : sources) terms.push_back({s, targets[q], a});
    }
    c.push(GtInstr::make(std::move(terms)));
    for (auto t : targets) c.push(SqInstr{t, SqGate::h()});
}

// Z Z CZ realizes the two-qubit phase oracle diag(1,-1,-1,-1).
void push_or2(Circuit& c, std::uint32_t a, std::uint32_t b) {
    c.push(SqInstr{a, SqGate::z()});
    c.push(SqInstr{b, SqGate::z()});
    c.push(GczInstr::make({{a, b}}));
}

// Exact dyadic angles theta_s (one per nonzero mask s over p bits) with
// sum_{s . y odd} theta_s = OR(y) mod 2 for every y: solved from the Walsh
// spectrum of OR and certified below, never assumed.
std::vector<Angle> or_phase_angles(std::size_t p) {
    const std::size_t dim = std::size_t(1) << p;
    std::vector<Angle> theta(dim);  // index by mask; mask 0 unused
    for (std::size_t s = 1; s < dim; ++s) {
        long long ghat = 0;  // sum_y OR(y) (-1)^(s.y)
        for (std::size_t y = 1; y < dim; ++y)
            ghat += (std::popcount(s & y) & 1) ? -1 : 1;
        // theta_s = -ghat / 2^(p-1), taken mod 2.
        const std::size_t mod = dim << 1;
        long long num = (-ghat) % static_cast<long long>(mod);
        if (num < 0) num += static_cast<long long>(mod);
        theta[s] = Angle::make(static_cast<std::uint64_t>(num),
                               static_cast<std::uint32_t>(p - 1));
    }
    // Certify exactly in integer arithmetic (units of 1/2^(p-1), mod 2).
    for (std::size_t y = 0; y < dim; ++y) {
        std::uint64_t acc = 0;
        const std::uint64_t unit = std::uint64_t(1) << (p - 1);
        const std::uint64_t mod = unit << 1;
        for (std::size_t s = 1; s < dim; ++s) {
            if (!(std::popcount(s & y) & 1)) continue;
            // theta_s in units of 1/2^(p-1): num * 2^(p-1-log2den)
            acc = (acc + theta[s].num * (unit >> theta[s].log2den)) % mod;
        }
        const std::uint64_t want = (y != 0) ? unit : 0;
        if (acc % mod != want)
            throw std::logic_error("or_phase_angles: phase system check failed");
    }
    return theta;
}

struct FlatLayout {
    std::size_t p = 0;
    std::vector<std::uint32_t> first_stage;          // holder of mask 2^q
    std::vector<std::uint32_t> extras;               // holders of |s| >= 2 masks
    std::vector<std::size_t> extra_masks;            // mask per extras slot
};

FlatLayout flat_layout(std::size_t n) {
    FlatLayout L;
    L.p = reduced_size(n);
    for (std::size_t q = 0; q < L.p; ++q)
        L.first_stage.push_back(static_cast<std::uint32_t>(n + q));
    std::uint32_t next = static_cast<std::uint32_t>(n + L.p);
    for (std::size_t s = 1; s < (std::size_t(1) << L.p); ++s) {
        if (std::popcount(s) < 2) continue;
        L.extras.push_back(next++);
        L.extra_masks.push_back(s);
    }
    return L;
}

CxLayerInstr exor_layer(const FlatLayout& L) {
    F2Matrix m(L.p, L.extras.size());
    for (std::size_t e = 0; e < L.extras.size(); ++e)
        for (std::size_t q = 0; q < L.p; ++q)
            if ((L.extra_masks[e] >> q) & 1) m.set(q, e, true);
    return CxLayerInstr::make(L.first_stage, L.extras, std::move(m));
}

void push_phase_layer(Circuit& c, const FlatLayout& L, const std::vector<Angle>& theta) {
    for (std::size_t q = 0; q < L.p; ++q) {
        const Angle a = theta[std::size_t(1) << q];
        if (!a.is_zero()) c.push(SqInstr{L.first_stage[q], SqGate::zpow(a)});
    }
    for (std::size_t e = 0; e < L.extras.size(); ++e) {
        const Angle a = theta[L.extra_masks[e]];
        if (!a.is_zero()) c.push(SqInstr{L.extras[e], SqGate::zpow(a)});
    }
}

std::vector<std::uint32_t> range_list(std::size_t lo, std::size_t count) {
    std::vector<std::uint32_t> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = static_cast<std::uint32_t>(lo + i);
    return v;
}

}  // namespace

Circuit synth_or_recursive(std::size_t n) {
    const MctPlan plan = mct_plan(n, MctMethod::recursive);
    Circuit c(n + plan.num_ancilla, n);
    std::vector<std::vector<std::uint32_t>> regs;
    regs.push_back(range_list(0, n));
    std::size_t at = n;
    for (auto s : plan.level_sizes) {
        regs.push_back(range_list(at, s));
        at += s;
    }
    for (std::size_t l = 1; l < regs.size(); ++l)
        push_frac_layer(c, regs[l - 1], regs[l], false);
    const auto& base = regs.back();
    push_or2(c, base[0], base[1]);
    for (std::size_t l = regs.size(); l-- > 1;)
        push_frac_layer(c, regs[l - 1], regs[l], true);
    return c;
}

Circuit synth_or_flat(std::size_t n) {
    const MctPlan plan = mct_plan(n, MctMethod::flat);
    const FlatLayout L = flat_layout(n);
    Circuit c(n + plan.num_ancilla, n);
    const auto data = range_list(0, n);
    const auto theta = or_phase_angles(L.p);
    push_frac_layer(c, data, L.first_stage, false);
    c.push(exor_layer(L));
    push_phase_layer(c, L, theta);
    c.push(exor_layer(L));
    push_frac_layer(c, data, L.first_stage, true);
    return c;
}

Circuit synth_or_adaptive_flat(std::size_t n) {
    const MctPlan plan = mct_plan(n, MctMethod::adaptive_flat);
    const FlatLayout L = flat_layout(n);
    Circuit c(n + plan.num_ancilla, n, plan.num_ancilla);
    const auto data = range_list(0, n);
    const auto theta = or_phase_angles(L.p);
    push_frac_layer(c, data, L.first_stage, false);
    c.push(exor_layer(L));
    push_phase_layer(c, L, theta);
    // EXOR uncompute becomes X-basis measurements; each outcome 1 deposits a
    // Z on every first-stage qubit the mask covers, which the conditional Z
    // gates cancel.
    std::uint32_t cbit = 0;
    for (std::size_t e = 0; e < L.extras.size(); ++e) {
        c.push(MeasureXInstr{L.extras[e], cbit});
        for (std::size_t q = 0; q < L.p; ++q)
            if ((L.extra_masks[e] >> q) & 1)
                c.push(ConditionalInstr{cbit, SqInstr{L.first_stage[q], SqGate::z()}});
        ++cbit;
    }
    // Fractional uncompute becomes X-basis measurements with Z^(-1/2^q)
    // corrections on every data qubit.
    for (std::size_t q = 0; q < L.p; ++q) {
        c.push(MeasureXInstr{L.first_stage[q], cbit});
        const Angle corr = Angle::inv_pow2(static_cast<std::uint32_t>(q)).negated();
        for (auto d : data)
            c.push(ConditionalInstr{cbit, SqInstr{d, SqGate::zpow(corr)}});
        ++cbit;
    }
    return c;
}

Circuit synth_or_adaptive_recursive(std::size_t n) {
    const MctPlan plan = mct_plan(n, MctMethod::adaptive_recursive);
    Circuit c(n + plan.num_ancilla, n, plan.num_ancilla);
    std::vector<std::vector<std::uint32_t>> regs;
    regs.push_back(range_list(0, n));
    std::size_t at = n;
    for (auto s : plan.level_sizes) {
        regs.push_back(range_list(at, s));
        at += s;
    }
    for (std::size_t l = 1; l < regs.size(); ++l)
        push_frac_layer(c, regs[l - 1], regs[l], false);
    const auto& base = regs.back();
    push_or2(c, base[0], base[1]);
    // Unwind adaptively: measure each level in the X basis and cancel the
    // deposited phases on the level below.
    std::uint32_t cbit = 0;
    for (std::size_t l = regs.size(); l-- > 1;) {
        for (std::size_t q = 0; q < regs[l].size(); ++q) {
            c.push(MeasureXInstr{regs[l][q], cbit});
            const Angle corr = Angle::inv_pow2(static_cast<std::uint32_t>(q)).negated();
            for (auto d : regs[l - 1])
                c.push(ConditionalInstr{cbit, SqInstr{d, SqGate::zpow(corr)}});
            ++cbit;
        }
    }
    return c;
}

Circuit synth_or(std::size_t n, MctMethod method) {
    switch (method) {
        case MctMethod::recursive: return synth_or_recursive(n);
        case MctMethod::flat: return synth_or_flat(n);
        case MctMethod::adaptive_flat: return synth_or_adaptive_flat(n);
        case MctMethod::adaptive_recursive: return synth_or_adaptive_recursive(n);
    }
    throw std::invalid_argument("synth_or: unknown method");
}

Circuit mct_circuit(std::size_t num_controls, MctMethod method) {
    if (num_controls < 2)
        throw std::invalid_argument("mct_circuit: need at least 2 controls");
    const std::size_t n = num_controls + 1;  // oracle register: controls + target
    const Circuit oracle = synth_or(n, method);
    Circuit c(oracle.num_qubits, n, oracle.num_cbits);
    const std::uint32_t target = static_cast<std::uint32_t>(n - 1);
    c.push(SqInstr{target, SqGate::h()});
    for (std::size_t q = 0; q < n; ++q)
        c.push(SqInstr{static_cast<std::uint32_t>(q), SqGate::x()});
    for (const auto& ins : oracle.instructions) c.push(ins);
    for (std::size_t q = 0; q < n; ++q)
        c.push(SqInstr{static_cast<std::uint32_t>(q), SqGate::x()});
    c.push(SqInstr{target, SqGate::h()});
    return c;
}

}  // namespace gtsynth
