// Copyright (c) 2026 The GTSynth Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gtsynth/verify.hpp"

#include <cmath>

namespace gtsynth {

namespace {

using Cplx = std::complex<double>;

bool or_of(std::size_t x) { return x != 0; }

void apply_pauli_dense(std::vector<Cplx>& out, const std::vector<Cplx>& in,
                       const PauliString& p) {
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t q = 0; q < p.size(); ++q) {
        if (p.x.get(q)) xmask |= std::size_t(1) << q;
        if (p.z.get(q)) zmask |= std::size_t(1) << q;
    }
    const Cplx ip = std::pow(Cplx(0, 1), p.phase);
    for (std::size_t b = 0; b < in.size(); ++b) {
        if (in[b] == 0.0) continue;
        const int par = std::popcount(b & zmask) & 1;
        out[b ^ xmask] += ip * (par ? -1.0 : 1.0) * in[b];
    }
}

}  // namespace

double phase_aligned_deviation(const std::vector<Cplx>& got,
                               const std::vector<Cplx>& want, Cplx* phase_out) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (std::abs(want[i]) > best) { best = std::abs(want[i]); imax = i; }
    Cplx phase = 1.0;
    if (best > 1e-12 && std::abs(got[imax]) > 1e-12)
        phase = (got[imax] / want[imax]) / std::abs(got[imax] / want[imax]);
    if (phase_out) *phase_out = phase;
    double dev = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i)
        dev = std::max(dev, std::abs(got[i] - phase * want[i]));
    return dev;
}

namespace {

// Shared dense/branch checker for contracts of the form
// |x>|0...0>  ->  sign(x) |image(x)>|0...0>  (one global phase per circuit,
// or per measurement branch for adaptive circuits). Requires image(0) = 0.
EquivalenceVerdict check_basis_contract(const Circuit& c, std::size_t n_data,
                                        const std::function<std::size_t(std::size_t)>& image,
                                        const std::function<double(std::size_t)>& sign) {
    EquivalenceVerdict v;
    if (n_data > 10) {
        v.detail = "data register too large for dense verification";
        return v;
    }
    if (n_data > c.num_qubits) {
        v.detail = "n_data exceeds circuit width";
        return v;
    }
    bool adaptive = false;
    for (const auto& ins : c.instructions)
        if (std::holds_alternative<MeasureXInstr>(ins)) adaptive = true;

    const std::size_t nx = std::size_t(1) << n_data;
    const std::size_t anc = c.num_qubits - n_data;
    double worst = 0.0;

    if (!adaptive) {
        Cplx omega = 1.0;
        for (std::size_t x = 0; x < nx; ++x) {
            const StateVector out = simulate(c, StateVector::basis(c.num_qubits, x));
            if (x == 0) {
                omega = out.amps[0];
                if (std::abs(std::abs(omega) - 1.0) > kVerifyTolerance) {
                    v.failing_basis_state = 0;
                    v.detail = "zero input does not return to |0>|0...0>";
                    v.max_deviation = std::abs(std::abs(omega) - 1.0);
                    return v;
                }
                v.global_phase = omega;
            }
            const std::size_t img = image(x);
            const Cplx want_amp = omega * sign(x);
            double dev = 0.0;
            for (std::size_t i = 0; i < out.amps.size(); ++i) {
                const Cplx want = (i == img) ? want_amp : Cplx(0.0);
                dev = std::max(dev, std::abs(out.amps[i] - want));
            }
            worst = std::max(worst, dev);
            if (dev > kVerifyTolerance && !v.failing_basis_state) {
                v.failing_basis_state = x;
                v.detail = "basis action mismatch";
            }
        }
    } else {
        // Reference ancilla state per branch comes from the x = 0 run; every
        // other x must match it up to the sign(x) factor.
        const auto ref = enumerate_branches(c, StateVector::basis(c.num_qubits, 0));
        std::vector<std::vector<Cplx>> anc_state(ref.size());
        for (std::size_t b = 0; b < ref.size(); ++b) {
            if (ref[b].probability <= 0) continue;
            anc_state[b].assign(std::size_t(1) << anc, 0.0);
            for (std::size_t a = 0; a < anc_state[b].size(); ++a)
                anc_state[b][a] = ref[b].state.amps[a << n_data];
            double mass = 0.0;
            for (auto& am : anc_state[b]) mass += std::norm(am);
            if (std::abs(mass - 1.0) > kVerifyTolerance) {
                v.failing_basis_state = 0;
                v.detail = "branch leaks amplitude off the data basis state";
                v.max_deviation = std::abs(mass - 1.0);
                return v;
            }
        }
        for (std::size_t x = 0; x < nx; ++x) {
            const auto branches = enumerate_branches(c, StateVector::basis(c.num_qubits, x));
            const std::size_t img = image(x);
            for (std::size_t b = 0; b < branches.size(); ++b) {
                if (branches[b].probability <= 0 && ref[b].probability <= 0) continue;
                if ((branches[b].probability <= 0) != (ref[b].probability <= 0)) {
                    v.failing_basis_state = x;
                    v.detail = "branch support depends on the input";
                    v.max_deviation = 1.0;
                    return v;
                }
                const double sgn = sign(x);
                double dev = 0.0;
                for (std::size_t i = 0; i < branches[b].state.amps.size(); ++i) {
                    const std::size_t data = i & (nx - 1);
                    const std::size_t a = i >> n_data;
                    const Cplx want = (data == img) ? sgn * anc_state[b][a] : Cplx(0.0);
                    dev = std::max(dev, std::abs(branches[b].state.amps[i] - want));
                }
                worst = std::max(worst, dev);
                if (dev > kVerifyTolerance && !v.failing_basis_state) {
                    v.failing_basis_state = x;
                    v.detail = "branch state mismatch";
                }
            }
        }
    }
    v.max_deviation = worst;
    v.equal = worst <= kVerifyTolerance && !v.failing_basis_state;
    return v;
}

}  // namespace

EquivalenceVerdict check_or_contract(const Circuit& c, std::size_t n_data) {
    return check_basis_contract(
        c, n_data, [](std::size_t x) { return x; },
        [](std::size_t x) { return or_of(x) ? -1.0 : 1.0; });
}

EquivalenceVerdict check_mct_contract(const Circuit& c, std::size_t num_controls) {
    const std::size_t n = num_controls + 1;
    const std::size_t cmask = (std::size_t(1) << num_controls) - 1;
    return check_basis_contract(
        c, n,
        [=](std::size_t x) {
            return ((x & cmask) == cmask) ? (x ^ (std::size_t(1) << num_controls)) : x;
        },
        [](std::size_t) { return 1.0; });
}

std::vector<Cplx> dense_from_stabilizer(const StabilizerGroup& g, std::size_t num_qubits) {
    const std::size_t dim = std::size_t(1) << num_qubits;
    for (std::size_t seed = 0; seed < dim; ++seed) {
        std::vector<Cplx> v(dim, 0.0);
        v[seed] = 1.0;
        for (const auto& gen : g.gens) {
            std::vector<Cplx> pv(dim, 0.0);
            apply_pauli_dense(pv, v, gen);
            for (std::size_t i = 0; i < dim; ++i) v[i] = 0.5 * (v[i] + pv[i]);
        }
        double norm = 0.0;
        for (const auto& a : v) norm += std::norm(a);
        if (norm > 1e-9) {
            const double s = 1.0 / std::sqrt(norm);
            for (auto& a : v) a *= s;
            return v;
        }
    }
    throw SimulationError("stabilizer group fixes no state");
}

EquivalenceVerdict check_clifford_contract(const Circuit& c, const CliffordTableau& t,
                                           CliffordCheckMode mode, Rng& rng,
                                           int num_stabilizer_inputs) {
    EquivalenceVerdict v;
    const std::size_t n = t.num_qubits();
    if (mode == CliffordCheckMode::exact_tableau) {
        if (c.num_qubits != n)
            throw SimulationError("exact_tableau: circuit width does not match tableau");
        const CliffordTableau replay = CliffordTableau::of_circuit(c);
        v.equal = replay == t;
        v.max_deviation = v.equal ? 0.0 : 1.0;
        if (!v.equal) v.detail = "tableau replay differs";
        return v;
    }

    if (c.num_qubits != 2 * n)
        throw SimulationError("stabilizer_ancilla: circuit must act on 2n qubits");
    const CliffordTableau circuit_tab = CliffordTableau::of_circuit(c);
    const bool dense = (2 * n) <= 12;
    double worst = 0.0;
    for (int trial = 0; trial < num_stabilizer_inputs; ++trial) {
        const Circuit psi_circ = random_clifford_circuit(n, rng);
        const CliffordTableau psi_tab = CliffordTableau::of_circuit(psi_circ);

        StabilizerGroup input_group, expected_group, got_group;
        for (std::size_t q = 0; q < n; ++q) {
            // |psi> stabilizers embedded on the data half, Z on each ancilla.
            const PauliString& zim = psi_tab.z_image(q);
            PauliString emb(2 * n);
            for (std::size_t j = 0; j < n; ++j) {
                emb.x.set(j, zim.x.get(j));
                emb.z.set(j, zim.z.get(j));
            }
            emb.phase = zim.phase;
            input_group.gens.push_back(emb);

            const PauliString uim = t.image_of(zim);
            PauliString exp_emb(2 * n);
            for (std::size_t j = 0; j < n; ++j) {
                exp_emb.x.set(j, uim.x.get(j));
                exp_emb.z.set(j, uim.z.get(j));
            }
            exp_emb.phase = uim.phase;
            expected_group.gens.push_back(exp_emb);
        }
        for (std::size_t q = 0; q < n; ++q) {
            input_group.gens.push_back(PauliString::z_op(2 * n, n + q));
            expected_group.gens.push_back(PauliString::z_op(2 * n, n + q));
        }
        for (const auto& g : input_group.gens)
            got_group.gens.push_back(circuit_tab.image_of(g));

        if (!got_group.same_group(expected_group)) {
            v.equal = false;
            v.max_deviation = 1.0;
            v.detail = "stabilizer groups differ";
            v.failing_basis_state = static_cast<std::size_t>(trial);
            return v;
        }
        if (dense) {
            Circuit prep(2 * n, 2 * n, 0);
            for (const auto& ins : psi_circ.instructions) prep.push(ins);
            const StateVector in = simulate(prep, StateVector(2 * n));
            const StateVector got = simulate(c, in);
            const auto want = dense_from_stabilizer(expected_group, 2 * n);
            const double dev = phase_aligned_deviation(got.amps, want, &v.global_phase);
            worst = std::max(worst, dev);
            if (dev > kVerifyTolerance) {
                v.equal = false;
                v.max_deviation = dev;
                v.detail = "dense state mismatch";
                v.failing_basis_state = static_cast<std::size_t>(trial);
                return v;
            }
        }
    }
    v.equal = true;
    v.max_deviation = worst;
    return v;
}

bool measurement_probs_uniform(const Circuit& c, const StateVector& input, double tol) {
    std::size_t m = 0;
    for (const auto& ins : c.instructions)
        if (std::holds_alternative<MeasureXInstr>(ins)) ++m;
    if (m == 0) return true;
    const double expect = std::ldexp(1.0, -static_cast<int>(m));
    for (const auto& b : enumerate_branches(c, input))
        if (std::abs(b.probability - expect) > tol) return false;
    return true;
}

}  // namespace gtsynth
