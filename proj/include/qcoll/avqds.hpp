// Copyright 2026 The qcoll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Adaptive variational quantum dynamics with a product-of-rotations ansatz
//     |Ψ(θ)⟩ = e^{−iθ_N U_N} ⋯ e^{−iθ_1 U_1} |φ₀⟩,
// grown one Pauli rotation at a time against the McLachlan distance.
//
// The identity component of H is a global phase tracked classically; every
// McLachlan quantity below uses the remaining part H'. The metric and force
// carry the usual global-phase projection:
//     A^R_kl = Re⟨∂_kΨ|∂_lΨ⟩ − Re(⟨∂_kΨ|Ψ⟩⟨Ψ|∂_lΨ⟩)
//     C_γ,k  = Im⟨∂_kΨ|H_γ|Ψ⟩ − Im(⟨∂_kΨ|Ψ⟩⟨Ψ|H_γ|Ψ⟩)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/errors.hpp"
#include "qcoll/lcu.hpp"
#include "qcoll/observables.hpp"
#include "qcoll/statevector.hpp"

namespace qcoll {

/// All non-identity n-qubit Pauli strings in canonical (x_mask, z_mask) order.
inline std::vector<PauliString> full_pauli_pool(int n_qubits) {
    std::vector<PauliString> pool;
    const PauliString::Mask lim = PauliString::Mask{1} << n_qubits;
    for (PauliString::Mask x = 0; x < lim; ++x) {
        for (PauliString::Mask z = 0; z < lim; ++z) {
            if (x == 0 && z == 0) continue;
            pool.emplace_back(n_qubits, x, z);
        }
    }
    return pool;
}

struct AdaptiveAnsatz {
    StateVector phi0;
    std::vector<PauliString> ops;
    std::vector<double> theta;
    std::vector<PauliString> pool;

    static AdaptiveAnsatz with_full_pool(const StateVector& phi0) {
        AdaptiveAnsatz a;
        a.phi0 = phi0;
        a.pool = full_pauli_pool(phi0.n_qubits());
        return a;
    }

    std::size_t size() const { return ops.size(); }
};

/// e^{−iθU}|s⟩ = cos θ |s⟩ − i sin θ U|s⟩ for Hermitian U.
inline StateVector apply_rotation(const PauliString& u, double theta, const StateVector& s) {
    StateVector out = s;
    out *= std::cos(theta);
    apply_pauli_add(u, s, cplx(0.0, -std::sin(theta)), out);
    return out;
}

inline StateVector prepare_ansatz_state(const AdaptiveAnsatz& a) {
    if (a.ops.size() != a.theta.size()) throw DimensionError("prepare_ansatz_state: ops and theta lengths differ");
    StateVector psi = a.phi0;
    for (std::size_t k = 0; k < a.ops.size(); ++k) {
        if (!std::isfinite(a.theta[k])) throw ContractError("prepare_ansatz_state: non-finite angle");
        psi = apply_rotation(a.ops[k], a.theta[k], psi);
    }
    return psi;
}

/// ∂_k|Ψ⟩: −iU_k inserted right after rotation k.
inline std::vector<StateVector> ansatz_derivatives(const AdaptiveAnsatz& a) {
    const std::size_t n = a.ops.size();
    std::vector<StateVector> prefix;
    prefix.reserve(n + 1);
    prefix.push_back(a.phi0);
    for (std::size_t k = 0; k < n; ++k) prefix.push_back(apply_rotation(a.ops[k], a.theta[k], prefix.back()));
    std::vector<StateVector> d;
    d.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        StateVector s = apply_pauli(a.ops[k], prefix[k + 1]);
        s *= cplx(0.0, -1.0);
        for (std::size_t j = k + 1; j < n; ++j) s = apply_rotation(a.ops[j], a.theta[j], s);
        d.push_back(std::move(s));
    }
    return d;
}

struct McLachlanState {
    Eigen::MatrixXd A_R;               // n × n
    Eigen::MatrixXd C_I;               // terms × n; identity rows are zero
    std::vector<double> expect_terms;  // ⟨H_γ⟩
    double var_H = 0.0;                // Var_Ψ(H') at the coefficients used to build this state
    double l2 = 0.0;                   // residual at the optimal θ̇
    Eigen::VectorXd theta_dot;         // optimal θ̇
};

/// Symmetric pseudo-inverse solve; eigenvalues below cutoff·λ_max are dropped.
inline Eigen::VectorXd symmetric_lstsq(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, double cutoff = 1e-12) {
    if (m.rows() == 0) return Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& w = es.eigenvalues();
    const double lmax = w.cwiseAbs().maxCoeff();
    Eigen::VectorXd proj = es.eigenvectors().transpose() * b;
    for (Eigen::Index i = 0; i < w.size(); ++i) proj[i] = (lmax > 0.0 && std::abs(w[i]) > cutoff * lmax) ? proj[i] / w[i] : 0.0;
    return es.eigenvectors() * proj;
}

inline Eigen::VectorXd mclachlan_force(const McLachlanState& m, const std::vector<double>& g) {
    if (static_cast<Eigen::Index>(g.size()) != m.C_I.rows()) throw DimensionError("mclachlan: coefficient count mismatch");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m.C_I.cols());
    for (std::size_t k = 0; k < g.size(); ++k) v += g[k] * m.C_I.row(static_cast<Eigen::Index>(k)).transpose();
    return v;
}

/// L² = θ̇ᵀA^Rθ̇ − 2θ̇ᵀ(Σ_γ g_γ C_γ) + Var(H'), clamped at zero.
inline double mclachlan_distance(const McLachlanState& m, const Eigen::VectorXd& theta_dot, const std::vector<double>& g) {
    if (theta_dot.size() != m.A_R.rows()) throw DimensionError("mclachlan_distance: θ̇ length mismatch");
    const Eigen::VectorXd v = mclachlan_force(m, g);
    const double l2 = theta_dot.dot(m.A_R * theta_dot) - 2.0 * theta_dot.dot(v) + m.var_H;
    return std::max(0.0, l2);
}

namespace detail {

/// H'|Ψ⟩ and ⟨Ψ|H'|Ψ⟩ with the identity term removed.
inline StateVector apply_traceless(const std::vector<PauliString>& terms, const std::vector<double>& g,
                                   const StateVector& psi) {
    StateVector out(psi.n_qubits());
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (!terms[k].is_identity() && g[k] != 0.0) apply_pauli_add(terms[k], psi, g[k], out);
    }
    return out;
}

}  // namespace detail

/// Direct statevector evaluation of the McLachlan matrices at coefficients g.
inline McLachlanState mclachlan_matrices(const AdaptiveAnsatz& a, const std::vector<PauliString>& terms,
                                         const std::vector<double>& g) {
    if (g.size() != terms.size()) throw DimensionError("mclachlan_matrices: coefficient count mismatch");
    const StateVector psi = prepare_ansatz_state(a);
    const auto d = ansatz_derivatives(a);
    const Eigen::Index n = static_cast<Eigen::Index>(d.size());
    const Eigen::Index T = static_cast<Eigen::Index>(terms.size());
    McLachlanState m;
    Eigen::VectorXd mk(n);
    for (Eigen::Index k = 0; k < n; ++k) mk[k] = inner_product(psi, d[k]).imag();
    m.A_R.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = k; l < n; ++l) {
            m.A_R(k, l) = inner_product(d[k], d[l]).real() - mk[k] * mk[l];
            m.A_R(l, k) = m.A_R(k, l);
        }
    }
    m.C_I = Eigen::MatrixXd::Zero(T, n);
    m.expect_terms.assign(terms.size(), 0.0);
    for (Eigen::Index x = 0; x < T; ++x) {
        if (terms[x].is_identity()) {
            m.expect_terms[x] = 1.0;
            continue;
        }
        const StateVector hpsi = apply_pauli(terms[x], psi);
        m.expect_terms[x] = inner_product(psi, hpsi).real();
        for (Eigen::Index k = 0; k < n; ++k) m.C_I(x, k) = inner_product(d[k], hpsi).imag() + mk[k] * m.expect_terms[x];
    }
    const StateVector hp = detail::apply_traceless(terms, g, psi);
    const double mean = inner_product(psi, hp).real();
    m.var_H = std::max(0.0, hp.norm_squared() - mean * mean);
    m.theta_dot = symmetric_lstsq(m.A_R, mclachlan_force(m, g));
    m.l2 = mclachlan_distance(m, m.theta_dot, g);
    return m;
}

namespace detail {

/// Controlled-U on the ancilla (top qubit) value c: ½(1 ± Z_a)⊗U + ½(1 ∓ Z_a)⊗I.
inline StateVector controlled_pauli(const PauliString& u, int control_value, const StateVector& s) {
    const int n = s.n_qubits();
    const PauliString::Mask za = PauliString::Mask{1} << (n - 1);
    const PauliString ue(n, u.x_mask(), u.z_mask());
    const PauliString zu(n, u.x_mask(), u.z_mask() | za);
    const PauliString z(n, 0, za);
    const double sgn = control_value == 0 ? 1.0 : -1.0;
    StateVector out(n);
    apply_pauli_add(ue, s, 0.5, out);
    apply_pauli_add(zu, s, 0.5 * sgn, out);
    apply_pauli_add(PauliString::identity(n), s, 0.5, out);
    apply_pauli_add(z, s, -0.5 * sgn, out);
    return out;
}

inline StateVector hadamard_on_top(const StateVector& s) {
    const int n = s.n_qubits();
    const PauliString::Mask a = PauliString::Mask{1} << (n - 1);
    StateVector out(n);
    apply_pauli_add(PauliString(n, a, 0), s, M_SQRT1_2, out);
    apply_pauli_add(PauliString(n, 0, a), s, M_SQRT1_2, out);
    return out;
}

struct BranchOp {
    int after_rotation = -1;  // insert after rotation k; -1 for the end of the circuit
    PauliString op;
};

/// ⟨Z_ancilla⟩ = Re⟨a|b⟩ where branch 0 carries `ins0` and branch 1 carries `ins1`.
inline double hadamard_test(const AdaptiveAnsatz& a, const std::vector<BranchOp>& ins0, const std::vector<BranchOp>& ins1) {
    const int nq = a.phi0.n_qubits();
    const int n = nq + 1;
    StateVector s(n);
    for (std::size_t j = 0; j < a.phi0.dim(); ++j) s[j] = a.phi0[j];
    s = hadamard_on_top(s);
    auto apply_inserts = [&](int position) {
        for (const auto& b : ins0) {
            if (b.after_rotation == position) s = controlled_pauli(b.op, 0, s);
        }
        for (const auto& b : ins1) {
            if (b.after_rotation == position) s = controlled_pauli(b.op, 1, s);
        }
    };
    for (std::size_t k = 0; k < a.ops.size(); ++k) {
        const PauliString ue(n, a.ops[k].x_mask(), a.ops[k].z_mask());
        s = apply_rotation(ue, a.theta[k], s);
        apply_inserts(static_cast<int>(k));
    }
    apply_inserts(-1);
    s = hadamard_on_top(s);
    return expectation(PauliString(n, 0, PauliString::Mask{1} << nq), s);
}

}  // namespace detail

/// Same quantities as mclachlan_matrices, each obtained from a simulated
/// ancilla Hadamard test on N+1 qubits.
inline McLachlanState mclachlan_matrices_hadamard(const AdaptiveAnsatz& a, const std::vector<PauliString>& terms,
                                                  const std::vector<double>& g) {
    using detail::BranchOp;
    using detail::hadamard_test;
    if (g.size() != terms.size()) throw DimensionError("mclachlan_matrices_hadamard: coefficient count mismatch");
    const Eigen::Index n = static_cast<Eigen::Index>(a.ops.size());
    const Eigen::Index T = static_cast<Eigen::Index>(terms.size());
    const int last = -1;
    McLachlanState m;
    Eigen::VectorXd mk(n);
    for (Eigen::Index k = 0; k < n; ++k) mk[k] = -hadamard_test(a, {}, {BranchOp{static_cast<int>(k), a.ops[k]}});
    m.A_R.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            const double re = hadamard_test(a, {BranchOp{static_cast<int>(k), a.ops[k]}}, {BranchOp{static_cast<int>(l), a.ops[l]}});
            m.A_R(k, l) = re - mk[k] * mk[l];
        }
    }
    m.A_R = 0.5 * (m.A_R + m.A_R.transpose()).eval();
    m.C_I = Eigen::MatrixXd::Zero(T, n);
    m.expect_terms.assign(terms.size(), 1.0);
    for (Eigen::Index x = 0; x < T; ++x) {
        if (terms[x].is_identity()) continue;
        m.expect_terms[x] = hadamard_test(a, {}, {BranchOp{last, terms[x]}});
        for (Eigen::Index k = 0; k < n; ++k) {
            m.C_I(x, k) = hadamard_test(a, {BranchOp{static_cast<int>(k), a.ops[k]}}, {BranchOp{last, terms[x]}}) +
                          mk[k] * m.expect_terms[x];
        }
    }
    double h2 = 0.0, h1 = 0.0;
    for (Eigen::Index x = 0; x < T; ++x) {
        if (terms[x].is_identity() || g[x] == 0.0) continue;
        h1 += g[x] * m.expect_terms[x];
        for (Eigen::Index y = 0; y < T; ++y) {
            if (terms[y].is_identity() || g[y] == 0.0) continue;
            h2 += g[x] * g[y] * hadamard_test(a, {BranchOp{last, terms[x]}}, {BranchOp{last, terms[y]}});
        }
    }
    m.var_H = std::max(0.0, h2 - h1 * h1);
    m.theta_dot = symmetric_lstsq(m.A_R, mclachlan_force(m, g));
    m.l2 = mclachlan_distance(m, m.theta_dot, g);
    return m;
}

struct AvqdsStep {
    double t = 0.0;
    double l2 = 0.0;
    int n_theta = 0;
    std::string selected;  // labels of operators added at this step, '+'-joined
    long measurements = 0;
};

namespace detail {

/// Minimal L² after appending `u` with θ = 0 to the current ansatz.
inline double candidate_l2(const McLachlanState& m, const std::vector<StateVector>& d, const StateVector& psi,
                           const StateVector& hpsi, double mean_h, const Eigen::VectorXd& force,
                           const Eigen::VectorXd& mk, const PauliString& u) {
    const Eigen::Index n = m.A_R.rows();
    StateVector dn = apply_pauli(u, psi);
    dn *= cplx(0.0, -1.0);
    const double mn = inner_product(psi, dn).imag();
    Eigen::MatrixXd A(n + 1, n + 1);
    A.topLeftCorner(n, n) = m.A_R;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double v = inner_product(d[k], dn).real() - mk[k] * mn;
        A(k, n) = v;
        A(n, k) = v;
    }
    A(n, n) = dn.norm_squared() - mn * mn;
    Eigen::VectorXd b(n + 1);
    b.head(n) = force;
    b[n] = inner_product(dn, hpsi).imag() + mn * mean_h;
    const Eigen::VectorXd x = symmetric_lstsq(A, b);
    return std::max(0.0, m.var_H - b.dot(x));
}

}  // namespace detail

/// Grows the ansatz until L² < l2_cut at time t, then takes one Euler step of size dt.
inline AvqdsStep adapt_and_step(AdaptiveAnsatz& a, const LcuHamiltonian& h, double t, double dt, double l2_cut,
                                const std::string& context = "") {
    if (!(dt > 0.0)) throw ContractError("adapt_and_step: dt must be positive");
    if (!(l2_cut > 0.0)) throw ContractError("adapt_and_step: l2_cut must be positive");
    const auto& terms = h.terms();
    const auto g = h.coefficients(t);
    const long T = static_cast<long>(terms.size());
    AvqdsStep rec;
    rec.t = t;
    auto m = mclachlan_matrices(a, terms, g);
    auto base_cost = [T](long n) { return n * (n + 1) / 2 + n + n * T + T * (T + 1) / 2; };
    rec.measurements = base_cost(static_cast<long>(a.size()));
    while (m.l2 >= l2_cut) {
        const StateVector psi = prepare_ansatz_state(a);
        const auto d = ansatz_derivatives(a);
        const StateVector hpsi = detail::apply_traceless(terms, g, psi);
        const double mean_h = inner_product(psi, hpsi).real();
        const Eigen::VectorXd force = mclachlan_force(m, g);
        Eigen::VectorXd mk(static_cast<Eigen::Index>(d.size()));
        for (std::size_t k = 0; k < d.size(); ++k) mk[static_cast<Eigen::Index>(k)] = inner_product(psi, d[k]).imag();
        double best = std::numeric_limits<double>::infinity();
        const PauliString* pick = nullptr;
        for (const auto& u : a.pool) {
            if (std::find(a.ops.begin(), a.ops.end(), u) != a.ops.end()) continue;
            const double l2 = detail::candidate_l2(m, d, psi, hpsi, mean_h, force, mk, u);
            if (pick == nullptr || l2 < best - 1e-12 * best) {
                best = l2;
                pick = &u;
            }
            rec.measurements += static_cast<long>(d.size()) + 1 + T;
        }
        if (pick == nullptr || m.l2 - best <= 1e-14) {
            std::ostringstream os;
            os << "adaptive ansatz failed to converge (L2=" << m.l2 << " >= " << l2_cut << ", N_theta=" << a.size()
               << ") at t=" << t;
            if (!context.empty()) os << ", " << context;
            throw ConvergenceError(os.str());
        }
        a.ops.push_back(*pick);
        a.theta.push_back(0.0);
        if (!rec.selected.empty()) rec.selected += '+';
        rec.selected += pick->label();
        m = mclachlan_matrices(a, terms, g);
        rec.measurements += base_cost(static_cast<long>(a.size()));
    }
    for (std::size_t k = 0; k < a.size(); ++k) a.theta[k] += m.theta_dot[static_cast<Eigen::Index>(k)] * dt;
    rec.l2 = m.l2;
    rec.n_theta = static_cast<int>(a.size());
    return rec;
}

struct AvqdsOptions {
    double dt = 0.005;
    double l2_cut = 1e-8;
    std::string context;
};

/// Euler-stepped AVQDS from φ₀ over t_grid; each grid interval is split into
/// equal substeps no longer than dt so that states land on the grid.
inline SimulationRecord evolve_avqds(const LcuHamiltonian& h, const StateVector& phi0, const std::vector<double>& t_grid,
                                     const AvqdsOptions& opt = {}, std::vector<AvqdsStep>* log = nullptr) {
    if (t_grid.size() < 2) throw ContractError("evolve_avqds: need at least two grid times");
    SimulationRecord rec;
    rec.method = "avqds";
    rec.times = t_grid;
    auto a = AdaptiveAnsatz::with_full_pool(phi0);
    const int id = h.identity_index();
    double phase = 0.0;  // −∫ g_0 dt
    double eps = 0.0;
    double prev_sqrt = 0.0;
    double prev_t = t_grid.front();
    bool first = true;
    auto emit = [&](double l2, double t) {
        const double s = std::sqrt(std::max(0.0, l2));
        if (!first) eps += 0.5 * (t - prev_t) * (s + prev_sqrt);
        first = false;
        prev_sqrt = s;
        prev_t = t;
    };
    auto record_grid = [&](StateVector psi, double l2) {
        psi *= std::exp(cplx(0.0, phase));
        rec.states.push_back(std::move(psi));
        rec.l2_trace.push_back(l2);
        rec.n_theta_trace.push_back(static_cast<int>(a.size()));
        rec.epsilon.push_back(eps);
        rec.fl_bound.push_back(fidelity_bound_from_error(eps));
    };
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double t0 = t_grid[i];
        const double span = t_grid[i + 1] - t0;
        const int nsub = std::max(1, static_cast<int>(std::ceil(span / opt.dt - 1e-9)));
        const double hstep = span / nsub;
        for (int s = 0; s < nsub; ++s) {
            const double t = t0 + s * hstep;
            const double g0 = id >= 0 ? h.coefficients(t)[id] : 0.0;
            StateVector before = s == 0 ? prepare_ansatz_state(a) : StateVector();
            const auto step = adapt_and_step(a, h, t, hstep, opt.l2_cut, opt.context);
            emit(step.l2, t);
            if (s == 0) record_grid(std::move(before), step.l2);
            rec.measurement_count += step.measurements;
            phase -= g0 * hstep;
            if (log) log->push_back(step);
        }
    }
    const double t_end = t_grid.back();
    const auto m = mclachlan_matrices(a, h.terms(), h.coefficients(t_end));
    emit(m.l2, t_end);
    record_grid(prepare_ansatz_state(a), m.l2);
    return rec;
}

}  // namespace qcoll
