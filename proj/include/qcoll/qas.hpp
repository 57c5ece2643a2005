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

// Quantum-assisted simulator: a fixed span of Pauli-generated states
// U_i|φ₀⟩ with complex coefficients evolved classically.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/errors.hpp"
#include "qcoll/exact.hpp"
#include "qcoll/lcu.hpp"
#include "qcoll/observables.hpp"
#include "qcoll/ode.hpp"
#include "qcoll/statevector.hpp"

namespace qcoll {

struct MomentBasis {
    StateVector phi0;
    std::vector<PauliString> generators;
    std::vector<StateVector> states;
    int K = 0;
    bool closed = false;
};

/// Index of the computational basis state `s`, or throws.
inline std::uint32_t basis_index(const StateVector& s) {
    std::optional<std::uint32_t> idx;
    for (std::uint32_t j = 0; j < s.dim(); ++j) {
        const double a = std::abs(s[j]);
        if (a > 1e-12) {
            if (idx || std::abs(a - 1.0) > 1e-12) throw ContractError("expected a computational basis state");
            idx = j;
        }
    }
    if (!idx) throw ContractError("expected a computational basis state, got the zero vector");
    return *idx;
}

/// Breadth-first products of Hamiltonian terms applied to φ₀, deduplicated by
/// the flip mask they apply to the computational basis state φ₀.
inline MomentBasis build_moment_basis(const LcuHamiltonian& h, const StateVector& phi0, int k_max) {
    if (k_max < 1) throw ContractError("build_moment_basis: k_max must be >= 1");
    basis_index(phi0);
    const int n = phi0.n_qubits();
    if (h.size() > 0 && h.n_qubits() != n) throw DimensionError("build_moment_basis: qubit count mismatch");
    MomentBasis out;
    out.phi0 = phi0;
    std::set<PauliString::Mask> seen{0};
    out.generators.push_back(PauliString::identity(n));
    std::vector<PauliString> frontier = out.generators;
    for (int level = 1; level <= k_max + 1; ++level) {
        std::vector<PauliString> added;
        for (const auto& gen : frontier) {
            for (const auto& term : h.terms()) {
                const auto prod = pauli_mul(gen, term).without_phase();
                if (seen.insert(prod.x_mask()).second) added.push_back(prod);
            }
        }
        if (added.empty()) {
            out.closed = true;
            break;
        }
        if (level == k_max + 1) break;  // probe only: growth beyond k_max means not closed
        out.K = level;
        out.generators.insert(out.generators.end(), added.begin(), added.end());
        if (out.generators.size() > phi0.dim()) throw InvariantError("build_moment_basis: basis exceeds 2^N states");
        frontier = std::move(added);
    }
    for (const auto& g : out.generators) out.states.push_back(apply_pauli(g, phi0));
    return out;
}

struct QasModel {
    Eigen::MatrixXcd A;
    std::vector<Eigen::MatrixXcd> D;   // one per Hamiltonian term
    std::vector<Eigen::MatrixXcd> E;   // ⟨φ_i|H_γ H_γ'|φ_j⟩ at index γ·T + γ'
    long measurement_count = 0;
};

namespace detail {

/// ⟨φ₀|W|φ₀⟩ for a phased Pauli W; every distinct literal string counts as one
/// measured observable. Sampling applies to the literal (Hermitian) string.
class PauliExpectationCache {
  public:
    PauliExpectationCache(const StateVector& phi0, std::optional<ShotOptions> shots) : phi0_(phi0), shots_(shots) {}

    cplx operator()(const PauliString& w) {
        const auto key = std::make_pair(w.x_mask(), w.z_mask());
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const PauliString literal = w.without_phase();
            std::optional<ShotOptions> s = shots_;
            if (s) s->seed = shots_->seed + 0x9e3779b97f4a7c15ULL * (cache_.size() + 1);
            it = cache_.emplace(key, expectation(literal, phi0_, s)).first;
        }
        return it->second * i_pow(w.phase());
    }

    long count() const { return static_cast<long>(cache_.size()); }

  private:
    const StateVector& phi0_;
    std::optional<ShotOptions> shots_;
    std::map<std::pair<PauliString::Mask, PauliString::Mask>, double> cache_;
};

inline Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace detail

/// Reduces A, D_γ and the ⟨H²⟩ blocks to Pauli expectations on φ₀.
inline QasModel measure_model(const MomentBasis& basis, const LcuHamiltonian& h,
                              std::optional<ShotOptions> shots = std::nullopt) {
    const auto& U = basis.generators;
    const auto& H = h.terms();
    const Eigen::Index n = static_cast<Eigen::Index>(U.size());
    const std::size_t T = H.size();
    detail::PauliExpectationCache ev(basis.phi0, shots);
    QasModel m;
    m.A.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m.A(i, j) = ev(pauli_mul(U[i], U[j]));
    }
    m.A = detail::hermitian_part(m.A);
    m.D.resize(T);
    for (std::size_t g = 0; g < T; ++g) {
        m.D[g].resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) m.D[g](i, j) = ev(pauli_mul(pauli_mul(U[i], H[g]), U[j]));
        }
        m.D[g] = detail::hermitian_part(m.D[g]);
    }
    m.E.resize(T * T);
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = 0; b < T; ++b) {
            auto& e = m.E[a * T + b];
            e.resize(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) e(i, j) = ev(pauli_mul(pauli_mul(pauli_mul(U[i], H[a]), H[b]), U[j]));
            }
        }
    }
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = a; b < T; ++b) {
            const Eigen::MatrixXcd sym = 0.5 * (m.E[a * T + b] + m.E[b * T + a].adjoint());
            m.E[a * T + b] = sym;
            m.E[b * T + a] = sym.adjoint();
        }
    }
    m.measurement_count = ev.count();
    return m;
}

/// Moore–Penrose inverse of a Hermitian matrix; eigenvalues below cutoff·λ_max are dropped.
inline Eigen::MatrixXcd hermitian_pinv(const Eigen::MatrixXcd& a, double cutoff, double* condition = nullptr) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    const auto& w = es.eigenvalues();
    const double lmax = w.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv(w.size());
    double lmin_kept = lmax;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (std::abs(w[i]) > cutoff * lmax && lmax > 0.0) {
            inv[i] = 1.0 / w[i];
            lmin_kept = std::min(lmin_kept, std::abs(w[i]));
        } else {
            inv[i] = 0.0;
        }
    }
    if (condition) {
        const double lmin = w.cwiseAbs().minCoeff();
        *condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

struct QasOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double pinv_cutoff = 1e-12;
};

/// Integrates A α̇ = −i (Σ_γ g_γ D_γ) α from α = e₀ and reconstructs Σ α_i U_i|φ₀⟩.
inline SimulationRecord evolve_qas(const QasModel& model, const MomentBasis& basis, const LcuHamiltonian& h,
                                   const std::vector<double>& t_grid, const QasOptions& opt = {}) {
    SimulationRecord rec;
    rec.method = "qas";
    rec.times = t_grid;
    rec.measurement_count = model.measurement_count;
    const Eigen::Index n = model.A.rows();
    const std::size_t T = model.D.size();
    double cond = 0.0;
    const Eigen::MatrixXcd a_pinv = hermitian_pinv(model.A, opt.pinv_cutoff, &cond);
    if (cond > 1e12) rec.warnings.push_back("ill-conditioned Gram matrix (cond " + std::to_string(cond) + "), regularized solve");

    auto heff = [&](const std::vector<double>& g) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t k = 0; k < T; ++k) m += g[k] * model.D[k];
        return m;
    };
    auto rhs = [&](double t, const Eigen::VectorXcd& a, Eigen::VectorXcd& da) {
        da = cplx(0.0, -1.0) * (a_pinv * (heff(h.coefficients(t)) * a));
    };
    Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(n);
    a0[0] = 1.0;
    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const auto alphas = integrate_abm4(rhs, a0, t_grid, oo);

    const int nq = basis.phi0.n_qubits();
    rec.states.reserve(alphas.size());
    rec.l2_trace.resize(alphas.size());
    for (std::size_t s = 0; s < alphas.size(); ++s) {
        const auto& a = alphas[s];
        StateVector psi(nq);
        for (Eigen::Index i = 0; i < n; ++i) psi.axpy(a[i], basis.states[i]);
        rec.states.push_back(std::move(psi));
        const auto g = h.coefficients(t_grid[s]);
        const Eigen::MatrixXcd D = heff(g);
        Eigen::VectorXcd da;
        rhs(t_grid[s], a, da);
        Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t x = 0; x < T; ++x) {
            if (g[x] == 0.0) continue;
            for (std::size_t y = 0; y < T; ++y) {
                if (g[y] != 0.0) E += (g[x] * g[y]) * model.E[x * T + y];
            }
        }
        // ‖Σ α̇_i φ_i + i H Σ α_j φ_j‖²
        const cplx i(0.0, 1.0);
        const double l2 = (da.adjoint() * model.A * da)(0, 0).real() +
                          2.0 * (i * (da.adjoint() * D * a)(0, 0)).real() + (a.adjoint() * E * a)(0, 0).real();
        rec.l2_trace[s] = std::max(0.0, l2);
    }
    return rec;
}

}  // namespace qcoll
