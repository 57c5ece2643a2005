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

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/errors.hpp"
#include "qcoll/lcu.hpp"
#include "qcoll/ode.hpp"
#include "qcoll/statevector.hpp"

namespace qcoll {

inline Eigen::VectorXcd to_eigen(const StateVector& s) {
    Eigen::VectorXcd v(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) v[i] = s[i];
    return v;
}

inline StateVector from_eigen(int n_qubits, const Eigen::VectorXcd& v) {
    return {n_qubits, std::vector<cplx>(v.data(), v.data() + v.size())};
}

/// dy = −i Σ_γ g_γ H_γ y, without allocating a StateVector per call.
inline void schrodinger_rhs(const std::vector<PauliString>& terms, const std::vector<double>& g,
                            const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy.setZero(y.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (g[k] == 0.0) continue;
        const auto& u = terms[k];
        const auto x = u.x_mask();
        const auto z = u.z_mask();
        const cplx base = cplx(0.0, -1.0) * g[k] * i_pow(u.phase() + u.y_count());
        for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(y.size()); ++j) {
            dy[j ^ x] += (std::popcount(z & j) & 1 ? -base : base) * y[j];
        }
    }
}

struct ExactResult {
    std::vector<StateVector> states;
    OdeStats stats;
};

/// Integrates i ψ̇ = H(t) ψ over t_grid; no renormalization.
inline ExactResult propagate_exact(const LcuHamiltonian& h, const StateVector& psi0, const std::vector<double>& t_grid,
                                   double rtol = 1e-11, double atol = 1e-11) {
    if (!(rtol >= 1e-13 && rtol <= 1e-6) || !(atol >= 1e-13 && atol <= 1e-6)) {
        throw ContractError("propagate_exact: tolerances must lie in [1e-13, 1e-6]");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ContractError("propagate_exact: initial state not normalized");
    if (h.size() > 0 && h.n_qubits() != psi0.n_qubits()) throw DimensionError("propagate_exact: qubit count mismatch");
    const auto& terms = h.terms();
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        schrodinger_rhs(terms, h.coefficients(t), y, dy);
    };
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = atol;
    ExactResult res;
    const auto ys = integrate_dopri5(rhs, to_eigen(psi0), t_grid, opt, &res.stats);
    res.states.reserve(ys.size());
    for (const auto& y : ys) res.states.push_back(from_eigen(psi0.n_qubits(), y));
    return res;
}

}  // namespace qcoll
