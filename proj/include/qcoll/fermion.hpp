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

// Second-quantized operators and the Bravyi–Kitaev encoding.
//
// Index sets follow the Fenwick-tree construction: qubit j stores the parity
// of occupation bits f_q for q in [j + 1 - lowbit(j + 1), j]. For an orbital
// count that is not a power of two the tree of the next power of two is
// truncated, which leaves rows j < M unchanged.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/errors.hpp"
#include "qcoll/pauli.hpp"

namespace qcoll {

/// Sparse complex combination of phase-free Pauli strings keyed by (x_mask, z_mask).
class PauliSum {
  public:
    using Key = std::pair<PauliString::Mask, PauliString::Mask>;

    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    static PauliSum from(const PauliString& u, std::complex<double> c = 1.0) {
        PauliSum s(u.n_qubits());
        s.add(u, c);
        return s;
    }

    int n_qubits() const { return n_qubits_; }

    /// Adds c·u; the phase of u is folded into the coefficient.
    void add(const PauliString& u, std::complex<double> c) {
        if (u.n_qubits() != n_qubits_) throw DimensionError("PauliSum::add: qubit count mismatch");
        terms_[{u.x_mask(), u.z_mask()}] += c * i_pow(u.phase());
    }

    PauliSum& operator+=(const PauliSum& o) {
        if (o.n_qubits_ != n_qubits_) throw DimensionError("PauliSum: qubit count mismatch");
        for (const auto& [k, c] : o.terms_) terms_[k] += c;
        return *this;
    }

    PauliSum& operator*=(std::complex<double> c) {
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
        if (a.n_qubits_ != b.n_qubits_) throw DimensionError("PauliSum: qubit count mismatch");
        PauliSum out(a.n_qubits_);
        for (const auto& [ka, ca] : a.terms_) {
            const PauliString ua(a.n_qubits_, ka.first, ka.second);
            for (const auto& [kb, cb] : b.terms_) {
                out.add(pauli_mul(ua, PauliString(a.n_qubits_, kb.first, kb.second)), ca * cb);
            }
        }
        return out;
    }

    /// Adjoint: conjugated coefficients on the same Hermitian strings.
    PauliSum adjoint() const {
        PauliSum out(n_qubits_);
        for (const auto& [k, c] : terms_) out.terms_[k] = std::conj(c);
        return out;
    }

    /// Removes coefficients with magnitude <= tol.
    void prune(double tol = 0.0) {
        std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
    }

    /// Terms in canonical (x_mask, z_mask) order.
    std::vector<std::pair<PauliString, std::complex<double>>> terms() const {
        std::vector<std::pair<PauliString, std::complex<double>>> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_) out.emplace_back(PauliString(n_qubits_, k.first, k.second), c);
        return out;
    }

    std::complex<double> coefficient(const PauliString& u) const {
        const auto it = terms_.find({u.x_mask(), u.z_mask()});
        return it == terms_.end() ? 0.0 : it->second * i_pow(u.phase());
    }

    std::size_t size() const { return terms_.size(); }

    /// Dense 2^n matrix, for tests and small oracles.
    Eigen::MatrixXcd to_matrix() const {
        const std::size_t dim = std::size_t{1} << n_qubits_;
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto& [k, c] : terms_) {
            const PauliString u(n_qubits_, k.first, k.second);
            const std::complex<double> base = c * i_pow(u.y_count());
            for (std::uint32_t j = 0; j < dim; ++j) {
                m(j ^ k.first, j) += (std::popcount(k.second & j) & 1) ? -base : base;
            }
        }
        return m;
    }

  private:
    int n_qubits_ = 0;
    std::map<Key, std::complex<double>> terms_;
};

/// Bravyi–Kitaev update, parity, flip and remainder sets plus β over GF(2).
struct BkIndexSets {
    int n_orbitals = 0;
    std::vector<std::uint32_t> beta;      // row j as a bit mask over occupation indices
    std::vector<std::uint32_t> beta_inv;  // row q as a bit mask over qubit indices
    std::vector<std::uint32_t> update;    // U(p): qubits other than p that store f_p
    std::vector<std::uint32_t> parity;    // P(p): qubits whose XOR is f_0 ⊕ … ⊕ f_{p-1}
    std::vector<std::uint32_t> flip;      // F(p): qubits other than p whose XOR with q_p gives f_p
    std::vector<std::uint32_t> remainder; // R(p) = P(p) \ F(p)
};

inline std::vector<int> mask_indices(std::uint32_t m) {
    std::vector<int> out;
    while (m != 0) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

inline BkIndexSets build_bk_sets(int n_orbitals) {
    if (n_orbitals < 1 || n_orbitals > kMaxQubits) {
        throw DimensionError("build_bk_sets: orbital count outside [1, 12]");
    }
    const int m = n_orbitals;
    BkIndexSets s;
    s.n_orbitals = m;
    s.beta.assign(m, 0);
    for (int j = 0; j < m; ++j) {
        const int low = (j + 1) & -(j + 1);
        for (int q = j + 1 - low; q <= j; ++q) s.beta[j] |= 1u << q;
    }
    // β is lower unitriangular, so forward substitution inverts it over GF(2).
    s.beta_inv.assign(m, 0);
    for (int q = 0; q < m; ++q) {
        std::uint32_t row = 1u << q;
        for (int r = 0; r < q; ++r) {
            if ((s.beta[q] >> r) & 1u) row ^= s.beta_inv[r];
        }
        s.beta_inv[q] = row;
    }
    s.update.assign(m, 0);
    s.parity.assign(m, 0);
    s.flip.assign(m, 0);
    s.remainder.assign(m, 0);
    std::uint32_t prefix = 0;
    for (int p = 0; p < m; ++p) {
        for (int j = 0; j < m; ++j) {
            if (j != p && ((s.beta[j] >> p) & 1u)) s.update[p] |= 1u << j;
        }
        s.parity[p] = prefix;
        s.flip[p] = s.beta_inv[p] & ~(1u << p);
        s.remainder[p] = s.parity[p] & ~s.flip[p];
        prefix ^= s.beta_inv[p];
    }
    return s;
}

/// Encoded a_p† (dagger) or a_p.
///
/// a_p† = ½ X_U X_p Z_P − (i/2) X_U Y_p Z_R, a_p = (a_p†)†.
inline PauliSum ladder_operator(const BkIndexSets& sets, int p, bool dagger) {
    if (p < 0 || p >= sets.n_orbitals) throw DimensionError("ladder_operator: orbital index out of range");
    const int n = sets.n_orbitals;
    const std::uint32_t bit = 1u << p;
    const PauliString xz(n, sets.update[p] | bit, sets.parity[p]);
    const PauliString yz(n, sets.update[p] | bit, sets.remainder[p] | bit);
    PauliSum out(n);
    out.add(xz, 0.5);
    out.add(yz, std::complex<double>(0.0, dagger ? -0.5 : 0.5));
    return out;
}

/// Σ h_pq a_p† a_q + ½ Σ h_pqrs a_p† a_q† a_r a_s over M spin orbitals.
struct SecondQuantizedHamiltonian {
    int n_orbitals = 0;
    Eigen::MatrixXcd one_body;
    std::map<std::tuple<int, int, int, int>, std::complex<double>> two_body;

    explicit SecondQuantizedHamiltonian(int m = 0) : n_orbitals(m), one_body(Eigen::MatrixXcd::Zero(m, m)) {}
};

/// Encodes h as a Pauli sum with real coefficients; drops |g| <= drop_tol.
inline PauliSum bk_transform(const SecondQuantizedHamiltonian& h, const BkIndexSets& sets, double herm_tol = 1e-12,
                             double drop_tol = 0.0) {
    const int m = h.n_orbitals;
    if (sets.n_orbitals != m || h.one_body.rows() != m || h.one_body.cols() != m) {
        throw DimensionError("bk_transform: orbital counts disagree");
    }
    const double dev = (h.one_body - h.one_body.adjoint()).cwiseAbs().maxCoeff();
    if (m > 0 && dev > herm_tol) {
        throw ContractError("bk_transform: one-body matrix not Hermitian (max deviation " + std::to_string(dev) + ")");
    }
    std::vector<PauliSum> up, down;
    for (int p = 0; p < m; ++p) {
        up.push_back(ladder_operator(sets, p, true));
        down.push_back(ladder_operator(sets, p, false));
    }
    PauliSum out(m);
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            const auto c = h.one_body(p, q);
            if (c == 0.0) continue;
            auto term = up[p] * down[q];
            term *= c;
            out += term;
        }
    }
    for (const auto& [idx, c] : h.two_body) {
        const auto [p, q, r, s] = idx;
        if (std::max({p, q, r, s}) >= m || std::min({p, q, r, s}) < 0) {
            throw DimensionError("bk_transform: two-body index out of range");
        }
        if (c == 0.0) continue;
        auto term = up[p] * up[q] * down[r] * down[s];
        term *= 0.5 * c;
        out += term;
    }
    out.prune(drop_tol);
    for (auto& [u, c] : out.terms()) {
        if (std::abs(c.imag()) > herm_tol * std::max(1.0, std::abs(c))) {
            throw InvariantError("bk_transform: complex coefficient on " + u.label());
        }
    }
    return out;
}

/// q = β·f over GF(2); bit p of `occupation` is f_p.
inline std::uint32_t occupation_to_qubit(std::uint32_t occupation, const BkIndexSets& sets) {
    if (sets.n_orbitals < 32 && (occupation >> sets.n_orbitals) != 0) {
        throw DimensionError("occupation_to_qubit: occupation has bits beyond the orbital count");
    }
    std::uint32_t q = 0;
    for (int j = 0; j < sets.n_orbitals; ++j) {
        if (std::popcount(sets.beta[j] & occupation) & 1) q |= 1u << j;
    }
    return q;
}

/// f = β⁻¹·q over GF(2).
inline std::uint32_t qubit_to_occupation(std::uint32_t qubits, const BkIndexSets& sets) {
    std::uint32_t f = 0;
    for (int p = 0; p < sets.n_orbitals; ++p) {
        if (std::popcount(sets.beta_inv[p] & qubits) & 1) f |= 1u << p;
    }
    return f;
}

}  // namespace qcoll
