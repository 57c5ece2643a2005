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

#include <bit>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qcoll/fermion.hpp"

namespace {

using cplx = std::complex<double>;

// a_p on the occupation basis, bit p of the index = f_p, sign from lower modes.
Eigen::MatrixXcd fock_annihilator(int m, int p) {
    const int dim = 1 << m;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int f = 0; f < dim; ++f) {
        if (!((f >> p) & 1)) continue;
        const int sign = (std::popcount(static_cast<unsigned>(f & ((1 << p) - 1))) & 1) ? -1 : 1;
        a(f ^ (1 << p), f) = sign;
    }
    return a;
}

// Permutation taking occupation-basis vectors to BK qubit-basis vectors.
Eigen::MatrixXcd bk_permutation(const qcoll::BkIndexSets& sets) {
    const int dim = 1 << sets.n_orbitals;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
    for (int f = 0; f < dim; ++f) P(qcoll::occupation_to_qubit(static_cast<std::uint32_t>(f), sets), f) = 1.0;
    return P;
}

TEST(BravyiKitaev, IndexSetsForFourModes) {
    const auto s = qcoll::build_bk_sets(4);
    EXPECT_EQ(qcoll::mask_indices(s.update[0]), (std::vector<int>{1, 3}));
    EXPECT_EQ(qcoll::mask_indices(s.update[1]), (std::vector<int>{3}));
    EXPECT_EQ(qcoll::mask_indices(s.update[2]), (std::vector<int>{3}));
    EXPECT_TRUE(qcoll::mask_indices(s.update[3]).empty());
    EXPECT_TRUE(qcoll::mask_indices(s.parity[0]).empty());
    EXPECT_EQ(qcoll::mask_indices(s.parity[1]), (std::vector<int>{0}));
    EXPECT_EQ(qcoll::mask_indices(s.parity[2]), (std::vector<int>{1}));
    EXPECT_EQ(qcoll::mask_indices(s.parity[3]), (std::vector<int>{1, 2}));
    EXPECT_EQ(qcoll::mask_indices(s.remainder[2]), (std::vector<int>{1}));
}

TEST(BravyiKitaev, OccupationEncoding) {
    const auto s = qcoll::build_bk_sets(4);
    EXPECT_EQ(qcoll::occupation_to_qubit(0b0001, s), 0b1011u);
    EXPECT_EQ(qcoll::occupation_to_qubit(0b0010, s), 0b1010u);
    for (std::uint32_t f = 0; f < 16; ++f) EXPECT_EQ(qcoll::qubit_to_occupation(qcoll::occupation_to_qubit(f, s), s), f);
}

TEST(BravyiKitaev, LadderOperatorsMatchFockOracle) {
    for (int m = 1; m <= 6; ++m) {
        const auto s = qcoll::build_bk_sets(m);
        const Eigen::MatrixXcd P = bk_permutation(s);
        for (int p = 0; p < m; ++p) {
            const Eigen::MatrixXcd want = P * fock_annihilator(m, p) * P.transpose();
            const Eigen::MatrixXcd a = qcoll::ladder_operator(s, p, false).to_matrix();
            const Eigen::MatrixXcd ad = qcoll::ladder_operator(s, p, true).to_matrix();
            EXPECT_LT((a - want).cwiseAbs().maxCoeff(), 1e-14) << "m=" << m << " p=" << p;
            EXPECT_LT((ad - want.adjoint()).cwiseAbs().maxCoeff(), 1e-14) << "m=" << m << " p=" << p;
        }
    }
}

TEST(BravyiKitaev, CanonicalAnticommutation) {
    const auto s = qcoll::build_bk_sets(4);
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            const auto ap = qcoll::ladder_operator(s, p, false).to_matrix();
            const auto aq = qcoll::ladder_operator(s, q, false).to_matrix();
            const Eigen::MatrixXcd ac = ap * aq.adjoint() + aq.adjoint() * ap;
            const Eigen::MatrixXcd aa = ap * aq + aq * ap;
            const Eigen::MatrixXcd want = (p == q ? 1.0 : 0.0) * Eigen::MatrixXcd::Identity(16, 16);
            EXPECT_LT((ac - want).cwiseAbs().maxCoeff(), 1e-14);
            EXPECT_LT(aa.cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(BravyiKitaev, HamiltonianMatchesFockOracleAndSpectrum) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    const int m = 4;
    const auto s = qcoll::build_bk_sets(m);
    qcoll::SecondQuantizedHamiltonian h(m);
    Eigen::MatrixXcd r(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = cplx(g(rng), g(rng));
    h.one_body = 0.5 * (r + r.adjoint());
    // Hermitian pair of two-body terms: h_pqrs and conj on (s r q p).
    const cplx v(0.3, -0.2);
    h.two_body[{0, 1, 2, 3}] = v;
    h.two_body[{3, 2, 1, 0}] = std::conj(v);
    h.two_body[{0, 2, 2, 0}] = 0.7;

    std::vector<Eigen::MatrixXcd> a;
    for (int p = 0; p < m; ++p) a.push_back(fock_annihilator(m, p));
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(16, 16);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) F += h.one_body(p, q) * a[p].adjoint() * a[q];
    for (const auto& [idx, c] : h.two_body) {
        const auto [p, q, rr, ss] = idx;
        F += 0.5 * c * a[p].adjoint() * a[q].adjoint() * a[rr] * a[ss];
    }
    const Eigen::MatrixXcd P = bk_permutation(s);
    const Eigen::MatrixXcd encoded = qcoll::bk_transform(h, s).to_matrix();
    EXPECT_LT((encoded - P * F * P.transpose()).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(F), e2(encoded);
    EXPECT_LT((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BravyiKitaev, CoefficientsAreReal) {
    const auto s = qcoll::build_bk_sets(4);
    qcoll::SecondQuantizedHamiltonian h(4);
    h.one_body(0, 1) = cplx(0.2, 0.5);
    h.one_body(1, 0) = cplx(0.2, -0.5);
    for (const auto& [u, c] : qcoll::bk_transform(h, s).terms()) EXPECT_EQ(c.imag(), 0.0) << u.label();
}

TEST(BravyiKitaev, RejectsNonHermitianInput) {
    const auto s = qcoll::build_bk_sets(2);
    qcoll::SecondQuantizedHamiltonian h(2);
    h.one_body(0, 1) = 1.0;
    EXPECT_THROW(qcoll::bk_transform(h, s), qcoll::ContractError);
    qcoll::SecondQuantizedHamiltonian wrong(3);
    EXPECT_THROW(qcoll::bk_transform(wrong, s), qcoll::DimensionError);
}

}  // namespace
