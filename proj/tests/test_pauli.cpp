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

#include <complex>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qcoll/pauli.hpp"
#include "qcoll/statevector.hpp"
#include "oracles.hpp"

namespace {

using qcoll::PauliString;
using cplx = std::complex<double>;

using qcoll::oracle::dense;

PauliString random_string(std::mt19937_64& rng, int n) {
    const std::uint32_t lim = 1u << n;
    return PauliString(n, static_cast<std::uint32_t>(rng() % lim), static_cast<std::uint32_t>(rng() % lim),
                       static_cast<int>(rng() % 4));
}

qcoll::StateVector random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto& x : a) x = cplx(g(rng), g(rng));
    qcoll::StateVector s(n, a);
    s *= 1.0 / s.norm();
    return s;
}

TEST(Pauli, ProductMatchesDenseMatricesExactly) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const auto a = random_string(rng, n), b = random_string(rng, n);
        const Eigen::MatrixXcd want = dense(a) * dense(b);
        const Eigen::MatrixXcd got = dense(a * b);
        ASSERT_EQ((want - got).cwiseAbs().maxCoeff(), 0.0) << a.label() << " * " << b.label();
    }
}

TEST(Pauli, CommutationMatchesDenseCommutator) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const auto a = random_string(rng, n), b = random_string(rng, n);
        const Eigen::MatrixXcd c = dense(a) * dense(b) - dense(b) * dense(a);
        EXPECT_EQ(qcoll::commutes(a, b), c.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST(Pauli, ApplicationAndExpectationMatchDense) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const auto u = random_string(rng, n);
        const auto s = random_state(rng, n);
        Eigen::VectorXcd v(s.dim());
        for (std::size_t i = 0; i < s.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
        const Eigen::VectorXcd want = dense(u) * v;
        const auto got = qcoll::apply_pauli(u, s);
        for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(got[i] - want[static_cast<Eigen::Index>(i)]), 0.0, 1e-14);
        const cplx e = v.dot(want);
        EXPECT_NEAR(std::abs(qcoll::expectation_complex(u, s) - e), 0.0, 1e-13);
    }
}

TEST(Pauli, LabelsRoundTrip) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const auto u = random_string(rng, 4);
        EXPECT_EQ(PauliString::parse(4, u.label()), u) << u.label();
    }
    EXPECT_EQ(PauliString::parse(4, "Z3X2Z1").label(), "Z3X2Z1");
    EXPECT_EQ(PauliString::parse(4, "-iY0").phase(), 3);
}

TEST(Pauli, TextbookProducts) {
    const auto X = PauliString::single(1, 0, 'X'), Y = PauliString::single(1, 0, 'Y'), Z = PauliString::single(1, 0, 'Z');
    EXPECT_EQ(X * Y, Z.with_phase(1));
    EXPECT_EQ(Y * X, Z.with_phase(3));
    EXPECT_EQ(Y * Z, X.with_phase(1));
    EXPECT_EQ(X * X, PauliString::identity(1));
}

TEST(Pauli, BasisStateAction) {
    // |1011⟩ is index 11 with qubit 0 least significant.
    const auto s = qcoll::StateVector::basis(4, 0b1011);
    const auto x0 = qcoll::apply_pauli(PauliString::parse(4, "X0"), s);
    EXPECT_EQ(std::abs(x0[0b1010] - cplx(1, 0)), 0.0);
    const auto y2 = qcoll::apply_pauli(PauliString::parse(4, "Y2"), s);
    EXPECT_EQ(std::abs(y2[0b1111] - cplx(0, 1)), 0.0);
}

TEST(Pauli, RejectsOutOfRangeMasks) {
    EXPECT_THROW(PauliString(2, 0b100, 0), qcoll::DimensionError);
    EXPECT_THROW(PauliString(13, 0, 0), qcoll::DimensionError);
    EXPECT_THROW(qcoll::pauli_mul(PauliString::identity(2), PauliString::identity(3)), qcoll::DimensionError);
}

TEST(StateVector, ShotEstimateIsSeededAndUnbiased) {
    std::mt19937_64 rng(1);
    const auto s = random_state(rng, 3);
    const auto u = PauliString::parse(3, "X2Z0");
    const double exact = qcoll::expectation(u, s);
    const double a = qcoll::expectation(u, s, qcoll::ShotOptions{200000, 9});
    const double b = qcoll::expectation(u, s, qcoll::ShotOptions{200000, 9});
    EXPECT_EQ(a, b);
    EXPECT_NEAR(a, exact, 0.01);
}

}  // namespace
