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

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "qcoll/boys.hpp"
#include "qcoll/collision.hpp"
#include "qcoll/gaussian.hpp"
#include "qcoll/quadrature.hpp"

namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

// Composite Simpson on ∫_0^1 exp(-z t²) dt with many panels.
cplx simpson_f0(cplx z, int n = 20000) {
    const double h = 1.0 / n;
    cplx s = 1.0 + std::exp(-z);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * std::exp(-z * (i * h) * (i * h));
    return s * (h / 3.0);
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    for (int n : {1, 2, 5, 16, 40}) {
        const auto r = qcoll::gauss_legendre(n);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        EXPECT_NEAR(wsum, 2.0, 1e-13);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
            const double want = (k % 2) ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(s, want, 1e-13) << "n=" << n << " k=" << k;
        }
    }
    const auto m = qcoll::gauss_legendre(8, 1.0, 3.0);
    double s = 0.0;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) s += m.weights[i] * m.nodes[i] * m.nodes[i];
    EXPECT_NEAR(s, 26.0 / 3.0, 1e-12);
}

TEST(Boys, KnownValues) {
    EXPECT_NEAR(qcoll::boys_f0(0.0).real(), 1.0, 1e-15);
    EXPECT_NEAR(qcoll::boys_f0(1.0).real(), 0.7468241328124270, 1e-13);
}

TEST(Boys, RealAxisMatchesErf) {
    for (double x : {1e-8, 1e-5, 1e-3, 0.1, 0.5, 2.0, 7.5, 20.0, 39.0, 41.0, 100.0, 1e4}) {
        const double want = 0.5 * std::sqrt(pi / x) * std::erf(std::sqrt(x));
        EXPECT_NEAR(qcoll::boys_f0(x).real(), want, 1e-13 * std::max(1.0, want)) << x;
        EXPECT_EQ(qcoll::boys_f0(x).imag(), 0.0);
    }
}

TEST(Boys, ComplexArgumentsMatchIndependentQuadrature) {
    const cplx zs[] = {{1e-5, 2e-5}, {0.3, 0.4}, {2.0, -3.0}, {5.0, 12.0}, {-4.0, 1.0}, {-20.0, 3.0},
                       {15.0, 30.0}, {0.5, 45.0}, {35.0, -8.0}, {45.0, 10.0}, {-49.0, 0.0}, {8.0, 70.0}};
    for (const auto z : zs) {
        const cplx want = simpson_f0(z);
        const cplx got = qcoll::boys_f0(z);
        EXPECT_LT(std::abs(got - want), 1e-10 * std::max(1.0, std::abs(want))) << z;
    }
}

TEST(Boys, ConjugateSymmetry) {
    for (const cplx z : {cplx(1.0, 2.0), cplx(-3.0, 7.0), cplx(20.0, 50.0)}) {
        EXPECT_LT(std::abs(qcoll::boys_f0(std::conj(z)) - std::conj(qcoll::boys_f0(z))), 1e-14);
    }
}

TEST(Boys, DomainError) {
    EXPECT_THROW(qcoll::boys_f0(cplx(-51.0, 0.0)), qcoll::DomainError);
    EXPECT_THROW(qcoll::boys_f0(cplx(0.0, std::nan(""))), qcoll::DomainError);
}

qcoll::ContractedS sto3g() { return qcoll::ContractedS(qcoll::read_basis_file(qcoll::default_basis_path())); }

TEST(Gaussian, ContractedOrbitalIsNormalized) {
    const auto phi = sto3g();
    // Radial Gauss–Legendre on [0, 15].
    const auto r = qcoll::gauss_legendre(200, 0.0, 15.0);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double v = phi.value(qcoll::Vec3(r.nodes[i], 0, 0));
        s += r.weights[i] * 4.0 * pi * r.nodes[i] * r.nodes[i] * v * v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Gaussian, Sto3gHydrogenEnergy) {
    // Literature STO-3G hydrogen-atom energy.
    EXPECT_NEAR(qcoll::orbital_energy(sto3g()), -0.466581850, 1e-8);
}

TEST(Gaussian, PrimitiveClosedForms) {
    const double a = 0.8;
    const qcoll::Vec3 o = qcoll::Vec3::Zero();
    const qcoll::GaussianPair g(a, o, a, o, o);
    const double n2 = std::pow(2 * a / pi, 1.5);
    EXPECT_NEAR((n2 * g.overlap()).real(), 1.0, 1e-14);
    EXPECT_NEAR((n2 * g.kinetic()).real(), 1.5 * a, 1e-13);
    EXPECT_NEAR((n2 * g.coulomb(o)).real(), 2.0 * std::sqrt(2.0 * a / pi), 1e-13);
    // Off-center overlap of two unit-exponent Gaussians: (π/2)^{3/2} e^{-d²/2}.
    const qcoll::GaussianPair h(1.0, o, 1.0, qcoll::Vec3(0, 0, 1.3), o);
    EXPECT_NEAR(h.overlap().real(), std::pow(pi / 2, 1.5) * std::exp(-1.69 / 2), 1e-14);
}

TEST(Gaussian, PlaneWaveHermiticity) {
    const auto phi = sto3g();
    const qcoll::Vec3 A(0.1, -0.2, 0.3), B(1.2, 0.4, -0.7), k(0.3, -0.5, 0.8);
    const auto ab = qcoll::orbital_integrals(phi, A, phi, B, k, {A, B});
    const auto ba = qcoll::orbital_integrals(phi, B, phi, A, qcoll::Vec3(-k), {A, B});
    EXPECT_LT(std::abs(ab.overlap - std::conj(ba.overlap)), 1e-14);
    EXPECT_LT(std::abs(ab.coulomb[0] - std::conj(ba.coulomb[0])), 1e-14);
    EXPECT_LT(std::abs(ab.coulomb[1] - std::conj(ba.coulomb[1])), 1e-14);
}

TEST(Gaussian, BasisFileErrors) {
    EXPECT_THROW(qcoll::read_basis_file("/nonexistent/basis.dat"), qcoll::ConfigError);
    EXPECT_THROW(qcoll::ContractedS(std::vector<qcoll::Primitive>{}), qcoll::ContractError);
}

}  // namespace
