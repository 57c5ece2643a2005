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
#include <numbers>

#include <gtest/gtest.h>

#include "qcoll/collision.hpp"
#include "qcoll/exact.hpp"
#include "qcoll/observables.hpp"

namespace {

using cplx = std::complex<double>;
using qcoll::StateVector;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return t;
}

TEST(Observables, TransferProbability) {
    EXPECT_EQ(qcoll::transfer_probability(StateVector::basis(4, 0b1011)), 0.0);
    EXPECT_EQ(qcoll::transfer_probability(StateVector::basis(4, 0b1010)), 1.0);
    EXPECT_EQ(qcoll::transfer_probability(StateVector::basis(4, 0b1000)), 1.0);
    auto s = StateVector::basis(4, 0b1011);
    s += StateVector::basis(4, 0b1010);
    s *= 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(qcoll::transfer_probability(s), 0.5, 1e-15);
    EXPECT_THROW(qcoll::transfer_probability(StateVector(3)), qcoll::DimensionError);
}

TEST(Observables, Fidelity) {
    auto a = StateVector::basis(4, 3);
    EXPECT_NEAR(qcoll::fidelity(a, a), 1.0, 1e-15);
    EXPECT_EQ(qcoll::fidelity(a, StateVector::basis(4, 5)), 0.0);
    auto b = a;
    b *= std::exp(cplx(0.0, 0.7));
    EXPECT_NEAR(qcoll::fidelity(b, a), 1.0, 1e-15);
}

TEST(Observables, FidelityBoundClosedForms) {
    const auto t = linspace(0.0, 2.0, 201);
    for (double v : qcoll::variational_fidelity_bound(std::vector<double>(t.size(), 0.0), t)) EXPECT_EQ(v, 1.0);
    const double c = 1e-3;
    const auto f = qcoll::variational_fidelity_bound(std::vector<double>(t.size(), c), t);
    EXPECT_NEAR(f.back(), std::pow(1.0 - c * 4.0 / 2.0, 2), 1e-14);
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LE(f[i], f[i - 1]);
    const auto clamped = qcoll::variational_fidelity_bound({-1.0, -1.0}, {0.0, 1.0});
    EXPECT_EQ(clamped.back(), 1.0);
}

TEST(Observables, AsymptoticProbability) {
    qcoll::SimulationRecord r;
    r.p_of_t.assign(100, 0.3);
    for (std::size_t i = 50; i < 100; ++i) r.p_of_t[i] = 0.8;
    EXPECT_NEAR(qcoll::asymptotic_probability(r), 0.8, 1e-15);
    EXPECT_TRUE(r.warnings.empty());
    r.p_of_t[97] = 0.5;
    qcoll::asymptotic_probability(r);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_THROW(qcoll::asymptotic_probability(r, 0.0), qcoll::ContractError);
}

TEST(Observables, CrossSectionAnalyticCase) {
    // P(b) = e^{-b}: σ = 2π ∫_0^{10} b e^{-b} db = 2π(1 − 11 e^{-10}).
    const auto b = linspace(0.02, 10.0, 500);
    std::vector<double> p(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) p[i] = std::exp(-b[i]);
    const auto s = qcoll::cross_section(b, p);
    const double want = 2.0 * std::numbers::pi * (1.0 - 11.0 * std::exp(-10.0));
    EXPECT_NEAR(s.sigma_au, want, 1e-3);
    EXPECT_NEAR(s.sigma_au, 6.280, 1e-3);
    EXPECT_EQ(s.n_impact_points, 500);
    EXPECT_NEAR(s.sigma_cm2 / 0.280028561, s.sigma_au, 1e-12 * s.sigma_au);
}

TEST(Observables, CrossSectionEdgeCases) {
    const auto b = linspace(0.1, 10.0, 100);
    EXPECT_EQ(qcoll::cross_section(b, std::vector<double>(b.size(), 0.0)).sigma_au, 0.0);
    EXPECT_THROW(qcoll::cross_section(linspace(0.1, 1.0, 9), std::vector<double>(9, 0.5)),
                 qcoll::QuadratureResolutionError);
    std::vector<double> lo(b.size()), hi(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        lo[i] = 0.5 * std::exp(-b[i]);
        hi[i] = lo[i] + 0.01 * std::sin(b[i]) * std::sin(b[i]);
    }
    EXPECT_LE(qcoll::cross_section(b, lo).sigma_au, qcoll::cross_section(b, hi).sigma_au);
}

TEST(Observables, LargeImpactParameterGivesNoCapture) {
    const auto model = qcoll::CollisionModel::load();
    for (double e : {1.0, 10.0, 25.0}) {
        const auto ctx = qcoll::make_trajectory(e, 10.0, 30.0, 1001);
        const auto h = qcoll::build_frames(model, ctx);
        qcoll::SimulationRecord r;
        r.times = ctx.t_grid;
        r.states = qcoll::propagate_exact(h, StateVector::basis(4, 0b1011), ctx.t_grid).states;
        qcoll::fill_observables(r, nullptr);
        EXPECT_LT(r.p_asymptotic, 1e-3) << e;
        // Capture plus survival stays inside the one-electron spin-up pair.
        for (const auto& s : r.states) {
            EXPECT_NEAR(qcoll::transfer_probability(s) + std::norm(s[0b1011]), 1.0, 1e-6);
        }
    }
}

}  // namespace
