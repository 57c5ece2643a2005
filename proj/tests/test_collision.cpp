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

#include "qcoll/collision.hpp"
#include "qcoll/quadrature.hpp"
#include "oracles.hpp"

namespace {

using cplx = std::complex<double>;
using qcoll::Vec3;
using std::numbers::pi;

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Collision, VelocityFromEnergy) {
    EXPECT_NEAR(qcoll::velocity_from_energy(1.0), 0.20007, 1e-5);
    EXPECT_NEAR(qcoll::velocity_from_energy(25.0), 1.00035, 1e-5);
    EXPECT_THROW(qcoll::velocity_from_energy(0.0), qcoll::ContractError);
}

TEST(Collision, TrajectoryGridIsSymmetric) {
    const auto c = qcoll::make_trajectory(10.0, 1.6, 30.0, 2001);
    ASSERT_EQ(c.t_grid.size(), 2001u);
    EXPECT_NEAR(c.t_grid.front() * c.v, -15.0, 1e-12);
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) EXPECT_EQ(c.t_grid[i], -c.t_grid[c.t_grid.size() - 1 - i]);
    EXPECT_EQ(c.t_grid[1000], 0.0);
}

struct ChannelCase {
    double energy, b, t;
    bool etf;
};

class ChannelQuadrature : public ::testing::TestWithParam<ChannelCase> {};

TEST_P(ChannelQuadrature, MatchesRealSpaceQuadrature) {
    const auto c = GetParam();
    const auto model = qcoll::CollisionModel::load(qcoll::default_basis_path(), std::nullopt, c.etf);
    const double v = qcoll::velocity_from_energy(c.energy);
    const Vec3 R(c.b, 0.0, v * c.t), vel(0.0, 0.0, v);
    const auto got = qcoll::channel_matrices(model, R, vel, c.t);
    const auto want = qcoll::oracle::real_space(model, R, vel, c.t);
    EXPECT_LT(max_abs(got.S - want.S), 1e-6);
    EXPECT_LT(max_abs(got.Hmat - want.H), 1e-6);
    EXPECT_LT(max_abs(got.T - want.T), 1e-6);
    const Eigen::Matrix2cd sih = qcoll::inverse_sqrt_overlap(want.S, "oracle");
    const Eigen::Matrix2cd g = sih * (want.H - want.T) * sih;
    const Eigen::Matrix2cd h = 0.5 * (g + g.adjoint());
    EXPECT_LT(max_abs(got.h_eff - h), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Cases, ChannelQuadrature,
                         ::testing::Values(ChannelCase{10.0, 1.6, 0.0, true}, ChannelCase{10.0, 1.6, -3.0, true},
                                           ChannelCase{25.0, 0.5, 2.0, true}, ChannelCase{1.0, 3.0, 7.0, true},
                                           ChannelCase{10.0, 1.6, 1.5, false}));

TEST(Collision, EffectiveHamiltonianIsHermitian) {
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(4.8, 2.0, 30.0, 101);
    for (const double t : ctx.t_grid) {
        const auto m = qcoll::channel_matrices(model, ctx, t);
        EXPECT_LT(max_abs(m.h_eff - m.h_eff.adjoint()), 1e-15);
    }
}

TEST(Collision, TimeOutsideGridIsDomainError) {
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(10.0, 1.6, 30.0, 11);
    EXPECT_THROW(qcoll::channel_matrices(model, ctx, ctx.t_max() * 1.01), qcoll::DomainError);
}

TEST(Collision, CoincidentCentersAreSingular) {
    const auto model = qcoll::CollisionModel::load(qcoll::default_basis_path(), std::nullopt, false);
    EXPECT_THROW(qcoll::channel_matrices(model, Vec3::Zero(), Vec3::Zero(), 0.0), qcoll::SingularityError);
}

TEST(Collision, ThirteenTermCanonicalList) {
    const auto sets = qcoll::build_bk_sets(4);
    const auto terms = qcoll::spin_block_terms(sets);
    std::vector<std::string> labels;
    for (const auto& u : terms) labels.push_back(u.label());
    const std::vector<std::string> want = {"I",  "Z0", "Z1Z0", "Z2",     "Z3Z2Z1", "X0",    "Y0",
                                           "Z1X0", "Z1Y0", "X2", "Y2", "Z3X2Z1", "Z3Y2Z1"};
    std::vector<std::string> a = labels, b = want;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    for (std::size_t i = 1; i < terms.size(); ++i) EXPECT_TRUE(canonical_less(terms[i - 1], terms[i]));
}

TEST(Collision, EncodedFrameReproducesEffectiveHamiltonian) {
    // The encoded operator restricted to one-electron states must reproduce h_eff.
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(10.0, 1.6, 30.0, 5);
    const auto sets = qcoll::build_bk_sets(4);
    const auto terms = qcoll::spin_block_terms(sets);
    for (const double t : ctx.t_grid) {
        const auto m = qcoll::channel_matrices(model, ctx, t);
        const auto g = qcoll::encode_frame(m.h_eff, sets, terms);
        ASSERT_EQ(g.size(), 13u);
        qcoll::PauliSum sum(4);
        for (std::size_t k = 0; k < terms.size(); ++k) sum.add(terms[k], g[k]);
        const Eigen::MatrixXcd H = sum.to_matrix();
        const std::uint32_t up[2] = {qcoll::occupation_to_qubit(0b0001, sets), qcoll::occupation_to_qubit(0b0010, sets)};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const cplx want = m.h_eff(i, j);
                EXPECT_LT(std::abs(H(up[i], up[j]) - want), 1e-12) << i << j;
            }
        }
    }
}

TEST(Collision, FramesCarryThirteenTermsEverywhere) {
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(10.0, 1.6, 30.0, 201);
    const auto h = qcoll::build_frames(model, ctx);
    EXPECT_EQ(h.size(), 13u);
    ASSERT_NE(h.frames(), nullptr);
    for (const auto& row : h.frames()->coefficients) EXPECT_EQ(row.size(), 13u);
    EXPECT_EQ(h.identity_index(), 0);
    EXPECT_THROW(h.coefficients(ctx.t_max() + 1.0), qcoll::DomainError);
}

TEST(Collision, FarSeparatedChannelsDecouple) {
    const auto model = qcoll::CollisionModel::load();
    const double v = qcoll::velocity_from_energy(10.0);
    const auto m = qcoll::channel_matrices(model, Vec3(1.6, 0, 40.0), Vec3(0, 0, v), 40.0 / v);
    EXPECT_LT(std::abs(m.h_eff(0, 1)), 1e-8);
    EXPECT_LT(std::abs(m.h_eff(0, 0) - m.h_eff(1, 1)), 1e-8);
}

TEST(Collision, SlowLimitApproachesStaticMolecule) {
    // Without the translation factor h_eff differs from the static two-center
    // matrix by the derivative coupling, which is linear in v.
    const auto model = qcoll::CollisionModel::load(qcoll::default_basis_path(), std::nullopt, false);
    for (const double z : {-3.0, 2.0}) {
        const Vec3 R(1.6, 0.0, z);
        const auto st = qcoll::oracle::real_space(model, R, Vec3::Zero(), 0.0);
        const Eigen::Matrix2cd sih = qcoll::inverse_sqrt_overlap(st.S, "oracle");
        const Eigen::Matrix2cd g = sih * (st.H - model.epsilon * st.S) * sih;
        const Eigen::Matrix2cd h0 = 0.5 * (g + g.adjoint());
        double gap[2];
        int k = 0;
        for (const double v : {1e-2, 1e-3}) gap[k++] = max_abs(qcoll::channel_matrices(model, R, Vec3(0, 0, v), z / v).h_eff - h0);
        EXPECT_LT(gap[0], 1e-3) << z;
        EXPECT_LT(gap[1], 1e-4) << z;
        EXPECT_NEAR(gap[1] / gap[0], 0.1, 0.01) << z;
    }
}

TEST(Collision, OverlapAndHamiltonianMagnitudesAreEvenInTime) {
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(10.0, 1.6, 30.0, 401);
    const std::size_t n = ctx.t_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = qcoll::channel_matrices(model, ctx, ctx.t_grid[i]);
        const auto b = qcoll::channel_matrices(model, ctx, ctx.t_grid[n - 1 - i]);
        EXPECT_LT(max_abs(a.S.cwiseAbs().cast<cplx>() - b.S.cwiseAbs().cast<cplx>()), 1e-10);
        EXPECT_LT(max_abs(a.Hmat.cwiseAbs().cast<cplx>() - b.Hmat.cwiseAbs().cast<cplx>()), 1e-10);
    }
    const auto end = qcoll::channel_matrices(model, ctx, ctx.t_max());
    EXPECT_LT(std::abs(end.h_eff(0, 1)), 1e-6);
}

TEST(Collision, SpinDownBlockMirrorsSpinUpBlock) {
    const auto model = qcoll::CollisionModel::load();
    const auto ctx = qcoll::make_trajectory(4.8, 0.8, 30.0, 101);
    const auto h = qcoll::build_frames(model, ctx);
    auto index = [&](const char* label) {
        for (std::size_t k = 0; k < h.terms().size(); ++k) {
            if (h.terms()[k].label() == label) return k;
        }
        ADD_FAILURE() << label;
        return std::size_t{0};
    };
    const std::pair<const char*, const char*> mirror[] = {
        {"Z0", "Z2"}, {"Z1Z0", "Z3Z2Z1"}, {"X0", "X2"}, {"Y0", "Y2"}, {"Z1X0", "Z3X2Z1"}, {"Z1Y0", "Z3Y2Z1"}};
    for (const auto& row : h.frames()->coefficients) {
        for (const auto& [up, down] : mirror) EXPECT_NEAR(row[index(up)], row[index(down)], 1e-14) << up;
    }
}

}  // namespace
