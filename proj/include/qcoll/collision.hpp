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

// One-electron H⁺ + H(1s) collision Hamiltonian on a straight-line trajectory.
//
// Target nucleus sits at the origin and the projectile moves along
// R(t) = (b, 0, v t). The projectile 1s orbital travels with the plane-wave
// translation factor exp(i v·r − i v² t / 2). Both orbitals carry exp(−i ε t).
// The one-body block in each spin sector is
//     h_eff = ½ [S^{-1/2} (H − T) S^{-1/2} + h.c.],  T = ⟨χ_p| i∂_t |χ_q⟩.

#pragma once

#include <algorithm>
#include <map>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/constants.hpp"
#include "qcoll/errors.hpp"
#include "qcoll/fermion.hpp"
#include "qcoll/gaussian.hpp"
#include "qcoll/lcu.hpp"

namespace qcoll {

#ifndef QCOLL_DATA_DIR
#define QCOLL_DATA_DIR "data"
#endif

inline std::string default_data_dir() { return QCOLL_DATA_DIR; }

inline std::string default_basis_path() { return default_data_dir() + "/basis/sto-3g_h1s.dat"; }

/// Projectile speed in atomic units for a proton of kinetic energy E (keV).
inline double velocity_from_energy(double energy_keV) {
    if (!(energy_keV > 0.0)) throw ContractError("velocity_from_energy: energy must be positive");
    const double e_hartree = energy_keV * 1000.0 / constants::kHartreeEv;
    return std::sqrt(2.0 * e_hartree / constants::kProtonMass);
}

struct TrajectoryContext {
    double energy_keV = 0.0;
    double v = 0.0;
    double b = 0.0;
    double z_span = 30.0;
    int n_steps = 0;
    std::vector<double> t_grid;

    double t_min() const { return t_grid.front(); }
    double t_max() const { return t_grid.back(); }
};

/// Uniform grid of n_steps times covering z = v t in [−z_span/2, z_span/2].
inline TrajectoryContext make_trajectory(double energy_keV, double b, double z_span = 30.0, int n_steps = 2001) {
    if (!(b >= 0.0)) throw ContractError("make_trajectory: impact parameter must be non-negative");
    if (!(z_span > 0.0)) throw ContractError("make_trajectory: z_span must be positive");
    if (n_steps < 3) throw ContractError("make_trajectory: need at least 3 time steps");
    TrajectoryContext ctx;
    ctx.energy_keV = energy_keV;
    ctx.v = velocity_from_energy(energy_keV);
    ctx.b = b;
    ctx.z_span = z_span;
    ctx.n_steps = n_steps;
    ctx.t_grid.resize(n_steps);
    const int mid = (n_steps - 1) / 2;
    for (int i = 0; i < n_steps; ++i) {
        // Mirror the two halves so the grid is exactly symmetric about t = 0.
        const int k = i <= mid ? i : n_steps - 1 - i;
        const double z = -0.5 * z_span + z_span * k / (n_steps - 1);
        ctx.t_grid[i] = (i <= mid ? z : -z) / ctx.v;
    }
    if (n_steps % 2 == 1) ctx.t_grid[mid] = 0.0;
    return ctx;
}

/// ⟨φ| −½∇² − 1/r |φ⟩ for an orbital centered on its own nucleus.
inline double orbital_energy(const ContractedS& phi) {
    const Vec3 o = Vec3::Zero();
    const auto ints = orbital_integrals(phi, o, phi, o, o, {o});
    return (ints.kinetic - ints.coulomb[0]).real();
}

struct CollisionModel {
    ContractedS orbital;
    double epsilon = 0.0;
    bool etf = true;

    /// Orbital from `basis_path`; ε defaults to the orbital's own energy.
    static CollisionModel load(const std::string& basis_path = default_basis_path(),
                               std::optional<double> epsilon = std::nullopt, bool etf = true) {
        CollisionModel m;
        m.orbital = ContractedS(read_basis_file(basis_path));
        m.epsilon = epsilon.value_or(orbital_energy(m.orbital));
        m.etf = etf;
        return m;
    }
};

/// Target (index 0) and projectile (index 1) channel matrices at one time.
struct ChannelMatrices {
    Eigen::Matrix2cd S;
    Eigen::Matrix2cd Hmat;
    Eigen::Matrix2cd T;
    Eigen::Matrix2cd h_eff;
};

/// Hermitian S^{-1/2}; throws when S is not numerically positive definite.
inline Eigen::Matrix2cd inverse_sqrt_overlap(const Eigen::Matrix2cd& S, const std::string& context) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (S + S.adjoint()));
    const auto& w = es.eigenvalues();
    if (!(w.minCoeff() > 1e-10)) {
        std::ostringstream os;
        os << "overlap matrix not positive definite (min eigenvalue " << w.minCoeff() << ") at " << context;
        throw SingularityError(os.str());
    }
    const Eigen::Vector2d inv = w.cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

/// Channel matrices for projectile offset R and velocity vector vel at time t.
inline ChannelMatrices channel_matrices(const CollisionModel& model, const Vec3& R, const Vec3& vel, double t,
                                        const std::string& context = "") {
    using cplx = std::complex<double>;
    const Vec3 o = Vec3::Zero();
    const Vec3 k = model.etf ? vel : Vec3::Zero();
    const double k2 = k.squaredNorm();
    const cplx phase = model.etf ? std::exp(cplx(0.0, -0.5 * k2 * t)) : cplx(1.0);
    const double eps = model.epsilon;
    const auto& phi = model.orbital;

    const auto tt = orbital_integrals(phi, o, phi, o, Vec3::Zero(), {o, R});
    const auto pp = orbital_integrals(phi, R, phi, R, Vec3::Zero(), {o, R});
    const auto tp = orbital_integrals(phi, o, phi, R, k, {o, R});
    const auto pt = orbital_integrals(phi, R, phi, o, Vec3(-k), {o, R});

    const cplx i(0.0, 1.0);
    ChannelMatrices m;
    m.S(0, 0) = tt.overlap;
    m.S(1, 1) = pp.overlap;
    m.S(0, 1) = phase * tp.overlap;
    m.S(1, 0) = std::conj(phase) * pt.overlap;

    const cplx v_grad_tp = vel.cast<cplx>().dot(tp.gradient);
    const cplx k_grad_tp = k.cast<cplx>().dot(tp.gradient);
    const cplx k_grad_pp = k.cast<cplx>().dot(pp.gradient);
    const cplx v_grad_pp = vel.cast<cplx>().dot(pp.gradient);

    m.Hmat(0, 0) = tt.kinetic - tt.coulomb[0] - tt.coulomb[1];
    m.Hmat(1, 1) = pp.kinetic - i * k_grad_pp + 0.5 * k2 * pp.overlap - pp.coulomb[0] - pp.coulomb[1];
    m.Hmat(0, 1) = phase * (tp.kinetic - i * k_grad_tp + 0.5 * k2 * tp.overlap - tp.coulomb[0] - tp.coulomb[1]);
    m.Hmat(1, 0) = std::conj(phase) * (pt.kinetic - pt.coulomb[0] - pt.coulomb[1]);

    // i∂_t moves the projectile center (−i v·∇), and differentiates the
    // translation phase (+k²/2) and the energy phase (+ε).
    m.T(0, 0) = eps * tt.overlap;
    m.T(1, 1) = -i * v_grad_pp + (0.5 * k2 + eps) * pp.overlap;
    m.T(0, 1) = phase * (-i * v_grad_tp + (0.5 * k2 + eps) * tp.overlap);
    m.T(1, 0) = std::conj(phase) * eps * pt.overlap;

    const Eigen::Matrix2cd s_inv_half = inverse_sqrt_overlap(m.S, context);
    const Eigen::Matrix2cd g = s_inv_half * (m.Hmat - m.T) * s_inv_half;
    m.h_eff = 0.5 * (g + g.adjoint());
    return m;
}

inline ChannelMatrices channel_matrices(const CollisionModel& model, const TrajectoryContext& ctx, double t) {
    const double slack = 1e-9 * (ctx.t_max() - ctx.t_min());
    if (!(t >= ctx.t_min() - slack && t <= ctx.t_max() + slack)) {
        throw DomainError("channel_matrices: time outside the trajectory grid");
    }
    std::ostringstream os;
    os << "E=" << ctx.energy_keV << " keV, b=" << ctx.b << ", t=" << t;
    return channel_matrices(model, Vec3(ctx.b, 0.0, ctx.v * t), Vec3(0.0, 0.0, ctx.v), t, os.str());
}

/// Orbital ordering: 0 target↑, 1 projectile↑, 2 target↓, 3 projectile↓.
inline SecondQuantizedHamiltonian embed_spin_blocks(const Eigen::Matrix2cd& h) {
    SecondQuantizedHamiltonian sq(4);
    sq.one_body.block<2, 2>(0, 0) = h;
    sq.one_body.block<2, 2>(2, 2) = h;
    return sq;
}

/// Pauli strings reachable from a_p† a_q for every (p, q) in the spin-block
/// pattern, in canonical order. This is the fixed term list of every frame,
/// independent of which coefficients happen to vanish at a given time.
inline std::vector<PauliString> spin_block_terms(const BkIndexSets& sets) {
    std::map<PauliSum::Key, bool> support;
    for (int block = 0; block < 2; ++block) {
        for (int p = 2 * block; p < 2 * block + 2; ++p) {
            for (int q = 2 * block; q < 2 * block + 2; ++q) {
                auto prod = ladder_operator(sets, p, true) * ladder_operator(sets, q, false);
                prod.prune(1e-15);
                for (const auto& [u, c] : prod.terms()) support[{u.x_mask(), u.z_mask()}] = true;
            }
        }
    }
    std::vector<PauliString> terms;
    for (const auto& [key, _] : support) terms.emplace_back(sets.n_orbitals, key.first, key.second);
    return terms;
}

/// Canonical term list and real coefficients of one encoded spin-block Hamiltonian.
inline std::vector<double> encode_frame(const Eigen::Matrix2cd& h_eff, const BkIndexSets& sets,
                                        const std::vector<PauliString>& terms) {
    auto sum = bk_transform(embed_spin_blocks(h_eff), sets);
    std::vector<double> g(terms.size());
    double covered = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto c = sum.coefficient(terms[i]);
        g[i] = c.real();
        covered += std::norm(c);
    }
    double total = 0.0;
    for (const auto& [u, c] : sum.terms()) total += std::norm(c);
    if (total - covered > 1e-24 * std::max(1.0, total)) {
        throw InvariantError("encode_frame: encoded Hamiltonian has terms outside the spin-block support");
    }
    return g;
}

/// BK-encoded frames on the trajectory grid, interpolated by cubic splines.
inline LcuHamiltonian build_frames(const CollisionModel& model, const TrajectoryContext& ctx) {
    const auto sets = build_bk_sets(4);
    auto terms = spin_block_terms(sets);
    LcuFrames frames;
    frames.times = ctx.t_grid;
    frames.coefficients.reserve(ctx.t_grid.size());
    for (const double t : ctx.t_grid) {
        frames.coefficients.push_back(encode_frame(channel_matrices(model, ctx, t).h_eff, sets, terms));
    }
    return LcuHamiltonian::from_frames(std::move(terms), std::move(frames));
}

}  // namespace qcoll
