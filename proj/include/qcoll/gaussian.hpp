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

// Closed-form integrals between s-type Gaussians with a plane-wave factor.
//
// Every integral here has the shape
//     ∫ g_a(r - A) · exp(i k·r) · Op · g_b(r - B) d³r
// with g_a(r) = exp(-a r²). The Gaussian product times the plane wave is a
// single Gaussian about the complex center Q = P + i k / (2p), which is why
// the nuclear-attraction term needs F0 at complex arguments.

#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/boys.hpp"
#include "qcoll/errors.hpp"

namespace qcoll {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

struct Primitive {
    double exponent = 0.0;
    double coefficient = 0.0;
};

/// Contracted s orbital Σ c_i N(α_i) exp(-α_i r²), normalized to unit norm.
class ContractedS {
  public:
    ContractedS() = default;

    /// `table` holds (exponent, contraction coefficient) over normalized primitives.
    explicit ContractedS(std::vector<Primitive> table) : table_(std::move(table)) {
        if (table_.empty()) throw ContractError("ContractedS: empty primitive table");
        weights_.reserve(table_.size());
        for (const auto& p : table_) {
            if (!(p.exponent > 0.0)) throw ContractError("ContractedS: exponents must be positive");
            weights_.push_back(p.coefficient * std::pow(2.0 * p.exponent / std::numbers::pi, 0.75));
        }
        double s = 0.0;
        for (std::size_t i = 0; i < table_.size(); ++i) {
            for (std::size_t j = 0; j < table_.size(); ++j) {
                s += weights_[i] * weights_[j] *
                     std::pow(std::numbers::pi / (table_[i].exponent + table_[j].exponent), 1.5);
            }
        }
        const double scale = 1.0 / std::sqrt(s);
        for (auto& w : weights_) w *= scale;
    }

    std::size_t size() const { return table_.size(); }
    double exponent(std::size_t i) const { return table_[i].exponent; }
    /// Absolute weight of primitive i including normalization.
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<Primitive>& table() const { return table_; }

    double value(const Vec3& r) const {
        const double r2 = r.squaredNorm();
        double v = 0.0;
        for (std::size_t i = 0; i < table_.size(); ++i) v += weights_[i] * std::exp(-table_[i].exponent * r2);
        return v;
    }

  private:
    std::vector<Primitive> table_;
    std::vector<double> weights_;
};

/// Reads whitespace-separated "exponent coefficient" rows; '#' starts a comment.
inline std::vector<Primitive> read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open basis file '" + path + "'");
    std::vector<Primitive> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        Primitive p;
        if (!(row >> p.exponent)) continue;
        if (!(row >> p.coefficient)) throw ConfigError("basis file '" + path + "': row without coefficient");
        out.push_back(p);
    }
    if (out.empty()) throw ConfigError("basis file '" + path + "' has no primitives");
    return out;
}

/// One bra/ket primitive pair with plane wave exp(i k·r) between them.
class GaussianPair {
  public:
    GaussianPair(double a, const Vec3& A, double b, const Vec3& B, const Vec3& k) : b_(b), B_(B) {
        using std::numbers::pi;
        p_ = a + b;
        const Vec3 P = (a * A + b * B) / p_;
        const double kab = std::exp(-a * b / p_ * (A - B).squaredNorm());
        Q_ = P.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5 / p_) * k.cast<std::complex<double>>();
        scale_ = kab * std::exp(std::complex<double>(-k.squaredNorm() / (4.0 * p_), k.dot(P)));
        overlap_ = scale_ * std::pow(pi / p_, 1.5);
    }

    /// ∫ g_a e^{ik·r} g_b
    std::complex<double> overlap() const { return overlap_; }

    /// ∫ g_a e^{ik·r} (-½∇²) g_b, the Laplacian acting on the ket Gaussian only.
    std::complex<double> kinetic() const {
        const CVec3 d = Q_ - B_.cast<std::complex<double>>();
        const std::complex<double> r2 = 1.5 / p_ + (d.transpose() * d)(0, 0);
        return overlap_ * (3.0 * b_ - 2.0 * b_ * b_ * r2);
    }

    /// ∫ g_a e^{ik·r} ∇g_b
    CVec3 gradient() const {
        const CVec3 d = Q_ - B_.cast<std::complex<double>>();
        return (-2.0 * b_) * overlap_ * d;
    }

    /// ∫ g_a e^{ik·r} g_b / |r - C|
    std::complex<double> coulomb(const Vec3& C) const {
        const CVec3 d = Q_ - C.cast<std::complex<double>>();
        const std::complex<double> d2 = d(0) * d(0) + d(1) * d(1) + d(2) * d(2);
        return scale_ * (2.0 * std::numbers::pi / p_) * boys_f0(p_ * d2);
    }

  private:
    double p_ = 0.0;
    double b_ = 0.0;
    Vec3 B_;
    CVec3 Q_;
    std::complex<double> scale_;
    std::complex<double> overlap_;
};

struct OrbitalIntegrals {
    std::complex<double> overlap = 0.0;
    std::complex<double> kinetic = 0.0;
    CVec3 gradient = CVec3::Zero();
    std::vector<std::complex<double>> coulomb;
};

/// Contracted-orbital integrals ⟨φ(r-A)| e^{ik·r} {1, -½∇², ∇, 1/|r-C|} |φ(r-B)⟩.
inline OrbitalIntegrals orbital_integrals(const ContractedS& bra, const Vec3& A, const ContractedS& ket,
                                          const Vec3& B, const Vec3& k, std::initializer_list<Vec3> centers) {
    OrbitalIntegrals out;
    out.coulomb.assign(centers.size(), 0.0);
    for (std::size_t i = 0; i < bra.size(); ++i) {
        for (std::size_t j = 0; j < ket.size(); ++j) {
            const GaussianPair g(bra.exponent(i), A, ket.exponent(j), B, k);
            const double w = bra.weight(i) * ket.weight(j);
            out.overlap += w * g.overlap();
            out.kinetic += w * g.kinetic();
            out.gradient += w * g.gradient();
            std::size_t c = 0;
            for (const auto& C : centers) out.coulomb[c++] += w * g.coulomb(C);
        }
    }
    return out;
}

}  // namespace qcoll
