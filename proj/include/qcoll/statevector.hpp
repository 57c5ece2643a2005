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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qcoll/errors.hpp"
#include "qcoll/pauli.hpp"

namespace qcoll {

using cplx = std::complex<double>;

/// Dense 2^n amplitude vector; qubit 0 is the least significant index bit.
class StateVector {
  public:
    StateVector() = default;

    explicit StateVector(int n_qubits) : n_qubits_(check_qubits(n_qubits)), amps_(std::size_t{1} << n_qubits) {}

    StateVector(int n_qubits, std::vector<cplx> amps) : n_qubits_(check_qubits(n_qubits)), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << n_qubits)) {
            throw DimensionError("StateVector: amplitude count " + std::to_string(amps_.size()) + " != 2^" +
                                 std::to_string(n_qubits));
        }
    }

    /// Computational basis state |index>.
    static StateVector basis(int n_qubits, std::uint32_t index) {
        StateVector s(n_qubits);
        if (index >= s.amps_.size()) throw DimensionError("StateVector::basis: index out of range");
        s.amps_[index] = 1.0;
        return s;
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    std::span<cplx> amps() { return amps_; }
    std::span<const cplx> amps() const { return amps_; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(norm_squared()); }

    StateVector& operator+=(const StateVector& o) {
        check_same(o, "StateVector::+=");
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
        return *this;
    }
    StateVector& operator-=(const StateVector& o) {
        check_same(o, "StateVector::-=");
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
        return *this;
    }
    StateVector& operator*=(cplx c) {
        for (auto& a : amps_) a *= c;
        return *this;
    }
    /// this += c * o
    void axpy(cplx c, const StateVector& o) {
        check_same(o, "StateVector::axpy");
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += c * o.amps_[i];
    }

    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend StateVector operator*(cplx c, StateVector a) { return a *= c; }

    void check_same(const StateVector& o, const char* where) const {
        if (o.n_qubits_ != n_qubits_) {
            throw DimensionError(std::string(where) + ": qubit counts differ (" + std::to_string(n_qubits_) + " vs " +
                                 std::to_string(o.n_qubits_) + ")");
        }
    }

  private:
    static int check_qubits(int n) {
        if (n < 0 || n > kMaxQubits) throw DimensionError("StateVector: qubit count outside [0, 12]");
        return n;
    }

    int n_qubits_ = 0;
    std::vector<cplx> amps_;
};

/// <a|b>
inline cplx inner_product(const StateVector& a, const StateVector& b) {
    a.check_same(b, "inner_product");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Accumulates coeff * u|s> into out.
inline void apply_pauli_add(const PauliString& u, const StateVector& s, cplx coeff, StateVector& out) {
    if (u.n_qubits() != s.n_qubits() || out.n_qubits() != s.n_qubits()) {
        throw DimensionError("apply_pauli: Pauli acts on " + std::to_string(u.n_qubits()) + " qubits, state has " +
                             std::to_string(s.n_qubits()));
    }
    const auto x = u.x_mask();
    const auto z = u.z_mask();
    const cplx base = coeff * i_pow(u.phase() + u.y_count());
    for (std::uint32_t j = 0; j < s.dim(); ++j) {
        const cplx a = s[j];
        if (a == 0.0) continue;
        out[j ^ x] += (std::popcount(z & j) & 1 ? -base : base) * a;
    }
}

/// u|s>: permutes amplitudes by x_mask with signs from z_mask and the phase.
inline StateVector apply_pauli(const PauliString& u, const StateVector& s) {
    StateVector out(s.n_qubits());
    apply_pauli_add(u, s, 1.0, out);
    return out;
}

/// <s|u|s> as a complex number (no sampling).
inline cplx expectation_complex(const PauliString& u, const StateVector& s) {
    if (u.n_qubits() != s.n_qubits()) throw DimensionError("expectation: qubit count mismatch");
    const auto x = u.x_mask();
    const auto z = u.z_mask();
    cplx acc = 0.0;
    for (std::uint32_t j = 0; j < s.dim(); ++j) {
        const cplx term = std::conj(s[j ^ x]) * s[j];
        acc += (std::popcount(z & j) & 1) ? -term : term;
    }
    return acc * i_pow(u.phase() + u.y_count());
}

struct ShotOptions {
    long shots = 0;
    std::uint64_t seed = 0;
};

/// <s|u|s>. Exact when `shots` is empty; otherwise a binomial estimate of the
/// ±1 outcome frequencies, reproducible for a given seed.
inline double expectation(const PauliString& u, const StateVector& s, std::optional<ShotOptions> shots = std::nullopt) {
    if (shots && !u.is_hermitian()) {
        throw ContractError("expectation: sampling requires a Hermitian Pauli string (even phase), got " + u.label());
    }
    const cplx exact = expectation_complex(u, s);
    if (!shots) return exact.real();
    if (shots->shots < 1) throw ContractError("expectation: shots must be >= 1");
    // Sampled observable is the literal string; the sign i^phase (+1 or -1) is applied afterwards.
    const double sign = u.phase() == 2 ? -1.0 : 1.0;
    const double mean = std::clamp(sign * exact.real(), -1.0, 1.0);
    std::mt19937_64 rng(shots->seed);
    std::binomial_distribution<long> dist(shots->shots, 0.5 * (1.0 + mean));
    const long plus = dist(rng);
    return sign * (2.0 * static_cast<double>(plus) / static_cast<double>(shots->shots) - 1.0);
}

}  // namespace qcoll
