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

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>

#include "qcoll/errors.hpp"

namespace qcoll {

inline constexpr int kMaxQubits = 12;

/// i^k for k mod 4, exact.
inline std::complex<double> i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// Tensor product of single-qubit Paulis times a global factor i^phase.
///
/// Qubit p carries I/X/Y/Z for (x_bit, z_bit) = (0,0)/(1,0)/(1,1)/(0,1).
/// With phase == 0 the represented operator is exactly the tensor product
/// of the literal Pauli matrices, so it is Hermitian iff phase is even.
/// Qubit 0 is the least significant bit of a basis-state index.
class PauliString {
  public:
    using Mask = std::uint32_t;

    PauliString() = default;

    PauliString(int n_qubits, Mask x_mask, Mask z_mask, int phase = 0)
        : n_qubits_(n_qubits), x_(x_mask), z_(z_mask), phase_(static_cast<std::uint8_t>(((phase % 4) + 4) % 4)) {
        if (n_qubits < 0 || n_qubits > kMaxQubits) {
            throw DimensionError("PauliString: qubit count " + std::to_string(n_qubits) + " outside [0, " +
                                 std::to_string(kMaxQubits) + "]");
        }
        const Mask limit = n_qubits == 0 ? 0u : (Mask{1} << n_qubits) - 1u;
        if ((x_mask & ~limit) != 0 || (z_mask & ~limit) != 0) {
            throw DimensionError("PauliString: mask bits beyond qubit count");
        }
    }

    static PauliString identity(int n_qubits) { return {n_qubits, 0, 0, 0}; }

    /// Single-qubit operator `kind` in {'I','X','Y','Z'} on `qubit`.
    static PauliString single(int n_qubits, int qubit, char kind) {
        if (qubit < 0 || qubit >= n_qubits) throw DimensionError("PauliString::single: qubit out of range");
        const Mask bit = Mask{1} << qubit;
        switch (kind) {
            case 'I': return identity(n_qubits);
            case 'X': return {n_qubits, bit, 0};
            case 'Y': return {n_qubits, bit, bit};
            case 'Z': return {n_qubits, 0, bit};
            default: throw ContractError(std::string("PauliString::single: unknown Pauli '") + kind + "'");
        }
    }

    /// Parses sparse labels such as "Z3X2Z1", "I", "-iY0", "+X1X0".
    static PauliString parse(int n_qubits, std::string_view label);

    int n_qubits() const { return n_qubits_; }
    Mask x_mask() const { return x_; }
    Mask z_mask() const { return z_; }
    int phase() const { return phase_; }

    bool is_identity() const { return x_ == 0 && z_ == 0; }
    bool is_hermitian() const { return (phase_ & 1) == 0; }

    /// Number of Y factors.
    int y_count() const { return std::popcount(x_ & z_); }
    int weight() const { return std::popcount(x_ | z_); }

    /// Operator letter on qubit p.
    char op_at(int p) const {
        const bool xb = (x_ >> p) & 1u;
        const bool zb = (z_ >> p) & 1u;
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }

    PauliString with_phase(int phase) const { return {n_qubits_, x_, z_, phase}; }
    PauliString without_phase() const { return with_phase(0); }

    /// Sparse label with the highest qubit first, e.g. "Z3X2Z1"; "I" for identity.
    /// A non-zero phase is prefixed as "i", "-", or "-i".
    std::string label() const {
        std::string out;
        switch (phase_) {
            case 1: out = "i"; break;
            case 2: out = "-"; break;
            case 3: out = "-i"; break;
            default: break;
        }
        if (is_identity()) return out + "I";
        for (int p = n_qubits_ - 1; p >= 0; --p) {
            const char c = op_at(p);
            if (c != 'I') {
                out += c;
                out += std::to_string(p);
            }
        }
        return out;
    }

    /// Canonical term order: (x_mask, z_mask), phase ignored.
    friend bool canonical_less(const PauliString& a, const PauliString& b) {
        return std::tie(a.x_, a.z_) < std::tie(b.x_, b.z_);
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

  private:
    int n_qubits_ = 0;
    Mask x_ = 0;
    Mask z_ = 0;
    std::uint8_t phase_ = 0;
};

/// Matrix product a·b with the accumulated phase tracked exactly.
///
/// Writes each literal string as i^{#Y}·X^x Z^z, multiplies in that form
/// (commuting Z past X costs (-1)^{|z_a & x_b|}), then converts back.
inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw DimensionError("pauli_mul: qubit counts differ (" + std::to_string(a.n_qubits()) + " vs " +
                             std::to_string(b.n_qubits()) + ")");
    }
    const auto x = a.x_mask() ^ b.x_mask();
    const auto z = a.z_mask() ^ b.z_mask();
    const int y_out = std::popcount(x & z);
    const int swaps = std::popcount(a.z_mask() & b.x_mask());
    const int phase = a.phase() + b.phase() + a.y_count() + b.y_count() + 2 * swaps + 4 * kMaxQubits - y_out;
    return {a.n_qubits(), x, z, phase};
}

inline PauliString operator*(const PauliString& a, const PauliString& b) { return pauli_mul(a, b); }

/// True iff a and b commute, i.e. |x_a & z_b| + |x_b & z_a| is even.
inline bool commutes(const PauliString& a, const PauliString& b) {
    const int n = std::popcount(a.x_mask() & b.z_mask()) + std::popcount(b.x_mask() & a.z_mask());
    return (n & 1) == 0;
}

inline PauliString PauliString::parse(int n_qubits, std::string_view label) {
    int phase = 0;
    std::size_t pos = 0;
    if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
        if (label[pos] == '-') phase += 2;
        ++pos;
    }
    if (pos < label.size() && label[pos] == 'i') {
        phase += 1;
        ++pos;
    }
    PauliString out = identity(n_qubits).with_phase(phase);
    if (label.substr(pos) == "I") return out;
    while (pos < label.size()) {
        const char kind = label[pos++];
        std::size_t end = pos;
        while (end < label.size() && label[end] >= '0' && label[end] <= '9') ++end;
        if (end == pos) throw ContractError("PauliString::parse: missing qubit index in '" + std::string(label) + "'");
        const int q = std::stoi(std::string(label.substr(pos, end - pos)));
        pos = end;
        if (q >= n_qubits) throw DimensionError("PauliString::parse: qubit index beyond qubit count");
        if (((out.x_mask() | out.z_mask()) >> q) & 1u) {
            throw ContractError("PauliString::parse: qubit repeated in '" + std::string(label) + "'");
        }
        out = pauli_mul(out, single(n_qubits, q, kind));
    }
    return out;
}

}  // namespace qcoll
