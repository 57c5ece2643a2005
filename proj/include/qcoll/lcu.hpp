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
#include <cstddef>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qcoll/errors.hpp"
#include "qcoll/pauli.hpp"
#include "qcoll/statevector.hpp"

namespace qcoll {

/// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
  public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n != y_.size()) throw DimensionError("CubicSpline: abscissa and ordinate lengths differ");
        if (n < 2) throw ContractError("CubicSpline: need at least two knots");
        for (std::size_t i = 1; i < n; ++i) {
            if (!(x_[i] > x_[i - 1])) throw ContractError("CubicSpline: knots must be strictly increasing");
        }
        m_.assign(n, 0.0);
        if (n == 2) return;
        // Thomas algorithm for the second derivatives with m_0 = m_{n-1} = 0.
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
            const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
            c[i] = h1 / diag;
            d[i] = (rhs - h0 * d[i - 1]) / diag;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
        }
    }

    double operator()(double t) const {
        const std::size_t i = segment(t);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h;
        const double b = (t - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

    /// Index i with x_i <= t <= x_{i+1}, clamped to the end segments.
    std::size_t segment(double t) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - x_.begin());
        return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, x_.size() - 2);
    }

  private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

/// Sampled coefficient vectors g(t_i) over a fixed term list.
struct LcuFrames {
    std::vector<double> times;
    std::vector<std::vector<double>> coefficients;  // [frame][term]
};

/// H(t) = Σ_γ g_γ(t) H_γ over a fixed, time-independent list of Pauli terms.
class LcuHamiltonian {
  public:
    using CoeffFn = std::function<std::vector<double>(double)>;

    LcuHamiltonian() = default;

    LcuHamiltonian(std::vector<PauliString> terms, CoeffFn coeff_fn, double t_min, double t_max)
        : terms_(std::move(terms)), coeff_fn_(std::move(coeff_fn)), t_min_(t_min), t_max_(t_max) {
        check_terms();
    }

    /// Coefficients interpolated between frames with natural cubic splines.
    static LcuHamiltonian from_frames(std::vector<PauliString> terms, LcuFrames frames) {
        if (frames.times.size() < 2) throw ContractError("LcuHamiltonian: need at least two frames");
        if (frames.coefficients.size() != frames.times.size()) {
            throw DimensionError("LcuHamiltonian: frame count differs from time count");
        }
        std::vector<CubicSpline> splines;
        splines.reserve(terms.size());
        for (std::size_t g = 0; g < terms.size(); ++g) {
            std::vector<double> y(frames.times.size());
            for (std::size_t f = 0; f < frames.times.size(); ++f) {
                if (frames.coefficients[f].size() != terms.size()) {
                    throw DimensionError("LcuHamiltonian: coefficient vector length differs from term count");
                }
                y[f] = frames.coefficients[f][g];
            }
            splines.emplace_back(frames.times, std::move(y));
        }
        auto shared = std::make_shared<const std::vector<CubicSpline>>(std::move(splines));
        const double t0 = frames.times.front();
        const double t1 = frames.times.back();
        LcuHamiltonian h(
            std::move(terms),
            [shared](double t) {
                std::vector<double> g(shared->size());
                for (std::size_t i = 0; i < g.size(); ++i) g[i] = (*shared)[i](t);
                return g;
            },
            t0, t1);
        h.frames_ = std::make_shared<const LcuFrames>(std::move(frames));
        return h;
    }

    /// Constant coefficients on the given window.
    static LcuHamiltonian constant(std::vector<PauliString> terms, std::vector<double> g, double t_min,
                                   double t_max) {
        if (g.size() != terms.size()) throw DimensionError("LcuHamiltonian: coefficient count differs from terms");
        return {std::move(terms), [g](double) { return g; }, t_min, t_max};
    }

    const std::vector<PauliString>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    int n_qubits() const { return terms_.empty() ? 0 : terms_.front().n_qubits(); }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    /// Source frames, or nullptr when built from an arbitrary coefficient function.
    const LcuFrames* frames() const { return frames_.get(); }

    std::vector<double> coefficients(double t) const {
        const double slack = 1e-9 * std::max(1.0, t_max_ - t_min_);
        if (!(t >= t_min_ - slack && t <= t_max_ + slack)) {
            std::ostringstream os;
            os << "LcuHamiltonian: time " << t << " outside trajectory window [" << t_min_ << ", " << t_max_ << "]";
            throw DomainError(os.str());
        }
        auto g = coeff_fn_(std::clamp(t, t_min_, t_max_));
        if (g.size() != terms_.size()) throw DimensionError("LcuHamiltonian: coefficient function returned wrong length");
        return g;
    }

    /// Index of the identity term, or -1.
    int identity_index() const {
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].is_identity()) return static_cast<int>(i);
        }
        return -1;
    }

  private:
    void check_terms() const {
        for (const auto& u : terms_) {
            if (!u.is_hermitian() || u.phase() != 0) {
                throw ContractError("LcuHamiltonian: terms must be phase-free Pauli strings, got " + u.label());
            }
            if (u.n_qubits() != terms_.front().n_qubits()) throw DimensionError("LcuHamiltonian: mixed qubit counts");
        }
    }

    std::vector<PauliString> terms_;
    CoeffFn coeff_fn_;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
    std::shared_ptr<const LcuFrames> frames_;
};

/// Σ_γ g_γ H_γ |s⟩ for an explicit coefficient vector.
inline StateVector apply_lcu(const std::vector<PauliString>& terms, const std::vector<double>& g, const StateVector& s) {
    if (g.size() != terms.size()) throw DimensionError("apply_lcu: coefficient count differs from term count");
    StateVector out(s.n_qubits());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (g[i] != 0.0) apply_pauli_add(terms[i], s, g[i], out);
    }
    return out;
}

/// H(t)|s⟩, not normalized.
inline StateVector hamiltonian_matrix_apply(const LcuHamiltonian& h, double t, const StateVector& s) {
    return apply_lcu(h.terms(), h.coefficients(t), s);
}

}  // namespace qcoll
