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
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qcoll/collision.hpp"
#include "qcoll/constants.hpp"
#include "qcoll/errors.hpp"
#include "qcoll/statevector.hpp"

namespace qcoll {

enum class RunStatus { converged, patched, failed };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "converged";
        case RunStatus::patched: return "patched";
        default: return "failed";
    }
}

/// Per-trajectory time series and summary numbers.
struct SimulationRecord {
    std::string method;
    TrajectoryContext trajectory;
    std::vector<double> times;
    std::vector<double> p_of_t;
    std::vector<double> fidelity;  // empty when no exact reference was run
    std::vector<double> fl_bound;
    std::vector<double> l2_trace;
    std::vector<double> epsilon;  // cumulative ∫√L² dt
    std::vector<int> n_theta_trace;  // empty for methods without an adaptive ansatz
    std::vector<StateVector> states;
    double p_asymptotic = 0.0;
    long measurement_count = 0;
    RunStatus status = RunStatus::converged;
    std::string error;
    std::vector<std::string> warnings;

    double final_infidelity() const { return fidelity.empty() ? std::nan("") : 1.0 - fidelity.back(); }
    double final_fl_infidelity() const { return fl_bound.empty() ? std::nan("") : 1.0 - fl_bound.back(); }
    int max_n_theta() const {
        return n_theta_trace.empty() ? 0 : *std::max_element(n_theta_trace.begin(), n_theta_trace.end());
    }
};

/// BK indices of the projectile capture states |1010⟩ (spin up) and |1000⟩ (spin down).
inline constexpr std::uint32_t kCaptureUp = 0b1010;
inline constexpr std::uint32_t kCaptureDown = 0b1000;
/// BK index of the initial target 1s↑ state |1011⟩.
inline constexpr std::uint32_t kInitialState = 0b1011;

inline double transfer_probability(const StateVector& psi) {
    if (psi.n_qubits() != 4) throw DimensionError("transfer_probability: expects a 4-qubit state");
    return std::norm(psi[kCaptureUp]) + std::norm(psi[kCaptureDown]);
}

/// |⟨exact|var⟩|² divided by both squared norms.
inline double fidelity(const StateVector& psi_var, const StateVector& psi_exact) {
    const double n = psi_var.norm_squared() * psi_exact.norm_squared();
    if (n == 0.0) return 0.0;
    return std::norm(inner_product(psi_exact, psi_var)) / n;
}

/// ε_i: trapezoid integral of √L² up to t_i.
inline std::vector<double> cumulative_error(const std::vector<double>& l2, const std::vector<double>& times) {
    if (l2.size() != times.size()) throw DimensionError("cumulative_error: length mismatch");
    std::vector<double> out(l2.size());
    double eps = 0.0;
    for (std::size_t i = 0; i < l2.size(); ++i) {
        if (i > 0) {
            eps += 0.5 * (times[i] - times[i - 1]) * (std::sqrt(std::max(0.0, l2[i])) + std::sqrt(std::max(0.0, l2[i - 1])));
        }
        out[i] = eps;
    }
    return out;
}

inline double fidelity_bound_from_error(double eps) {
    const double f = std::max(0.0, 1.0 - 0.5 * eps * eps);
    return f * f;
}

/// F_L(t_i) = max(0, 1 − ε_i²/2)².
inline std::vector<double> variational_fidelity_bound(const std::vector<double>& l2, const std::vector<double>& times) {
    auto out = cumulative_error(l2, times);
    for (auto& v : out) v = fidelity_bound_from_error(v);
    return out;
}

/// Mean of the final `window` fraction of P(t); warns when the relative spread exceeds 0.02.
inline double asymptotic_probability(SimulationRecord& rec, double window = 0.05) {
    if (rec.p_of_t.empty()) throw ContractError("asymptotic_probability: empty record");
    if (!(window > 0.0 && window <= 1.0)) throw ContractError("asymptotic_probability: window outside (0, 1]");
    const std::size_t n = rec.p_of_t.size();
    const std::size_t w = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(window * static_cast<double>(n))));
    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t i = n - w; i < n; ++i) {
        sum += rec.p_of_t[i];
        lo = std::min(lo, rec.p_of_t[i]);
        hi = std::max(hi, rec.p_of_t[i]);
    }
    const double mean = sum / static_cast<double>(w);
    if (mean > 1e-12 && (hi - lo) / mean > 0.02) {
        rec.warnings.push_back("asymptotic window relative spread " + std::to_string((hi - lo) / mean) + " > 0.02");
    }
    rec.p_asymptotic = mean;
    return mean;
}

struct CrossSectionPoint {
    double energy_keV = 0.0;
    double sigma_au = 0.0;
    double sigma_cm2 = 0.0;  // units of 1e-16 cm^2
    int n_impact_points = 0;
};

/// σ = 2π ∫ P(b) b db by trapezoid on [b_0, b_max] plus P(b_0)·π·b_0² below b_0.
inline CrossSectionPoint cross_section(const std::vector<double>& b, const std::vector<double>& p, double energy_keV = 0.0) {
    if (b.size() != p.size()) throw DimensionError("cross_section: b and P(b) lengths differ");
    if (b.size() < 10) throw QuadratureResolutionError("cross_section: need at least 10 impact parameters");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i > 0 && !(b[i] > b[i - 1])) throw ContractError("cross_section: impact parameters must ascend");
        if (!(p[i] >= 0.0 && p[i] <= 1.0 + 1e-9)) throw ContractError("cross_section: probability outside [0, 1]");
    }
    if (!(b.front() >= 0.0)) throw ContractError("cross_section: negative impact parameter");
    double s = p.front() * std::numbers::pi * b.front() * b.front();
    for (std::size_t i = 1; i < b.size(); ++i) {
        s += std::numbers::pi * (b[i] - b[i - 1]) * (p[i] * b[i] + p[i - 1] * b[i - 1]);
    }
    CrossSectionPoint out;
    out.energy_keV = energy_keV;
    out.sigma_au = s;
    out.sigma_cm2 = s * constants::kBohr2In1e16Cm2;
    out.n_impact_points = static_cast<int>(b.size());
    return out;
}

/// Fills p_of_t from states, then fidelity against `exact` when given.
inline void fill_observables(SimulationRecord& rec, const std::vector<StateVector>* exact, double window = 0.05) {
    rec.p_of_t.resize(rec.states.size());
    for (std::size_t i = 0; i < rec.states.size(); ++i) rec.p_of_t[i] = transfer_probability(rec.states[i]);
    if (exact) {
        if (exact->size() != rec.states.size()) throw DimensionError("fill_observables: reference length mismatch");
        rec.fidelity.resize(rec.states.size());
        for (std::size_t i = 0; i < rec.states.size(); ++i) rec.fidelity[i] = fidelity(rec.states[i], (*exact)[i]);
    }
    if (rec.l2_trace.empty()) rec.l2_trace.assign(rec.times.size(), 0.0);
    if (rec.epsilon.empty()) rec.epsilon = cumulative_error(rec.l2_trace, rec.times);
    if (rec.fl_bound.empty()) {
        rec.fl_bound.resize(rec.epsilon.size());
        for (std::size_t i = 0; i < rec.epsilon.size(); ++i) rec.fl_bound[i] = fidelity_bound_from_error(rec.epsilon[i]);
    }
    asymptotic_probability(rec, window);
}

}  // namespace qcoll
