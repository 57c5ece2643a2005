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
#include <complex>
#include <numbers>
#include <sstream>

#include "qcoll/errors.hpp"
#include "qcoll/quadrature.hpp"

namespace qcoll {

namespace detail {

inline std::complex<double> boys_f0_quadrature(std::complex<double> z) {
    static const QuadratureRule rule = gauss_legendre(16);
    const int panels = std::clamp(static_cast<int>(std::abs(z) / 2.0) + 4, 4, 2000);
    const double h = 1.0 / panels;
    std::complex<double> acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = mid + 0.5 * h * rule.nodes[i];
            acc += rule.weights[i] * std::exp(-z * (t * t));
        }
    }
    return acc * (0.5 * h);
}

}  // namespace detail

/// F0(z) = ∫_0^1 exp(-z t^2) dt = ½·sqrt(π/z)·erf(sqrt(z)), continued to complex z.
///
/// Complex arguments arise from plane-wave factors shifting Gaussian product
/// centers off the real axis. Requires Re(z) >= -50.
inline std::complex<double> boys_f0(std::complex<double> z) {
    using std::numbers::pi;
    if (!(z.real() >= -50.0) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "boys_f0: argument " << z << " outside domain Re(z) >= -50";
        throw DomainError(os.str());
    }
    const double az = std::abs(z);
    if (az < 1e-4) {
        return 1.0 - z / 3.0 + z * z / 10.0 - z * z * z / 42.0;
    }
    if (z.real() > 40.0) {
        // erfc(sqrt z) is below exp(-40) here.
        return 0.5 * std::sqrt(pi / z);
    }
    if (az - z.real() < 10.0 && az < 60.0) {
        // Kummer form exp(-z)·Σ (2z)^n / (2n+1)!!; all terms share a phase
        // sector when |z| - Re z is small, so cancellation stays bounded.
        std::complex<double> term = 1.0;
        std::complex<double> sum = 1.0;
        for (int n = 0; n < 400; ++n) {
            term *= 2.0 * z / (2.0 * n + 3.0);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return std::exp(-z) * sum;
    }
    return detail::boys_f0_quadrature(z);
}

}  // namespace qcoll
