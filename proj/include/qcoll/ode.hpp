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

// Adaptive integrators for complex linear-algebra ODE systems y' = f(t, y).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qcoll/errors.hpp"

namespace qcoll {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0;  // 0 selects a step from the first derivative
    long max_steps = 50'000'000;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
    long evaluations = 0;
};

namespace detail {

inline double scaled_error(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0, const Eigen::VectorXcd& y1,
                           double rtol, double atol) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = std::abs(err[i]) / sc;
        s += e * e;
    }
    return std::sqrt(s / std::max<Eigen::Index>(1, err.size()));
}

[[noreturn]] inline void step_underflow(double t, double h) {
    std::ostringstream os;
    os << "step size underflow (h=" << h << ") at t=" << t;
    throw IntegrationError(os.str());
}

inline double initial_step(const Eigen::VectorXcd& y0, const Eigen::VectorXcd& f0, double span, double rtol,
                           double atol) {
    double d0 = 0.0, d1 = 0.0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        d0 += std::norm(y0[i]) / (sc * sc);
        d1 += std::norm(f0[i]) / (sc * sc);
    }
    double h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
    return std::min(h, std::abs(span));
}

// Dormand–Prince 5(4) tableau.
struct Dp5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

/// One Dormand–Prince trial step; k1 = f(t, y) on entry, k7 = f(t+h, y1) on exit (FSAL).
template <class F>
struct Dp5Step {
    Eigen::VectorXcd y1, k2, k3, k4, k5, k6, k7, err;

    void run(F& f, double t, const Eigen::VectorXcd& y, const Eigen::VectorXcd& k1, double h) {
        using D = Dp5;
        Eigen::VectorXcd tmp = y + h * D::a21 * k1;
        f(t + D::c2 * h, tmp, k2);
        tmp = y + h * (D::a31 * k1 + D::a32 * k2);
        f(t + D::c3 * h, tmp, k3);
        tmp = y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3);
        f(t + D::c4 * h, tmp, k4);
        tmp = y + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4);
        f(t + D::c5 * h, tmp, k5);
        tmp = y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 + D::a64 * k4 + D::a65 * k5);
        f(t + h, tmp, k6);
        y1 = y + h * (D::a71 * k1 + D::a73 * k3 + D::a74 * k4 + D::a75 * k5 + D::a76 * k6);
        f(t + h, y1, k7);
        err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 + D::e6 * k6 + D::e7 * k7);
    }

    /// Continuous extension coefficients for θ ∈ [0, 1].
    std::array<Eigen::VectorXcd, 5> dense(const Eigen::VectorXcd& y, const Eigen::VectorXcd& k1, double h) const {
        using D = Dp5;
        std::array<Eigen::VectorXcd, 5> r;
        r[0] = y;
        r[1] = y1 - y;
        r[2] = h * k1 - r[1];
        r[3] = r[1] - h * k7 - r[2];
        r[4] = h * (D::d1 * k1 + D::d3 * k3 + D::d4 * k4 + D::d5 * k5 + D::d6 * k6 + D::d7 * k7);
        return r;
    }
};

inline Eigen::VectorXcd dense_eval(const std::array<Eigen::VectorXcd, 5>& r, double th) {
    const double th1 = 1.0 - th;
    return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

}  // namespace detail

/// Dormand–Prince 5(4) with dense output at every time in t_out (ascending).
///
/// Returns one state per output time; t_out.front() is the initial time.
template <class F>
std::vector<Eigen::VectorXcd> integrate_dopri5(F f, const Eigen::VectorXcd& y0, const std::vector<double>& t_out,
                                               const OdeOptions& opt, OdeStats* stats = nullptr) {
    if (t_out.empty()) return {};
    for (std::size_t i = 1; i < t_out.size(); ++i) {
        if (!(t_out[i] > t_out[i - 1])) throw ContractError("integrate_dopri5: output times must increase");
    }
    OdeStats local;
    OdeStats& st = stats ? *stats : local;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(t_out.size());
    out.push_back(y0);
    if (t_out.size() == 1) return out;

    const double t_end = t_out.back();
    double t = t_out.front();
    Eigen::VectorXcd y = y0;
    Eigen::VectorXcd k1(y0.size());
    f(t, y, k1);
    ++st.evaluations;
    double h = opt.initial_step > 0.0 ? opt.initial_step
                                      : detail::initial_step(y, k1, t_end - t, opt.rtol, opt.atol);
    detail::Dp5Step<F> step;
    std::size_t next = 1;
    while (next < t_out.size()) {
        if (st.steps > opt.max_steps) throw IntegrationError("integrate_dopri5: step budget exhausted");
        h = std::min(h, t_end - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) detail::step_underflow(t, h);
        step.run(f, t, y, k1, h);
        st.evaluations += 6;
        const double err = detail::scaled_error(step.err, y, step.y1, opt.rtol, opt.atol);
        if (!std::isfinite(err)) detail::step_underflow(t, h);
        if (err <= 1.0) {
            const double t_new = (t_end - (t + h) < 1e-13 * std::max(1.0, std::abs(t_end))) ? t_end : t + h;
            const auto r = step.dense(y, k1, t_new - t);
            while (next < t_out.size() && t_out[next] <= t_new) {
                out.push_back(t_out[next] == t_new ? step.y1 : detail::dense_eval(r, (t_out[next] - t) / (t_new - t)));
                ++next;
            }
            t = t_new;
            y = step.y1;
            k1 = step.k7;
            ++st.steps;
            h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        } else {
            ++st.rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        }
    }
    return out;
}

namespace detail {

/// ∫_{a}^{a+h} L_j(s) ds for the Lagrange basis on `nodes`, exact for cubics.
inline std::array<double, 4> lagrange_weights(const std::array<double, 4>& nodes, double a, double h) {
    static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    std::array<double, 4> w{};
    for (int q = 0; q < 3; ++q) {
        const double s = a + 0.5 * h * (1.0 + gx[q]);
        for (int j = 0; j < 4; ++j) {
            double l = 1.0;
            for (int m = 0; m < 4; ++m) {
                if (m != j) l *= (s - nodes[m]) / (nodes[j] - nodes[m]);
            }
            w[j] += 0.5 * h * gw[q] * l;
        }
    }
    return w;
}

}  // namespace detail

/// Variable-step Adams–Bashforth–Moulton PECE of order 4; lands on every t_out.
///
/// The first three steps use Dormand–Prince to seed the derivative history.
template <class F>
std::vector<Eigen::VectorXcd> integrate_abm4(F f, const Eigen::VectorXcd& y0, const std::vector<double>& t_out,
                                             const OdeOptions& opt, OdeStats* stats = nullptr) {
    if (t_out.empty()) return {};
    for (std::size_t i = 1; i < t_out.size(); ++i) {
        if (!(t_out[i] > t_out[i - 1])) throw ContractError("integrate_abm4: output times must increase");
    }
    OdeStats local;
    OdeStats& st = stats ? *stats : local;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(t_out.size());
    out.push_back(y0);
    if (t_out.size() == 1) return out;

    struct Point {
        double t;
        Eigen::VectorXcd f;
    };
    std::deque<Point> hist;
    double t = t_out.front();
    Eigen::VectorXcd y = y0;
    Eigen::VectorXcd fy(y0.size());
    f(t, y, fy);
    ++st.evaluations;
    hist.push_back({t, fy});
    double h = opt.initial_step > 0.0 ? opt.initial_step
                                      : detail::initial_step(y, fy, t_out.back() - t, opt.rtol, opt.atol);
    detail::Dp5Step<F> boot;
    Eigen::VectorXcd yp, fp, yc;
    std::size_t next = 1;
    while (next < t_out.size()) {
        if (st.steps > opt.max_steps) throw IntegrationError("integrate_abm4: step budget exhausted");
        const double target = t_out[next];
        const double hs = std::min(h, target - t);
        const bool lands = hs >= target - t;
        if (hs < 1e-14 * std::max(1.0, std::abs(t))) detail::step_underflow(t, hs);
        double err = 0.0;
        if (hist.size() < 4) {
            boot.run(f, t, y, hist.back().f, hs);
            st.evaluations += 6;
            err = detail::scaled_error(boot.err, y, boot.y1, opt.rtol, opt.atol);
            yc = boot.y1;
            fp = boot.k7;
        } else {
            const auto n = hist.size();
            const std::array<double, 4> pn = {hist[n - 1].t, hist[n - 2].t, hist[n - 3].t, hist[n - 4].t};
            const auto wp = detail::lagrange_weights(pn, t, hs);
            yp = y + wp[0] * hist[n - 1].f + wp[1] * hist[n - 2].f + wp[2] * hist[n - 3].f + wp[3] * hist[n - 4].f;
            Eigen::VectorXcd fpred(y.size());
            f(t + hs, yp, fpred);
            const std::array<double, 4> cn = {t + hs, hist[n - 1].t, hist[n - 2].t, hist[n - 3].t};
            const auto wc = detail::lagrange_weights(cn, t, hs);
            yc = y + wc[0] * fpred + wc[1] * hist[n - 1].f + wc[2] * hist[n - 2].f + wc[3] * hist[n - 3].f;
            err = detail::scaled_error((19.0 / 270.0) * (yc - yp), y, yc, opt.rtol, opt.atol);
            fp.resize(y.size());
            f(t + hs, yc, fp);
            st.evaluations += 2;
        }
        if (!std::isfinite(err)) detail::step_underflow(t, hs);
        if (err <= 1.0) {
            t = lands ? target : t + hs;
            y = yc;
            hist.push_back({t, fp});
            if (hist.size() > 4) hist.pop_front();
            ++st.steps;
            if (lands) {
                out.push_back(y);
                ++next;
            }
            if (!lands || hs >= h) h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 2.0);
        } else {
            ++st.rejected;
            h = hs * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        }
    }
    return out;
}

}  // namespace qcoll
