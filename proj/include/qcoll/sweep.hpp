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

// Sweep orchestration: flat key=value configuration, per-(E, b) trajectory
// runs, a deterministic worker pool, patching, ECDFs, reference comparison
// and CSV/SVG emission.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcoll/avqds.hpp"
#include "qcoll/collision.hpp"
#include "qcoll/errors.hpp"
#include "qcoll/exact.hpp"
#include "qcoll/observables.hpp"
#include "qcoll/qas.hpp"
#include "qcoll/svg.hpp"

namespace qcoll {

inline std::string format_real(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_real(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
    return out;
}

inline long parse_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

inline std::string exact_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

enum class Method { exact, qas, avqds };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::qas: return "qas";
        default: return "avqds";
    }
}

inline Method parse_method(const std::string& s) {
    const std::string t = detail::trim(s);
    if (t == "exact") return Method::exact;
    if (t == "qas") return Method::qas;
    if (t == "avqds") return Method::avqds;
    throw ConfigError("unknown method '" + s + "' (expected qas, avqds or exact)");
}

/// Energies of the published cross-section table, keV.
inline std::vector<double> paper_energies() {
    return {1.00, 1.41, 1.92, 2.00, 2.41, 3.04, 3.82, 4.80, 6.05, 7.62, 9.60, 12.1, 15.2, 19.2, 24.1};
}

inline std::vector<double> desk_energies() { return {1.0, 2.0, 4.8, 9.6, 15.2, 24.1}; }

/// `n` log-spaced energies over [lo, hi].
inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, u);
    }
    return out;
}

struct SweepConfig {
    std::vector<double> energies_keV = paper_energies();
    std::optional<double> b_min;  // unset: b_max / n_b
    double b_max = 10.0;
    int n_b = 500;
    Method method = Method::qas;
    double dt = 0.005;
    double l2_cut = 1e-8;
    double rtol = 1e-10;
    double atol = 1e-10;
    double exact_rtol = 1e-11;
    double exact_atol = 1e-11;
    double z_span = 30.0;
    int n_t = 2001;
    int k_max = 4;
    double window = 0.05;
    bool oracle = false;
    std::optional<long> shots;
    std::optional<long> seed;
    std::optional<double> epsilon;
    bool etf = true;
    std::string basis_file;  // empty: bundled STO-3G
    int workers = 0;         // 0: hardware concurrency
    std::string output_dir = "qcoll_out";

    static const std::vector<std::string>& keys() {
        static const std::vector<std::string> k = {
            "energies", "b_min",  "b_max", "n_b",   "method", "dt",    "l2_cut", "rtol",       "atol",    "exact_rtol",
            "exact_atol", "z_span", "n_t",  "k_max", "window", "oracle", "shots", "seed",      "epsilon", "etf",
            "basis_file", "workers", "output_dir", "profile"};
        return k;
    }

    static SweepConfig paper() { return SweepConfig{}; }

    static SweepConfig desk() {
        SweepConfig c;
        c.energies_keV = desk_energies();
        c.n_b = 100;
        c.n_t = 1001;
        return c;
    }

    static SweepConfig profile(const std::string& name) {
        const std::string t = detail::trim(name);
        if (t == "paper") return paper();
        if (t == "desk") return desk();
        throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
    }

    void set(const std::string& key, const std::string& value) {
        const std::string k = detail::trim(key);
        const std::string v = detail::trim(value);
        if (k == "energies") {
            std::vector<double> e;
            if (v.rfind("log:", 0) == 0) {
                // log:lo:hi:n
                std::vector<std::string> parts;
                std::stringstream ss(v.substr(4));
                for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
                if (parts.size() != 3) throw ConfigError("energies: expected log:lo:hi:n");
                e = log_spaced(detail::parse_real(k, parts[0]), detail::parse_real(k, parts[1]),
                               static_cast<int>(detail::parse_int(k, parts[2])));
            } else {
                std::stringstream ss(v);
                for (std::string p; std::getline(ss, p, ',');) e.push_back(detail::parse_real(k, p));
            }
            energies_keV = std::move(e);
        } else if (k == "b_min") {
            if (v == "auto") b_min.reset();
            else b_min = detail::parse_real(k, v);
        } else if (k == "b_max") b_max = detail::parse_real(k, v);
        else if (k == "n_b") n_b = static_cast<int>(detail::parse_int(k, v));
        else if (k == "method") method = parse_method(v);
        else if (k == "dt") dt = detail::parse_real(k, v);
        else if (k == "l2_cut") l2_cut = detail::parse_real(k, v);
        else if (k == "rtol") rtol = detail::parse_real(k, v);
        else if (k == "atol") atol = detail::parse_real(k, v);
        else if (k == "exact_rtol") exact_rtol = detail::parse_real(k, v);
        else if (k == "exact_atol") exact_atol = detail::parse_real(k, v);
        else if (k == "z_span") z_span = detail::parse_real(k, v);
        else if (k == "n_t") n_t = static_cast<int>(detail::parse_int(k, v));
        else if (k == "k_max") k_max = static_cast<int>(detail::parse_int(k, v));
        else if (k == "window") window = detail::parse_real(k, v);
        else if (k == "oracle") oracle = detail::parse_bool(k, v);
        else if (k == "shots") {
            if (v == "none") shots.reset();
            else shots = detail::parse_int(k, v);
        } else if (k == "seed") {
            if (v == "none") seed.reset();
            else seed = detail::parse_int(k, v);
        } else if (k == "epsilon") {
            if (v == "auto") epsilon.reset();
            else epsilon = detail::parse_real(k, v);
        } else if (k == "etf") etf = detail::parse_bool(k, v);
        else if (k == "basis_file") basis_file = v;
        else if (k == "workers") workers = static_cast<int>(detail::parse_int(k, v));
        else if (k == "output_dir") output_dir = v;
        else if (k == "profile") *this = profile(v);
        else throw ConfigError("unknown configuration key '" + k + "'");
    }

    /// Lines of `key = value`; '#' starts a comment. A `profile` line resets all earlier keys.
    static SweepConfig parse(const std::string& text) { return parse(text, paper()); }

    static SweepConfig parse(const std::string& text, SweepConfig base) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            if (detail::trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            base.set(line.substr(0, eq), line.substr(eq + 1));
        }
        base.validate();
        return base;
    }

    static SweepConfig load(const std::string& path) { return load(path, paper()); }

    static SweepConfig load(const std::string& path, SweepConfig base) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), std::move(base));
    }

    double effective_b_min() const { return b_min.value_or(b_max / n_b); }

    std::vector<double> impact_parameters() const {
        const double lo = effective_b_min();
        std::vector<double> b(static_cast<std::size_t>(n_b));
        for (int i = 0; i < n_b; ++i) b[static_cast<std::size_t>(i)] = lo + (b_max - lo) * i / (n_b - 1);
        return b;
    }

    std::string resolved_basis_file() const { return basis_file.empty() ? default_basis_path() : basis_file; }

    void validate() const {
        if (energies_keV.empty()) throw ConfigError("energies: empty list");
        for (std::size_t i = 0; i < energies_keV.size(); ++i) {
            if (!(energies_keV[i] > 0.0)) throw ConfigError("energies: values must be positive");
            if (i > 0 && !(energies_keV[i] > energies_keV[i - 1])) throw ConfigError("energies: must be ascending");
        }
        if (n_b < 10) throw ConfigError("n_b must be at least 10");
        if (!(effective_b_min() > 0.0)) throw ConfigError("b_min must be positive");
        if (!(b_max > effective_b_min())) throw ConfigError("b_max must exceed b_min");
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(l2_cut > 0.0)) throw ConfigError("l2_cut must be positive");
        if (!(rtol > 0.0 && atol > 0.0)) throw ConfigError("rtol and atol must be positive");
        if (!(exact_rtol >= 1e-13 && exact_rtol <= 1e-6 && exact_atol >= 1e-13 && exact_atol <= 1e-6)) {
            throw ConfigError("exact_rtol and exact_atol must lie in [1e-13, 1e-6]");
        }
        if (!(z_span > 0.0)) throw ConfigError("z_span must be positive");
        if (n_t < 3) throw ConfigError("n_t must be at least 3");
        if (k_max < 1) throw ConfigError("k_max must be at least 1");
        if (!(window > 0.0 && window <= 1.0)) throw ConfigError("window must lie in (0, 1]");
        if (shots && *shots < 1) throw ConfigError("shots must be positive");
        if (workers < 0) throw ConfigError("workers must be non-negative");
    }

    /// Canonical text of every numeric-output-affecting key.
    std::string canonical() const {
        std::ostringstream o;
        o << "energies=";
        for (std::size_t i = 0; i < energies_keV.size(); ++i) o << (i ? "," : "") << detail::exact_real(energies_keV[i]);
        o << "\nb_min=" << detail::exact_real(effective_b_min()) << "\nb_max=" << detail::exact_real(b_max)
          << "\nn_b=" << n_b << "\nmethod=" << to_string(method) << "\ndt=" << detail::exact_real(dt)
          << "\nl2_cut=" << detail::exact_real(l2_cut) << "\nrtol=" << detail::exact_real(rtol)
          << "\natol=" << detail::exact_real(atol) << "\nexact_rtol=" << detail::exact_real(exact_rtol)
          << "\nexact_atol=" << detail::exact_real(exact_atol) << "\nz_span=" << detail::exact_real(z_span)
          << "\nn_t=" << n_t << "\nk_max=" << k_max << "\nwindow=" << detail::exact_real(window)
          << "\noracle=" << (oracle ? "true" : "false") << "\nshots=" << (shots ? std::to_string(*shots) : "none")
          << "\nseed=" << (seed ? std::to_string(*seed) : "none")
          << "\nepsilon=" << (epsilon ? detail::exact_real(*epsilon) : "auto") << "\netf=" << (etf ? "true" : "false")
          << "\nbasis_file=" << resolved_basis_file() << "\n";
        return o.str();
    }

    std::string hash() const {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(canonical())));
        return buf;
    }

    std::string seed_text() const { return seed ? std::to_string(*seed) : "none"; }
};

/// One (E, b, method) work item.
struct TrajectoryTask {
    double energy_keV = 0.0;
    double b = 0.0;
    Method method = Method::qas;
    std::size_t energy_index = 0;
    std::size_t b_index = 0;
};

/// Records for one task: the requested method plus, when run, the exact oracle.
struct TrajectoryOutcome {
    SimulationRecord record;
    std::optional<SimulationRecord> exact;
    std::vector<AvqdsStep> avqds_log;
};

/// Per-task seed mixed from the run seed and the grid position.
inline std::uint64_t task_seed(const SweepConfig& cfg, const TrajectoryTask& task) {
    std::uint64_t s = static_cast<std::uint64_t>(cfg.seed.value_or(0));
    s ^= 0x9e3779b97f4a7c15ULL * (task.energy_index * 1000003ULL + task.b_index + 1);
    return s;
}

/// Runs one trajectory. Propagator failures are returned as status=failed.
inline TrajectoryOutcome run_trajectory(const SweepConfig& cfg, const CollisionModel& model, const TrajectoryTask& task,
                                        bool keep_states = true) {
    TrajectoryOutcome out;
    out.record.method = to_string(task.method);
    char ctxbuf[96];
    std::snprintf(ctxbuf, sizeof ctxbuf, "E=%g keV, b=%g", task.energy_keV, task.b);
    try {
        const auto ctx = make_trajectory(task.energy_keV, task.b, cfg.z_span, cfg.n_t);
        out.record.trajectory = ctx;
        out.record.times = ctx.t_grid;
        const auto h = build_frames(model, ctx);
        const auto phi0 = StateVector::basis(4, kInitialState);
        std::optional<ExactResult> ex;
        if (task.method == Method::exact || cfg.oracle) {
            ex = propagate_exact(h, phi0, ctx.t_grid, cfg.exact_rtol, cfg.exact_atol);
        }
        if (task.method == Method::exact) {
            out.record.states = ex->states;
            fill_observables(out.record, nullptr, cfg.window);
        } else {
            if (task.method == Method::qas) {
                const auto basis = build_moment_basis(h, phi0, cfg.k_max);
                std::optional<ShotOptions> shots;
                if (cfg.shots) shots = ShotOptions{*cfg.shots, task_seed(cfg, task)};
                const auto qm = measure_model(basis, h, shots);
                out.record = evolve_qas(qm, basis, h, ctx.t_grid, QasOptions{cfg.rtol, cfg.atol, 1e-12});
            } else {
                AvqdsOptions ao;
                ao.dt = cfg.dt;
                ao.l2_cut = cfg.l2_cut;
                ao.context = ctxbuf;
                out.record = evolve_avqds(h, phi0, ctx.t_grid, ao, &out.avqds_log);
            }
            out.record.trajectory = ctx;
            fill_observables(out.record, ex ? &ex->states : nullptr, cfg.window);
            if (ex) {
                SimulationRecord er;
                er.method = "exact";
                er.trajectory = ctx;
                er.times = ctx.t_grid;
                er.states = std::move(ex->states);
                fill_observables(er, nullptr, cfg.window);
                out.exact = std::move(er);
            }
        }
    } catch (const std::exception& e) {
        out.record.status = RunStatus::failed;
        out.record.error = std::string(ctxbuf) + ": " + e.what();
        out.record.p_asymptotic = std::nan("");
    }
    if (!keep_states) {
        out.record.states.clear();
        out.record.states.shrink_to_fit();
        if (out.exact) out.exact->states.clear();
    }
    return out;
}

/// Scalar summary of one grid point.
struct GridPoint {
    TrajectoryTask task;
    RunStatus status = RunStatus::converged;
    std::string error;
    double p = 0.0;               // after patching
    double p_raw = 0.0;           // as computed (NaN when failed)
    double p_exact = std::nan(""); // oracle P when run
    double fl_infidelity = std::nan("");     // 1 − F_L(T)
    double exact_infidelity = std::nan("");  // 1 − F(T), oracle only
    double bound_violation = std::nan("");   // max F_L − F where ε > 1e-6, oracle only
    int max_n_theta = 0;
    long measurements = 0;
    std::vector<std::string> warnings;
};

inline GridPoint summarize(const TrajectoryTask& task, const TrajectoryOutcome& o) {
    GridPoint g;
    g.task = task;
    const auto& r = o.record;
    g.status = r.status;
    g.error = r.error;
    g.warnings = r.warnings;
    g.p_raw = r.status == RunStatus::failed ? std::nan("") : r.p_asymptotic;
    g.p = g.p_raw;
    if (r.status != RunStatus::failed) {
        g.fl_infidelity = r.final_fl_infidelity();
        g.exact_infidelity = r.final_infidelity();
        g.max_n_theta = r.max_n_theta();
        g.measurements = r.measurement_count;
        if (!r.fidelity.empty()) {
            double v = -1.0;
            for (std::size_t i = 0; i < r.fidelity.size(); ++i) {
                if (r.epsilon[i] > 1e-6) v = std::max(v, r.fl_bound[i] - r.fidelity[i]);
            }
            g.bound_violation = v;
        }
    }
    if (o.exact) g.p_exact = o.exact->p_asymptotic;
    return g;
}

/// Replaces failed P(b) by the nearest converged neighbour in b (ties: smaller b).
inline int patch_failed(std::vector<GridPoint>& row) {
    int patched = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].status != RunStatus::failed) continue;
        std::optional<std::size_t> best;
        for (std::size_t d = 1; d < row.size() && !best; ++d) {
            if (i >= d && row[i - d].status == RunStatus::converged) best = i - d;
            else if (i + d < row.size() && row[i + d].status == RunStatus::converged) best = i + d;
        }
        if (!best) continue;
        row[i].p = row[*best].p_raw;
        row[i].status = RunStatus::patched;
        ++patched;
    }
    return patched;
}

struct EnergyResult {
    double energy_keV = 0.0;
    std::vector<GridPoint> points;
    CrossSectionPoint sigma;
    int n_failed = 0;
    int n_patched = 0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<double> b;
    std::vector<EnergyResult> energies;
    std::vector<std::string> warnings;
};

/// Evaluates `n` independent jobs on `workers` threads; job i writes slot i only.
template <class Job>
void parallel_for(std::size_t n, int workers, Job&& job) {
    int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    w = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), std::max<std::size_t>(1, n)));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < n; i = next++) job(i);
    };
    if (w == 1) {
        loop();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int k = 0; k < w; ++k) pool.emplace_back(loop);
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto model = CollisionModel::load(cfg.resolved_basis_file(), cfg.epsilon, cfg.etf);
    SweepResult res;
    res.config = cfg;
    res.b = cfg.impact_parameters();
    const std::size_t nE = cfg.energies_keV.size(), nb = res.b.size();
    std::vector<GridPoint> flat(nE * nb);
    parallel_for(flat.size(), cfg.workers, [&](std::size_t idx) {
        TrajectoryTask task;
        task.energy_index = idx / nb;
        task.b_index = idx % nb;
        task.energy_keV = cfg.energies_keV[task.energy_index];
        task.b = res.b[task.b_index];
        task.method = cfg.method;
        auto o = run_trajectory(cfg, model, task, false);
        flat[idx] = summarize(task, o);
    });
    for (std::size_t e = 0; e < nE; ++e) {
        EnergyResult er;
        er.energy_keV = cfg.energies_keV[e];
        er.points.assign(flat.begin() + static_cast<std::ptrdiff_t>(e * nb),
                         flat.begin() + static_cast<std::ptrdiff_t>((e + 1) * nb));
        for (const auto& p : er.points) er.n_failed += p.status == RunStatus::failed;
        er.n_patched = patch_failed(er.points);
        char buf[160];
        if (er.n_failed > 0) {
            std::snprintf(buf, sizeof buf, "E=%g keV: %d of %zu trajectories failed, %d patched", er.energy_keV,
                          er.n_failed, nb, er.n_patched);
            res.warnings.emplace_back(buf);
        }
        if (er.n_failed * 10 > static_cast<int>(nb)) {
            std::snprintf(buf, sizeof buf, "E=%g keV: more than 10%% of trajectories failed", er.energy_keV);
            res.warnings.emplace_back(buf);
        }
        std::vector<double> p(nb);
        bool usable = true;
        for (std::size_t i = 0; i < nb; ++i) {
            p[i] = er.points[i].p;
            if (!std::isfinite(p[i])) usable = false;
        }
        if (usable) {
            er.sigma = cross_section(res.b, p, er.energy_keV);
        } else {
            er.sigma.energy_keV = er.energy_keV;
            er.sigma.sigma_au = er.sigma.sigma_cm2 = std::nan("");
            er.sigma.n_impact_points = static_cast<int>(nb);
            std::snprintf(buf, sizeof buf, "E=%g keV: cross section unavailable (unpatchable failures)", er.energy_keV);
            res.warnings.emplace_back(buf);
        }
        for (const auto& pt : er.points) {
            for (const auto& w : pt.warnings) {
                std::snprintf(buf, sizeof buf, "E=%g keV, b=%g: ", er.energy_keV, pt.task.b);
                res.warnings.push_back(buf + w);
            }
        }
        res.energies.push_back(std::move(er));
    }
    return res;
}

/// Empirical CDF of the finite entries of `values`: sorted (value, i/n) pairs.
inline std::vector<std::pair<double, double>> ecdf(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }), values.end());
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(values[i], static_cast<double>(i + 1) / n);
    return out;
}

struct ReferenceDataset {
    std::string label;
    std::vector<double> energy_keV;
    std::vector<double> sigma;        // 1e-16 cm²
    std::vector<double> uncertainty;  // percent
};

/// "# label: name" header line; rows of "E sigma uncertainty".
inline ReferenceDataset read_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open reference file '" + path + "'");
    ReferenceDataset d;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto k = t.find("label:");
            if (k != std::string::npos && d.label.empty()) d.label = detail::trim(t.substr(k + 6));
            continue;
        }
        std::istringstream row(t);
        double e = 0, s = 0, u = 0;
        if (!(row >> e >> s)) throw ConfigError("reference file '" + path + "': malformed row '" + t + "'");
        if (!(row >> u)) u = 0.0;
        if (!d.energy_keV.empty() && !(e > d.energy_keV.back())) {
            throw ConfigError("reference file '" + path + "': energies must be ascending");
        }
        d.energy_keV.push_back(e);
        d.sigma.push_back(s);
        d.uncertainty.push_back(u);
    }
    if (d.energy_keV.empty()) throw ConfigError("reference file '" + path + "' has no data");
    if (d.label.empty()) d.label = std::filesystem::path(path).stem().string();
    return d;
}

inline std::vector<ReferenceDataset> bundled_references() {
    const std::string dir = default_data_dir() + "/reference/";
    return {read_reference(dir + "gealy_vanzyl_1987.dat"), read_reference(dir + "mcclure_1966.dat"),
            read_reference(dir + "qas_table1.dat")};
}

struct ComparisonRow {
    double energy_keV = 0.0;
    double sigma_ref = 0.0;
    double uncertainty = 0.0;
    double sigma_calc = 0.0;
    double rel_error = 0.0;
};

struct Comparison {
    std::string label;
    std::vector<ComparisonRow> rows;
    double mean_rel_error = 0.0;
    double max_rel_error = 0.0;
};

/// Computed σ at `e`, log-log interpolated; nullopt outside the computed range.
inline std::optional<double> interpolate_sigma(const std::vector<CrossSectionPoint>& sigma, double e) {
    constexpr double tol = 1e-9;
    for (const auto& s : sigma) {
        if (std::abs(s.energy_keV - e) <= tol * e) return s.sigma_cm2;
    }
    for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
        const double e0 = sigma[i].energy_keV, e1 = sigma[i + 1].energy_keV;
        if (e >= e0 && e <= e1) {
            const double s0 = sigma[i].sigma_cm2, s1 = sigma[i + 1].sigma_cm2;
            if (!(s0 > 0.0 && s1 > 0.0)) return s0 + (s1 - s0) * (e - e0) / (e1 - e0);
            const double u = std::log(e / e0) / std::log(e1 / e0);
            return std::exp(std::log(s0) + u * std::log(s1 / s0));
        }
    }
    return std::nullopt;
}

/// Relative errors |σ_calc − σ_ref| / σ_ref over the reference points inside the computed range.
inline Comparison compare_reference(const std::vector<CrossSectionPoint>& sigma, const ReferenceDataset& ref) {
    for (std::size_t i = 1; i < sigma.size(); ++i) {
        if (!(sigma[i].energy_keV > sigma[i - 1].energy_keV)) throw ContractError("compare_reference: energies must ascend");
    }
    Comparison c;
    c.label = ref.label;
    for (std::size_t i = 0; i < ref.energy_keV.size(); ++i) {
        const auto s = interpolate_sigma(sigma, ref.energy_keV[i]);
        if (!s || !std::isfinite(*s)) continue;
        ComparisonRow r{ref.energy_keV[i], ref.sigma[i], ref.uncertainty[i], *s,
                        std::abs(*s - ref.sigma[i]) / ref.sigma[i]};
        c.rows.push_back(r);
    }
    if (c.rows.empty()) throw ContractError("compare_reference: no energy overlap with '" + ref.label + "'");
    for (const auto& r : c.rows) {
        c.mean_rel_error += r.rel_error;
        c.max_rel_error = std::max(c.max_rel_error, r.rel_error);
    }
    c.mean_rel_error /= static_cast<double>(c.rows.size());
    return c;
}

/// Mean over several datasets of their per-point errors, pooled.
inline double pooled_mean_error(const std::vector<Comparison>& cs) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& c : cs) {
        for (const auto& r : c.rows) {
            s += r.rel_error;
            ++n;
        }
    }
    return n ? s / static_cast<double>(n) : std::nan("");
}

// ---- CSV emission -------------------------------------------------------

namespace io {

inline std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

inline void write_sigma_csv(const std::filesystem::path& p, const SweepResult& r) {
    auto out = open_out(p);
    const auto& c = r.config;
    out << "method,E_keV,grid_id,seed,config_hash,sigma_au,sigma_1e-16_cm2,n_b_points,n_failed,n_patched\n";
    for (std::size_t e = 0; e < r.energies.size(); ++e) {
        const auto& er = r.energies[e];
        out << to_string(c.method) << ',' << format_real(er.energy_keV) << ',' << e << ',' << c.seed_text() << ','
            << c.hash() << ',' << format_real(er.sigma.sigma_au) << ',' << format_real(er.sigma.sigma_cm2) << ','
            << er.sigma.n_impact_points << ',' << er.n_failed << ',' << er.n_patched << '\n';
    }
}

inline void write_pb_csv(const std::filesystem::path& p, const SweepResult& r) {
    auto out = open_out(p);
    const auto& c = r.config;
    out << "method,E_keV,b,grid_id,seed,config_hash,status,P,P_raw,P_exact\n";
    for (std::size_t e = 0; e < r.energies.size(); ++e) {
        for (const auto& g : r.energies[e].points) {
            out << to_string(c.method) << ',' << format_real(g.task.energy_keV) << ',' << format_real(g.task.b) << ','
                << e << ':' << g.task.b_index << ',' << c.seed_text() << ',' << c.hash() << ',' << to_string(g.status)
                << ',' << format_real(g.p) << ',' << format_real(g.p_raw) << ',' << format_real(g.p_exact) << '\n';
        }
    }
}

inline void write_infidelity_csv(const std::filesystem::path& p, const SweepResult& r) {
    auto out = open_out(p);
    const auto& c = r.config;
    out << "method,E_keV,b,grid_id,seed,config_hash,status,infidelity_FL,infidelity_exact,bound_violation,max_n_theta,"
           "measurements\n";
    for (std::size_t e = 0; e < r.energies.size(); ++e) {
        for (const auto& g : r.energies[e].points) {
            out << to_string(c.method) << ',' << format_real(g.task.energy_keV) << ',' << format_real(g.task.b) << ','
                << e << ':' << g.task.b_index << ',' << c.seed_text() << ',' << c.hash() << ',' << to_string(g.status)
                << ',' << format_real(g.fl_infidelity) << ',' << format_real(g.exact_infidelity) << ','
                << format_real(g.bound_violation) << ',' << g.max_n_theta << ',' << g.measurements << '\n';
        }
    }
}

inline std::vector<double> collect(const SweepResult& r, double GridPoint::* field) {
    std::vector<double> v;
    for (const auto& er : r.energies) {
        for (const auto& g : er.points) v.push_back(g.*field);
    }
    return v;
}

inline void write_ecdf_csv(const std::filesystem::path& p, const SweepResult& r) {
    auto out = open_out(p);
    const auto& c = r.config;
    out << "method,quantity,rank,seed,config_hash,value,ecdf\n";
    auto emit = [&](const char* name, double GridPoint::* field) {
        const auto e = ecdf(collect(r, field));
        for (std::size_t i = 0; i < e.size(); ++i) {
            out << to_string(c.method) << ',' << name << ',' << i << ',' << c.seed_text() << ',' << c.hash() << ','
                << format_real(e[i].first) << ',' << format_real(e[i].second) << '\n';
        }
    };
    emit("1-F_L", &GridPoint::fl_infidelity);
    emit("1-F", &GridPoint::exact_infidelity);
}

inline void write_summary(const std::filesystem::path& p, const SweepResult& r) {
    auto out = open_out(p);
    out << "# qcoll sweep summary\n";
    out << "config_hash = " << r.config.hash() << '\n';
    out << r.config.canonical();
    int failed = 0, patched = 0;
    for (const auto& er : r.energies) {
        failed += er.n_failed;
        patched += er.n_patched;
    }
    out << "points = " << r.energies.size() * r.b.size() << "\nfailed = " << failed << "\npatched = " << patched << '\n';
    out << "warnings = " << r.warnings.size() << '\n';
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
}

inline void write_record_csv(const std::filesystem::path& p, const SimulationRecord& rec, const SweepConfig& c,
                             const TrajectoryTask& task) {
    auto out = open_out(p);
    out << "method,E_keV,b,seed,config_hash,t,P,F,F_L,L2,N_theta\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        out << rec.method << ',' << format_real(task.energy_keV) << ',' << format_real(task.b) << ',' << c.seed_text()
            << ',' << c.hash() << ',' << format_real(rec.times[i]) << ','
            << (i < rec.p_of_t.size() ? format_real(rec.p_of_t[i]) : "") << ','
            << (i < rec.fidelity.size() ? format_real(rec.fidelity[i]) : "") << ','
            << (i < rec.fl_bound.size() ? format_real(rec.fl_bound[i]) : "") << ','
            << (i < rec.l2_trace.size() ? format_real(rec.l2_trace[i]) : "") << ','
            << (i < rec.n_theta_trace.size() ? std::to_string(rec.n_theta_trace[i]) : "") << '\n';
    }
}

inline void write_avqds_log(const std::filesystem::path& p, const std::vector<AvqdsStep>& log, const SweepConfig& c,
                            const TrajectoryTask& task) {
    auto out = open_out(p);
    out << "method,E_keV,b,seed,config_hash,step,t,L2,N_theta,selected,measurements\n";
    for (std::size_t i = 0; i < log.size(); ++i) {
        out << "avqds," << format_real(task.energy_keV) << ',' << format_real(task.b) << ',' << c.seed_text() << ','
            << c.hash() << ',' << i << ',' << format_real(log[i].t) << ',' << format_real(log[i].l2) << ','
            << log[i].n_theta << ',' << log[i].selected << ',' << log[i].measurements << '\n';
    }
}

/// Term table g_γ(t) at the requested times.
inline void write_frame_dump(const std::filesystem::path& p, const LcuHamiltonian& h, const std::vector<double>& times,
                             const SweepConfig& c, double energy_keV, double b) {
    auto out = open_out(p);
    out << "method,E_keV,b,seed,config_hash,term_index,pauli_label";
    for (const double t : times) out << ",g(t=" << format_real(t) << ')';
    out << '\n';
    std::vector<std::vector<double>> g;
    for (const double t : times) g.push_back(h.coefficients(t));
    for (std::size_t k = 0; k < h.size(); ++k) {
        out << "encode," << format_real(energy_keV) << ',' << format_real(b) << ',' << c.seed_text() << ',' << c.hash()
            << ',' << k << ',' << h.terms()[k].label();
        for (const auto& row : g) out << ',' << format_real(row[k]);
        out << '\n';
    }
}

inline void write_comparison_csv(const std::filesystem::path& p, const std::vector<Comparison>& cs,
                                 const std::string& method, const std::string& seed, const std::string& hash) {
    auto out = open_out(p);
    out << "method,reference,E_keV,seed,config_hash,sigma_ref,uncertainty_pct,sigma_calc,rel_error\n";
    for (const auto& c : cs) {
        for (const auto& r : c.rows) {
            out << method << ',' << c.label << ',' << format_real(r.energy_keV) << ',' << seed << ',' << hash << ','
                << format_real(r.sigma_ref) << ',' << format_real(r.uncertainty) << ',' << format_real(r.sigma_calc)
                << ',' << format_real(r.rel_error) << '\n';
        }
    }
}

/// Reads back a sigma CSV: (method, seed, config hash, table).
struct SigmaTable {
    std::string method;
    std::string seed;
    std::string config_hash;
    std::vector<CrossSectionPoint> points;
};

inline SigmaTable read_sigma_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open '" + p.string() + "'");
    SigmaTable t;
    std::string line;
    std::getline(in, line);
    std::vector<std::string> head;
    {
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) head.push_back(detail::trim(f));
    }
    auto col = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(head.begin(), head.end(), name);
        if (it == head.end()) throw ConfigError("'" + p.string() + "': missing column " + name);
        return static_cast<std::size_t>(it - head.begin());
    };
    const auto cm = col("method"), ce = col("E_keV"), cs = col("sigma_1e-16_cm2"), cn = col("n_b_points");
    const auto cseed = col("seed"), ch = col("config_hash");
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
        while (f.size() < head.size()) f.emplace_back();
        CrossSectionPoint pt;
        pt.energy_keV = detail::parse_real("E_keV", f[ce]);
        pt.sigma_cm2 = f[cs].empty() ? std::nan("") : detail::parse_real("sigma", f[cs]);
        pt.sigma_au = pt.sigma_cm2 / constants::kBohr2In1e16Cm2;
        pt.n_impact_points = static_cast<int>(detail::parse_int("n_b_points", f[cn]));
        t.method = f[cm];
        t.seed = f[cseed];
        t.config_hash = f[ch];
        t.points.push_back(pt);
    }
    return t;
}

}  // namespace io

// ---- SVG figures --------------------------------------------------------

inline void write_sweep_plots(const std::filesystem::path& dir, const SweepResult& r,
                              const std::vector<ReferenceDataset>& refs) {
    const std::string m = to_string(r.config.method);
    svg::LinePlot sp;
    sp.title = "Charge transfer cross section (" + m + ")";
    sp.x_label = "E (keV)";
    sp.y_label = "sigma (1e-16 cm^2)";
    svg::Series s{m, {}, {}, false};
    for (const auto& er : r.energies) {
        s.x.push_back(er.energy_keV);
        s.y.push_back(er.sigma.sigma_cm2);
    }
    sp.series.push_back(s);
    for (const auto& ref : refs) sp.series.push_back({ref.label, ref.energy_keV, ref.sigma, true});
    svg::write_file((dir / "sigma.svg").string(), svg::render(sp));

    svg::LinePlot pb;
    pb.title = "P(b) (" + m + ")";
    pb.x_label = "b (a.u.)";
    pb.y_label = "P";
    for (const auto& er : r.energies) {
        char lab[32];
        std::snprintf(lab, sizeof lab, "%g keV", er.energy_keV);
        svg::Series q{lab, r.b, {}, false};
        for (const auto& g : er.points) q.y.push_back(g.p);
        pb.series.push_back(std::move(q));
    }
    svg::write_file((dir / "pb.svg").string(), svg::render(pb));

    svg::Heatmap hm;
    hm.title = "1 - F_L (" + m + ")";
    hm.x_label = "E (keV)";
    hm.y_label = "b (a.u.)";
    for (const auto& er : r.energies) hm.x.push_back(er.energy_keV);
    hm.y = r.b;
    hm.value.assign(r.b.size(), std::vector<double>(r.energies.size()));
    for (std::size_t e = 0; e < r.energies.size(); ++e) {
        for (std::size_t i = 0; i < r.b.size(); ++i) hm.value[i][e] = r.energies[e].points[i].fl_infidelity;
    }
    svg::write_file((dir / "infidelity_heatmap.svg").string(), svg::render(hm));

    svg::LinePlot ec;
    ec.title = "ECDF of final infidelity (" + m + ")";
    ec.x_label = "log10(1 - F_L)";
    ec.y_label = "fraction";
    svg::Series es{"1-F_L", {}, {}, false};
    for (const auto& [v, f] : ecdf(io::collect(r, &GridPoint::fl_infidelity))) {
        es.x.push_back(std::log10(std::max(v, 1e-18)));
        es.y.push_back(f);
    }
    ec.series.push_back(es);
    svg::write_file((dir / "ecdf.svg").string(), svg::render(ec));
}

/// Writes every sweep artifact under `dir`.
inline void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& r,
                                const std::vector<ReferenceDataset>& refs) {
    std::filesystem::create_directories(dir);
    io::write_sigma_csv(dir / "sigma.csv", r);
    io::write_pb_csv(dir / "pb.csv", r);
    io::write_infidelity_csv(dir / "infidelity_grid.csv", r);
    io::write_ecdf_csv(dir / "ecdf.csv", r);
    io::write_summary(dir / "summary.txt", r);
    write_sweep_plots(dir, r, refs);
}

}  // namespace qcoll
