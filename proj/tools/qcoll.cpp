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

// qcoll command line: encode-dump, evolve, sweep, compare, selftest.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcoll/sweep.hpp"

namespace fs = std::filesystem;
using namespace qcoll;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitWarnings = 3;

/// Shared configuration flags: --profile, --config, and one flag per key.
struct ConfigFlags {
    std::string profile;
    std::string file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--profile", profile, "Base profile: desk or paper (default paper)");
        app->add_option("--config", file, "key = value configuration file");
        for (const auto& k : SweepConfig::keys()) {
            if (k == "profile") continue;
            app->add_option("--" + k, values[k], "Configuration key '" + k + "'");
        }
    }

    SweepConfig resolve() const {
        SweepConfig c = profile.empty() ? SweepConfig::paper() : SweepConfig::profile(profile);
        if (!file.empty()) c = SweepConfig::load(file, c);
        for (const auto& [k, v] : values) {
            if (!v.empty()) c.set(k, v);
        }
        c.validate();
        return c;
    }
};

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_encode_dump(const ConfigFlags& flags, double energy, double b, std::vector<double> times, const std::string& out) {
    const auto cfg = flags.resolve();
    const auto model = CollisionModel::load(cfg.resolved_basis_file(), cfg.epsilon, cfg.etf);
    const auto ctx = make_trajectory(energy, b, cfg.z_span, cfg.n_t);
    const auto h = build_frames(model, ctx);
    if (times.empty()) times = {ctx.t_grid.front(), 0.0, ctx.t_grid.back()};
    const fs::path path = out.empty() ? fs::path(cfg.output_dir) / "pauli_table.csv" : fs::path(out);
    io::write_frame_dump(path, h, times, cfg, energy, b);
    std::printf("%zu terms, %zu frames -> %s\n", h.size(), (h.frames() ? h.frames()->times.size() : std::size_t{0}), path.string().c_str());
    for (std::size_t k = 0; k < h.size(); ++k) {
        std::printf("  %2zu %s", k, h.terms()[k].label().c_str());
        for (const double t : times) std::printf(" %+.6e", h.coefficients(t)[k]);
        std::printf("\n");
    }
    return kExitOk;
}

int cmd_evolve(const ConfigFlags& flags, double energy, double b, const std::string& which) {
    auto cfg = flags.resolve();
    cfg.oracle = true;
    const auto model = CollisionModel::load(cfg.resolved_basis_file(), cfg.epsilon, cfg.etf);
    std::vector<Method> methods;
    if (which == "all") methods = {Method::exact, Method::qas, Method::avqds};
    else methods = {parse_method(which)};
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    svg::LinePlot plot;
    plot.title = "P(t) at E=" + fmt_g(energy) + " keV, b=" + fmt_g(b) + " a.u.";
    plot.x_label = "t (a.u.)";
    plot.y_label = "P";
    int rc = kExitOk;
    for (const auto m : methods) {
        TrajectoryTask task{energy, b, m, 0, 0};
        const auto o = run_trajectory(cfg, model, task);
        const auto& r = o.record;
        if (r.status == RunStatus::failed) {
            std::fprintf(stderr, "%s failed: %s\n", to_string(m), r.error.c_str());
            rc = kExitWarnings;
            continue;
        }
        io::write_record_csv(dir / ("record_" + std::string(to_string(m)) + ".csv"), r, cfg, task);
        if (m == Method::avqds) io::write_avqds_log(dir / "avqds_steps.csv", o.avqds_log, cfg, task);
        std::printf("%-6s P=%.8f  1-F=%s  1-F_L=%s  max N_theta=%d  measurements=%ld\n", to_string(m), r.p_asymptotic,
                    r.fidelity.empty() ? "-" : fmt_g(r.final_infidelity()).c_str(),
                    fmt_g(r.final_fl_infidelity()).c_str(), r.max_n_theta(), r.measurement_count);
        for (const auto& w : r.warnings) {
            std::fprintf(stderr, "warning: %s\n", w.c_str());
            rc = kExitWarnings;
        }
        plot.series.push_back({to_string(m), r.times, r.p_of_t, false});
    }
    svg::write_file((dir / "p_of_t.svg").string(), svg::render(plot));
    return rc;
}

int cmd_sweep(const ConfigFlags& flags) {
    const auto cfg = flags.resolve();
    const auto res = run_sweep(cfg);
    const auto refs = bundled_references();
    write_sweep_outputs(cfg.output_dir, res, refs);
    std::printf("config %s, method %s, %zu energies x %zu impact parameters\n", cfg.hash().c_str(),
                to_string(cfg.method), res.energies.size(), res.b.size());
    for (const auto& e : res.energies) {
        std::printf("  E=%7.3f keV  sigma=%8.4f e-16 cm^2  failed=%d patched=%d\n", e.energy_keV, e.sigma.sigma_cm2,
                    e.n_failed, e.n_patched);
    }
    for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return res.warnings.empty() ? kExitOk : kExitWarnings;
}

int cmd_compare(const std::string& sigma_path, std::vector<std::string> ref_paths, const std::string& out) {
    const auto table = io::read_sigma_csv(sigma_path);
    std::vector<ReferenceDataset> refs;
    if (ref_paths.empty()) refs = bundled_references();
    for (const auto& p : ref_paths) refs.push_back(read_reference(p));
    std::vector<Comparison> cs;
    for (const auto& r : refs) {
        try {
            cs.push_back(compare_reference(table.points, r));
        } catch (const ContractError& e) {
            std::fprintf(stderr, "warning: %s\n", e.what());
        }
    }
    for (const auto& c : cs) {
        std::printf("%s: mean %.2f%%, max %.2f%% over %zu points\n", c.label.c_str(), 100 * c.mean_rel_error,
                    100 * c.max_rel_error, c.rows.size());
        for (const auto& r : c.rows) {
            std::printf("  E=%6.2f  ref %7.3f  calc %7.3f  err %6.2f%%\n", r.energy_keV, r.sigma_ref, r.sigma_calc,
                        100 * r.rel_error);
        }
    }
    const fs::path path = out.empty() ? fs::path(sigma_path).parent_path() / "comparison.csv" : fs::path(out);
    io::write_comparison_csv(path, cs, table.method, table.seed, table.config_hash);
    return cs.size() == refs.size() ? kExitOk : kExitWarnings;
}

/// Quick invariant checks; full coverage lives in the test suite.
int cmd_selftest() {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
        failures += !ok;
    };
    std::mt19937_64 rng(7);
    bool assoc = true;
    for (int i = 0; i < 200; ++i) {
        const auto a = PauliString(4, rng() & 15, rng() & 15, static_cast<int>(rng() & 3));
        const auto b = PauliString(4, rng() & 15, rng() & 15, static_cast<int>(rng() & 3));
        const auto c = PauliString(4, rng() & 15, rng() & 15, static_cast<int>(rng() & 3));
        assoc = assoc && ((a * b) * c == a * (b * c)) && (a * a.without_phase() * a.without_phase() == a);
    }
    check(assoc, "Pauli products associative, P^2 = I");

    const auto sets = build_bk_sets(4);
    bool car = true;
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            const auto ap = ladder_operator(sets, p, false), aqd = ladder_operator(sets, q, true);
            auto ac = ap * aqd;
            ac += aqd * ap;
            ac.prune(1e-14);
            const bool want = p == q;
            car = car && (want ? (ac.size() == 1 && std::abs(ac.coefficient(PauliString::identity(4)) - 1.0) < 1e-14)
                               : ac.size() == 0);
        }
    }
    check(car, "BK ladder operators satisfy {a_p, a_q^dagger} = delta_pq");
    check(occupation_to_qubit(0b0001, sets) == 0b1011, "fermionic |0001> encodes to qubit |1011>");

    const auto model = CollisionModel::load();
    const auto ctx = make_trajectory(10.0, 1.6, 30.0, 401);
    const auto h = build_frames(model, ctx);
    check(h.size() == 13, "13 Pauli terms per frame");
    const auto phi0 = StateVector::basis(4, kInitialState);
    const auto ex = propagate_exact(h, phi0, ctx.t_grid);
    double drift = 0.0;
    for (const auto& s : ex.states) drift = std::max(drift, std::abs(s.norm() - 1.0));
    check(drift <= 1e-9, "exact propagation norm drift " + fmt_g(drift) + " <= 1e-9");
    const auto basis = build_moment_basis(h, phi0, 4);
    check(basis.generators.size() == 4 && basis.closed, "moment basis closes with 4 states");
    const auto q = evolve_qas(measure_model(basis, h), basis, h, ctx.t_grid);
    check(std::abs(transfer_probability(q.states.back()) - transfer_probability(ex.states.back())) < 1e-6,
          "QAS final P matches exact within 1e-6");
    return failures ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcoll: H+ + H(1s) charge transfer with hybrid quantum-classical propagators"};
    app.require_subcommand(1);

    ConfigFlags enc_flags, evo_flags, sweep_flags;
    double enc_e = 10.0, enc_b = 1.6, evo_e = 10.0, evo_b = 1.6;
    std::vector<double> enc_times;
    std::string enc_out, evo_method = "all", cmp_sigma, cmp_out;
    std::vector<std::string> cmp_refs;

    auto* enc = app.add_subcommand("encode-dump", "Dump the encoded Pauli table g_gamma(t) as CSV");
    enc_flags.attach(enc);
    enc->add_option("--energy", enc_e, "Collision energy (keV)");
    enc->add_option("--b", enc_b, "Impact parameter (a.u.)");
    enc->add_option("--times", enc_times, "Times at which to tabulate g_gamma (a.u.)");
    enc->add_option("--out", enc_out, "Output CSV path");

    auto* evo = app.add_subcommand("evolve", "Run one trajectory and write P(t), F, F_L, L2, N_theta");
    evo_flags.attach(evo);
    evo->add_option("--energy", evo_e, "Collision energy (keV)");
    evo->add_option("--b", evo_b, "Impact parameter (a.u.)");
    evo->add_option("--run", evo_method, "all, exact, qas or avqds");

    auto* sw = app.add_subcommand("sweep", "Cross sections, P(b), infidelity grid, ECDF");
    sweep_flags.attach(sw);

    auto* cmp = app.add_subcommand("compare", "Compare a sigma.csv against reference data");
    cmp->add_option("--sigma", cmp_sigma, "sigma.csv produced by sweep")->required();
    cmp->add_option("--ref", cmp_refs, "Reference files (default: bundled)");
    cmp->add_option("--out", cmp_out, "Output CSV path");

    auto* st = app.add_subcommand("selftest", "Run the quick invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*enc) return cmd_encode_dump(enc_flags, enc_e, enc_b, enc_times, enc_out);
        if (*evo) return cmd_evolve(evo_flags, evo_e, evo_b, evo_method);
        if (*sw) return cmd_sweep(sweep_flags);
        if (*cmp) return cmd_compare(cmp_sigma, cmp_refs, cmp_out);
        if (*st) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitOk;
}
