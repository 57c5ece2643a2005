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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qcoll/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using qcoll::SweepConfig;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qcoll_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(SweepConfig, ParsesKeyValueText) {
    const auto c = SweepConfig::parse(
        "profile = desk\n"
        "# comment line\n"
        "energies = 1, 5.5, 25   # trailing comment\n"
        "method = avqds\n"
        "n_b = 12\n"
        "shots = 4096\n"
        "seed = 7\n"
        "oracle = true\n");
    EXPECT_EQ(c.energies_keV, (std::vector<double>{1.0, 5.5, 25.0}));
    EXPECT_EQ(c.method, qcoll::Method::avqds);
    EXPECT_EQ(c.n_b, 12);
    EXPECT_EQ(c.n_t, 1001);
    EXPECT_EQ(*c.shots, 4096);
    EXPECT_EQ(*c.seed, 7);
    EXPECT_TRUE(c.oracle);
}

TEST(SweepConfig, PaperProfileDefaults) {
    const auto c = SweepConfig::paper();
    EXPECT_EQ(c.n_b, 500);
    EXPECT_EQ(c.b_max, 10.0);
    EXPECT_EQ(c.z_span, 30.0);
    EXPECT_EQ(c.dt, 0.005);
    EXPECT_EQ(c.l2_cut, 1e-8);
    EXPECT_EQ(c.energies_keV.size(), 15u);
    const auto b = c.impact_parameters();
    EXPECT_NEAR(b.front(), 0.02, 1e-15);
    EXPECT_EQ(b.back(), 10.0);
}

TEST(SweepConfig, LogSpacedEnergies) {
    const auto c = SweepConfig::parse("energies = log:1:25:13\n");
    ASSERT_EQ(c.energies_keV.size(), 13u);
    EXPECT_NEAR(c.energies_keV.front(), 1.0, 1e-14);
    EXPECT_NEAR(c.energies_keV.back(), 25.0, 1e-12);
    EXPECT_NEAR(c.energies_keV[1] / c.energies_keV[0], c.energies_keV[12] / c.energies_keV[11], 1e-12);
}

TEST(SweepConfig, RejectsInvalidInput) {
    EXPECT_THROW(SweepConfig::parse("bogus = 1\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("n_b = 9\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("b_min = 0\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("energies = 5, 1\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("dt = fast\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("method = magic\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::parse("no equals sign\n"), qcoll::ConfigError);
    EXPECT_THROW(SweepConfig::load("/nonexistent.conf"), qcoll::ConfigError);
}

TEST(SweepConfig, HashIgnoresWorkersAndOutput) {
    auto a = SweepConfig::desk();
    auto b = a;
    b.workers = 7;
    b.output_dir = "/elsewhere";
    EXPECT_EQ(a.hash(), b.hash());
    b.dt = 0.004;
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Compare, TableRowExamples) {
    const qcoll::ReferenceDataset ref{"exp", {1.0, 15.2}, {16.3, 6.5}, {0.0, 0.0}};
    std::vector<qcoll::CrossSectionPoint> sigma(2);
    sigma[0].energy_keV = 1.0;
    sigma[0].sigma_cm2 = 17.0;
    sigma[1].energy_keV = 15.2;
    sigma[1].sigma_cm2 = 6.36;
    const auto c = qcoll::compare_reference(sigma, ref);
    ASSERT_EQ(c.rows.size(), 2u);
    EXPECT_NEAR(c.rows[0].rel_error, 0.7 / 16.3, 1e-15);
    EXPECT_NEAR(c.rows[1].rel_error, 0.14 / 6.5, 1e-15);
    EXPECT_NEAR(c.max_rel_error, c.rows[0].rel_error, 1e-15);
    // The published percentages come from σ before rounding to three figures.
    sigma[0].sigma_cm2 = 16.98;
    sigma[1].sigma_cm2 = 6.3615;
    const auto u = qcoll::compare_reference(sigma, ref);
    EXPECT_NEAR(100 * u.rows[0].rel_error, 4.17, 0.005);
    EXPECT_NEAR(100 * u.rows[1].rel_error, 2.13, 0.005);
}

TEST(Compare, IdenticalTablesAndInterpolation) {
    std::vector<qcoll::CrossSectionPoint> sigma;
    qcoll::ReferenceDataset ref{"self", {}, {}, {}};
    for (double e : {1.0, 2.0, 4.0, 8.0}) {
        qcoll::CrossSectionPoint p;
        p.energy_keV = e;
        p.sigma_cm2 = 10.0 / std::sqrt(e);
        sigma.push_back(p);
        ref.energy_keV.push_back(e);
        ref.sigma.push_back(p.sigma_cm2);
        ref.uncertainty.push_back(0.0);
    }
    EXPECT_EQ(qcoll::compare_reference(sigma, ref).max_rel_error, 0.0);
    // Power laws interpolate exactly in log-log.
    EXPECT_NEAR(*qcoll::interpolate_sigma(sigma, 3.0), 10.0 / std::sqrt(3.0), 1e-12);
    EXPECT_FALSE(qcoll::interpolate_sigma(sigma, 9.0).has_value());
    const qcoll::ReferenceDataset far{"far", {50.0}, {1.0}, {0.0}};
    EXPECT_THROW(qcoll::compare_reference(sigma, far), qcoll::ContractError);
}

TEST(Compare, BundledReferences) {
    const auto refs = qcoll::bundled_references();
    ASSERT_EQ(refs.size(), 3u);
    EXPECT_EQ(refs[2].energy_keV.size(), 15u);
    EXPECT_DOUBLE_EQ(refs[2].sigma[0], 17.0);
    for (const auto& r : refs) {
        EXPECT_FALSE(r.label.empty());
        for (std::size_t i = 1; i < r.energy_keV.size(); ++i) EXPECT_GT(r.energy_keV[i], r.energy_keV[i - 1]);
    }
}

TEST(Sweep, NearestNeighbourPatching) {
    std::vector<qcoll::GridPoint> row(6);
    for (std::size_t i = 0; i < row.size(); ++i) {
        row[i].task.b_index = i;
        row[i].p = row[i].p_raw = 0.1 * static_cast<double>(i);
    }
    row[0].status = qcoll::RunStatus::failed;
    row[3].status = qcoll::RunStatus::failed;
    row[4].status = qcoll::RunStatus::failed;
    EXPECT_EQ(qcoll::patch_failed(row), 3);
    EXPECT_DOUBLE_EQ(row[0].p, 0.1);
    EXPECT_DOUBLE_EQ(row[3].p, 0.2);  // tie between b-index 2 and 5 is not a tie; 2 is nearer
    EXPECT_DOUBLE_EQ(row[4].p, 0.5);
    EXPECT_EQ(row[4].status, qcoll::RunStatus::patched);
}

TEST(Sweep, Ecdf) {
    const auto e = qcoll::ecdf({3.0, std::nan(""), 1.0, 2.0, 2.0});
    ASSERT_EQ(e.size(), 4u);
    EXPECT_EQ(e.front().first, 1.0);
    EXPECT_DOUBLE_EQ(e.front().second, 0.25);
    EXPECT_DOUBLE_EQ(e.back().second, 1.0);
}

TEST(Sweep, FailedTrajectoryIsRecordedNotThrown) {
    // Without the translation phase, b = 0 makes the two channels identical at t = 0.
    auto c = SweepConfig::desk();
    c.n_t = 101;
    c.etf = false;
    const auto model = qcoll::CollisionModel::load(c.resolved_basis_file(), std::nullopt, false);
    const auto o = qcoll::run_trajectory(c, model, {10.0, 0.0, qcoll::Method::qas, 0, 0});
    EXPECT_EQ(o.record.status, qcoll::RunStatus::failed);
    EXPECT_NE(o.record.error.find("b=0"), std::string::npos);
}

TEST(Sweep, QasAgreesWithExactAtBenchmarkPoint) {
    auto c = SweepConfig::desk();
    c.oracle = true;
    const auto model = qcoll::CollisionModel::load();
    const auto o = qcoll::run_trajectory(c, model, {10.0, 1.6, qcoll::Method::qas, 0, 0});
    ASSERT_TRUE(o.exact.has_value());
    EXPECT_NEAR(o.record.p_asymptotic, o.exact->p_asymptotic, 1e-6);
}

TEST(Sweep, OutputIndependentOfWorkerCount) {
    auto c = SweepConfig::desk();
    c.energies_keV = {2.0, 9.6};
    c.n_b = 10;
    c.n_t = 401;
    c.oracle = true;
    c.method = qcoll::Method::avqds;
    const auto refs = qcoll::bundled_references();
    c.workers = 1;
    const auto d1 = scratch_dir("w1");
    qcoll::write_sweep_outputs(d1, qcoll::run_sweep(c), refs);
    c.workers = 4;
    const auto d4 = scratch_dir("w4");
    qcoll::write_sweep_outputs(d4, qcoll::run_sweep(c), refs);
    for (const char* f : {"sigma.csv", "pb.csv", "infidelity_grid.csv", "ecdf.csv", "summary.txt", "sigma.svg"}) {
        const auto a = slurp(d1 / f);
        EXPECT_FALSE(a.empty()) << f;
        EXPECT_EQ(a, slurp(d4 / f)) << f;
    }
    const auto sigma = qcoll::io::read_sigma_csv(d1 / "sigma.csv");
    EXPECT_EQ(sigma.points.size(), 2u);
    EXPECT_EQ(sigma.method, "avqds");
    EXPECT_EQ(sigma.config_hash, c.hash());
}

TEST(Cli, ExitCodes) {
    const std::string cli = QCOLL_CLI_PATH;
    EXPECT_EQ(WEXITSTATUS(std::system((cli + " sweep --bogus_key 1 >/dev/null 2>&1").c_str())), 2);
    EXPECT_EQ(WEXITSTATUS(std::system((cli + " sweep --n_b 3 >/dev/null 2>&1").c_str())), 2);
    EXPECT_EQ(WEXITSTATUS(std::system((cli + " selftest >/dev/null 2>&1").c_str())), 0);
    const auto d = scratch_dir("cli");
    const std::string enc = cli + " encode-dump --profile desk --output_dir " + d.string() + " >/dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(enc.c_str())), 0);
    std::ifstream in(d / "pauli_table.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("method,E_keV,b,seed,config_hash,term_index,pauli_label", 0), 0u);
    int rows = 0;
    for (std::string line; std::getline(in, line);) rows += !line.empty();
    EXPECT_EQ(rows, 13);
}

}  // namespace
