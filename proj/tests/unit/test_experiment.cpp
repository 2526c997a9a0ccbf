// SPDX-License-Identifier: Apache-2.0
//
// beamlab - robust adaptive beamforming via preprocessing-based spatial sampling
// Copyright (C) 2026 The beamlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "catch_amalgamated.hpp"

#include "beamlab/csv.hpp"
#include "beamlab/error.hpp"
#include "beamlab/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <chrono>
#include <cstring>
#include <sstream>

using namespace beamlab;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("beamlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_snr_config()
{
    ExperimentConfig c = make_preset("look_snr");
    c.sweep_values = {0.0, 20.0};
    c.trials = 4;
    c.seed = 11;
    return c;
}

} // namespace

TEST_CASE("presets - every preset is valid and aliases resolve")
{
    const auto names = preset_names();
    CHECK(names.size() >= 13);
    for (const auto &n : names)
    {
        ExperimentConfig c = make_preset(n);
        CHECK(c.name == n);
        CHECK_NOTHROW(c.validate());
    }
    for (int i = 1; i <= 12; ++i)
        CHECK_NOTHROW(make_preset("fig" + std::to_string(i)));
    CHECK(make_preset("fig5").name == "look_snr");
    CHECK(make_preset("fig5").scenario.mismatch.kind == MismatchKind::look_direction);
    CHECK(make_preset("fig8").sweep == SweepKind::snapshots);
    CHECK_THROWS_AS(make_preset("fig99"), Error);
}

TEST_CASE("ExperimentConfig - validation")
{
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.sweep_values.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.methods.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.fine_step_deg = 20.0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("ExperimentConfig - sweep values map onto the scenario")
{
    ExperimentConfig c;
    c.sweep = SweepKind::snapshots;
    CHECK(c.at_sweep_value(40.0).scenario.snapshots == 40);
    c.sweep = SweepKind::snr;
    CHECK(c.at_sweep_value(-5.0).scenario.snr_db == -5.0);
    CHECK(sweep_kind_from_string(to_string(SweepKind::beampattern_eta)) == SweepKind::beampattern_eta);
}

TEST_CASE("apply_flat_config - preset first, then overrides")
{
    FlatConfig f = FlatConfig::parse(R"(preset = "fig6"
trials = 7
seed = 99
methods = ["ppbss", "smi"]
sweep_values = [10, 20]
elements = 8
interferer_doas_deg = [-30, 40]
inr_db = [20, 25]
mismatch = "gain_phase"
)");
    ExperimentConfig c = experiment_config_from(f);
    CHECK(c.name == "look_snapshots");
    CHECK(c.trials == 7);
    CHECK(c.seed == 99);
    CHECK(c.methods == std::vector<MethodTag>{MethodTag::ppbss, MethodTag::smi});
    CHECK(c.sweep_values == std::vector<double>{10.0, 20.0});
    CHECK(c.scenario.geometry.element_count() == 8);
    CHECK(c.scenario.interferer_doas_deg == std::vector<double>{-30.0, 40.0});
    CHECK(c.scenario.mismatch.kind == MismatchKind::gain_phase);

    try
    {
        experiment_config_from(FlatConfig::parse("trails = 3\n"));
        FAIL("expected config error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::config);
    }
    CHECK_THROWS_AS(experiment_config_from(FlatConfig::parse("methods = [\"capon\"]\n")), Error);
}

TEST_CASE("run_trial - optimal weight in white noise")
{
    ExperimentConfig c;
    c.methods = {MethodTag::optimal};
    c.scenario.interferer_doas_deg.clear();
    c.scenario.inr_db.clear();
    TrialOutcome o = run_trial(c, 0);
    REQUIRE(o.methods.size() == 1);
    REQUIRE(o.methods[0].result.has_value());
    CHECK(o.methods[0].result->output_sinr_db == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("run_trial - deterministic records")
{
    ExperimentConfig c = small_snr_config();
    c.methods = {MethodTag::ppbss, MethodTag::optimal, MethodTag::smi, MethodTag::diagonal_loading};
    ExperimentConfig at = c.at_sweep_value(10.0);
    auto a = trial_records(c, 2, 10.0, run_trial(at, 2));
    auto b = trial_records(c, 2, 10.0, run_trial(at, 2));
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].status == b[i].status);
        CHECK(std::memcmp(&a[i].sinr_db, &b[i].sinr_db, sizeof(double)) == 0);
        CHECK(a[i].est_doas == b[i].est_doas);
        CHECK(a[i].seed == 11);
        CHECK(a[i].trial == 2);
        CHECK(a[i].sweep_value == 10.0);
        if (a[i].ok())
            CHECK(a[i].distortion < 1e-10);
    }
    CHECK(a[0].method == MethodTag::ppbss);
    CHECK(a[0].est_doas.size() == 2);
}

TEST_CASE("run_trial - module failures are recorded, not thrown")
{
    ExperimentConfig c = small_snr_config();
    // Twenty peaks cannot be separated by a twelve-element transform.
    c.tracked_interferers = 20;
    TrialOutcome o = run_trial(c.at_sweep_value(0.0), 0);
    REQUIRE(o.methods[0].method == MethodTag::ppbss);
    CHECK_FALSE(o.methods[0].result.has_value());
    REQUIRE(o.methods[0].failure.has_value());
    CHECK(*o.methods[0].failure == ErrorCode::insufficient_peaks);
    auto rows = trial_records(c, 0, 0.0, o);
    CHECK(rows[0].status == "insufficient_peaks");
    CHECK(std::isnan(rows[0].sinr_db));
    CHECK(rows[1].ok());
}

TEST_CASE("aggregate - failed rows are excluded and counted")
{
    std::vector<TrialRecord> rows(5);
    for (int i = 0; i < 5; ++i)
    {
        rows[static_cast<std::size_t>(i)].trial = i;
        rows[static_cast<std::size_t>(i)].sinr_db = static_cast<double>(i);
    }
    rows[4].status = "insufficient_peaks";
    rows[4].sinr_db = std::numeric_limits<double>::quiet_NaN();
    auto agg = aggregate(rows);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].mean_sinr_db == Catch::Approx(1.5));
    CHECK(agg[0].trials_used == 4);
    CHECK(agg[0].excluded == 1);
}

TEST_CASE("trial CSV - round trip and aggregate verification")
{
    const fs::path dir = scratch("trials");
    fs::create_directories(dir);
    ExperimentConfig c = small_snr_config();
    auto rows = run_monte_carlo(c, 1);
    CHECK(rows.size() == 2 * 4 * c.methods.size());
    write_trial_csv(dir / "trials.csv", rows);
    write_aggregate_csv(dir / "aggregate.csv", aggregate(rows));
    CHECK_NOTHROW(verify_aggregate_csv(dir / "trials.csv", dir / "aggregate.csv"));

    auto back = read_trial_csv(dir / "trials.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(back[i].method == rows[i].method);
        CHECK(back[i].status == rows[i].status);
        if (rows[i].ok())
            CHECK(back[i].sinr_db == rows[i].sinr_db);
        CHECK(back[i].est_doas == rows[i].est_doas);
    }

    // Tampering with one mean is caught.
    std::string agg = slurp(dir / "aggregate.csv");
    const auto pos = agg.find('\n') + 1;
    const auto comma = agg.find(',', agg.find(',', pos) + 1) + 1;
    agg.insert(comma, "1");
    {
        std::ofstream out(dir / "aggregate.csv", std::ios::binary);
        out << agg;
    }
    try
    {
        verify_aggregate_csv(dir / "trials.csv", dir / "aggregate.csv");
        FAIL("expected io error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::io);
    }
    fs::remove_all(dir);
}

TEST_CASE("run_monte_carlo - identical rows for any worker count")
{
    const fs::path dir = scratch("workers");
    fs::create_directories(dir);
    ExperimentConfig c = small_snr_config();
    write_trial_csv(dir / "w1.csv", run_monte_carlo(c, 1));
    write_trial_csv(dir / "w3.csv", run_monte_carlo(c, 3));
    write_trial_csv(dir / "w8.csv", run_monte_carlo(c, 8));
    const std::string one = slurp(dir / "w1.csv");
    CHECK(one.size() > 100);
    CHECK(one == slurp(dir / "w3.csv"));
    CHECK(one == slurp(dir / "w8.csv"));
    fs::remove_all(dir);
}

TEST_CASE("worker_count - environment cap")
{
    CHECK(worker_count(3) >= 1);
    CHECK(worker_count(3) <= 3);
    ::setenv("BEAMLAB_THREADS", "2", 1);
    CHECK(worker_count(8) == 2);
    CHECK(worker_count(1) == 1);
    ::unsetenv("BEAMLAB_THREADS");
}

TEST_CASE("run_sweep - unwritable output directory fails before any work")
{
    ExperimentConfig c = make_preset("look_snr");
    c.output_dir = "/proc/beamlab_no_such_dir";
    const auto start = std::chrono::steady_clock::now();
    try
    {
        run_sweep(c);
        FAIL("expected io error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::io);
    }
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
}

TEST_CASE("run_sweep - snr sweep writes trial, aggregate and plot files")
{
    ExperimentConfig c = small_snr_config();
    c.output_dir = scratch("sweep");
    SweepResult r = run_sweep(c);
    CHECK(fs::exists(c.output_dir / "trials.csv"));
    CHECK(fs::exists(c.output_dir / "aggregate.csv"));
    CHECK(fs::exists(c.output_dir / "plot.gp"));
    CHECK(r.aggregate.size() == 2 * c.methods.size());
    CHECK_NOTHROW(verify_aggregate_csv(c.output_dir / "trials.csv", c.output_dir / "aggregate.csv"));
    const std::string plot = slurp(c.output_dir / "plot.gp");
    CHECK(plot.find("aggregate.csv") != std::string::npos);
    fs::remove_all(c.output_dir);
}

TEST_CASE("run_sweep - correlation heatmap has a unit diagonal")
{
    ExperimentConfig c = make_preset("correlation");
    c.trials = 2;
    c.output_dir = scratch("corr");
    SweepResult r = run_sweep(c);
    CHECK(r.correlation.size() == 2);
    CsvTable heat = read_csv(c.output_dir / "correlation_heatmap_m20.csv");
    REQUIRE(heat.rows.size() == 24);
    for (std::size_t i = 0; i < heat.rows.size(); ++i)
        CHECK(heat.rows[i][i] == "1");
    CHECK(fs::exists(c.output_dir / "correlation.csv"));
    CHECK(fs::exists(c.output_dir / "ipnc_true_m20.csv"));
    fs::remove_all(c.output_dir);
}

TEST_CASE("run_sweep - beampattern sweep reports null depths")
{
    ExperimentConfig c = make_preset("beampattern_rho");
    c.output_dir = scratch("bp");
    SweepResult r = run_sweep(c);
    REQUIRE(r.null_depth.has_value());
    CHECK(r.null_depth->exact_db.rows() == 3);
    CHECK(r.null_depth->exact_db.cols() == 2);
    CHECK(r.null_depth->eta == c.fixed_eta);
    CHECK(fs::exists(c.output_dir / "null_depth.csv"));
    CHECK(fs::exists(c.output_dir / "null_depth_monotonicity.csv"));
    CHECK(fs::exists(c.output_dir / "beampattern_rho_0p5.csv"));
    CHECK(fs::exists(c.output_dir / "beampattern_rho_0p5_approx.csv"));
    fs::remove_all(c.output_dir);
}

TEST_CASE("run_monte_carlo - look-direction scenario at SNR 20 dB tracks the optimum", "[!shouldfail]")
{
    // Same cause as the shallow nulls: the gap is close to 10 dB.
    ExperimentConfig c = make_preset("look_snr");
    c.sweep_values = {20.0};
    c.methods = {MethodTag::ppbss, MethodTag::optimal};
    c.trials = 100;
    double ppbss = 0.0, optimal = 0.0;
    for (const auto &row : aggregate(run_monte_carlo(c, 1)))
        (row.method == MethodTag::ppbss ? ppbss : optimal) = row.mean_sinr_db;
    CHECK(optimal - ppbss <= 2.0);
}

TEST_CASE("run_monte_carlo - random-SV scenario is stable over the snapshot count")
{
    ExperimentConfig c = make_preset("random_sv_snapshots");
    c.sweep_values.clear();
    for (int k = 10; k <= 100; k += 10)
        c.sweep_values.push_back(k);
    c.scenario.snr_db = 20.0;
    c.methods = {MethodTag::ppbss};
    c.trials = 100;
    double lo = 1e300, hi = -1e300;
    for (const auto &row : aggregate(run_monte_carlo(c, 1)))
    {
        lo = std::min(lo, row.mean_sinr_db);
        hi = std::max(hi, row.mean_sinr_db);
    }
    CHECK(hi - lo <= 2.0);
}
