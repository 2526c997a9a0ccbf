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

#pragma once

#include "beamlab/beamforming.hpp"
#include "beamlab/config.hpp"
#include "beamlab/error.hpp"
#include "beamlab/signal_model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beamlab
{

enum class SweepKind
{
    snr,
    snapshots,
    beampattern_rho,
    beampattern_eta,
    correlation,
    crb
};

std::string_view to_string(SweepKind kind);
SweepKind sweep_kind_from_string(std::string_view name);

struct ExperimentConfig
{
    std::string name = "custom";
    ScenarioSpec scenario;
    SweepKind sweep = SweepKind::snr;
    std::vector<double> sweep_values{0.0};
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<MethodTag> methods{MethodTag::ppbss, MethodTag::optimal};
    std::filesystem::path output_dir = "beamlab_out";
    Index Q = 360;
    Index S = 12;
    double c_deg = 5.0;
    double fine_step_deg = 0.1;
    double soi_half_width_deg = 4.0;
    // Interferer count handed to the tracker; 0 selects the auto threshold.
    Index tracked_interferers = 2;
    double loading_factor = 10.0;
    // Held fixed in the beampattern sweeps (eta while rho varies, rho while eta varies).
    double fixed_eta = 1.0;
    double fixed_rho = 0.5;
    // crb sweep only: the interferer SNR is swept, the SOI stays here.
    double soi_snr_db = 0.0;
    // Requested workers, 0 for one per hardware thread. BEAMLAB_THREADS caps it.
    unsigned threads = 0;

    void validate() const;
    PpbssConfig ppbss_config() const;
    // Copy with the sweep variable applied to the scenario (snr, snapshots).
    ExperimentConfig at_sweep_value(double value) const;
};

std::vector<std::string> preset_names();
// Accepts descriptive names ("look_snr") and figure aliases ("fig5").
ExperimentConfig make_preset(std::string_view name);

// Applies `preset` first when present, then every other key. Unknown keys are config errors.
void apply_flat_config(ExperimentConfig &config, const FlatConfig &flat);
ExperimentConfig experiment_config_from(const FlatConfig &flat);

struct MethodOutcome
{
    MethodTag method = MethodTag::ppbss;
    std::optional<BeamformerResult> result;
    std::optional<ErrorCode> failure;
    std::string message;
};

struct TrialOutcome
{
    ScenarioTruth truth;
    std::vector<MethodOutcome> methods;
};

/// One Monte Carlo realization of config.scenario for every configured
/// method. Deterministic in (seed, trial_index); the same random streams are
/// used for every sweep value. Module errors mark the method as failed.
TrialOutcome run_trial(const ExperimentConfig &config, int trial_index);

struct TrialRecord
{
    std::uint64_t seed = 0;
    int trial = 0;
    MethodTag method = MethodTag::ppbss;
    double sweep_value = 0.0;
    // "ok" or the error code name.
    std::string status = "ok";
    double sinr_db = 0.0;
    double optimal_sinr_db = 0.0;
    double distortion = 0.0;
    double mu_hat = 0.0;
    double zeta_hat = 0.0;
    double eta_tilde = 0.0;
    double rho_tilde = 0.0;
    long long c_rank = 0;
    double kappa = 0.0;
    double kappa_evd = 0.0;
    int iterations = 0;
    std::vector<double> est_doas;

    bool ok() const { return status == "ok"; }
};

std::vector<TrialRecord> trial_records(const ExperimentConfig &config, int trial_index, double sweep_value,
                                       const TrialOutcome &outcome);

struct AggregateRow
{
    double sweep_value = 0.0;
    MethodTag method = MethodTag::ppbss;
    double mean_sinr_db = 0.0;
    int trials_used = 0;
    int excluded = 0;
};

// Means over successful rows, keyed by (sweep_value, method) in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord> &rows);

void write_trial_csv(const std::filesystem::path &path, const std::vector<TrialRecord> &rows);
std::vector<TrialRecord> read_trial_csv(const std::filesystem::path &path);
void write_aggregate_csv(const std::filesystem::path &path, const std::vector<AggregateRow> &rows);
// Recomputes the aggregate from the trial CSV and compares it with the stored
// one field by field. Throws io on any difference.
void verify_aggregate_csv(const std::filesystem::path &trials_csv, const std::filesystem::path &aggregate_csv);

struct NullDepthReport
{
    SweepKind kind = SweepKind::beampattern_rho;
    std::vector<double> values;
    std::vector<double> interferer_doas_deg;
    // The fixed parameter, and the shrinkage estimates of this realization for reference.
    double eta = 0.0;
    double rho = 0.0;
    double eta_tilde = 0.0;
    double rho_tilde = 0.0;
    // Rows follow `values`, columns follow `interferer_doas_deg`; dB relative to the pattern maximum.
    RMatrix exact_db;
    RMatrix approx_db;
    bool exact_monotone = false;
    bool approx_monotone = false;
};

/// Beampatterns of (eta I + rho C) for one realization: either rho swept with
/// eta = fixed_eta or eta swept with rho = fixed_rho. Null depths are read at
/// the realized interferer DoAs. Deeper nulls with rho and shallower with eta
/// count as monotone.
NullDepthReport beampattern_study(const ExperimentConfig &config, int trial_index,
                                  const std::filesystem::path *output_dir = nullptr);

struct CorrelationRecord
{
    double sweep_value = 0.0;
    int trial = 0;
    std::string status = "ok";
    double mean_column_correlation = 0.0;
    double min_column_correlation = 0.0;
};

// Pearson correlation of the true IPNC against the reconstruction, per trial.
// The heatmaps of trial 0 are written when output_dir is given.
std::vector<CorrelationRecord> correlation_study(const ExperimentConfig &config,
                                                 const std::filesystem::path *output_dir = nullptr);

struct SweepResult
{
    std::vector<TrialRecord> rows;
    std::vector<AggregateRow> aggregate;
    std::optional<NullDepthReport> null_depth;
    std::vector<CorrelationRecord> correlation;
    std::vector<std::filesystem::path> files;
};

// min(requested or hardware threads, BEAMLAB_THREADS), at least 1.
unsigned worker_count(unsigned requested);

/// Runs the configured sweep and writes its CSVs and a gnuplot script into
/// config.output_dir. The directory is checked before any computation.
SweepResult run_sweep(const ExperimentConfig &config);

// Monte Carlo part of an snr/snapshots sweep without file output.
std::vector<TrialRecord> run_monte_carlo(const ExperimentConfig &config, unsigned workers);

} // namespace beamlab
