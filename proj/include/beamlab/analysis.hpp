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

#include "beamlab/doa_tracking.hpp"
#include "beamlab/linalg.hpp"
#include "beamlab/signal_model.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace beamlab
{

struct CrbReport
{
    // SOI first, then interferers in scenario order. Degrees squared.
    std::vector<double> crb_deg2;
    double snr_db = 0.0;
    Index snapshots = 0;
    // Full bound in radians squared.
    RMatrix bound_rad2;
};

// (1/K) S S^H of the source waveforms, (P+1) x (P+1).
CMatrix source_sample_covariance(const CMatrix &waveforms);

// Diagonal source covariance built from the scenario powers.
CMatrix source_theoretical_covariance(const ScenarioTruth &truth);

/// Conditional bound
///   CRB = sigma_n^2 / (2K) * { Re[ H o P^T ] }^-1,
///   H = Adot^H (I - A (A^H A)^-1 A^H) Adot,
/// with A = [a(theta_s), a(theta_1), ..., a(theta_P)] at the realized DoAs and
/// P the source covariance. Throws rank_deficient when A or the bound's
/// information matrix loses rank (e.g. repeated DoAs).
CrbReport crb_doa(const ScenarioTruth &truth, const CMatrix &source_covariance);

struct DoaMseConfig
{
    ScenarioSpec scenario;
    std::vector<double> snr_db_values;
    // SNR of the SOI, held fixed while the interferer SNR is swept.
    double soi_snr_db = 0.0;
    int trials = 100;
    std::uint64_t seed = 1;
    TrackingConfig tracking;
    // Excluded from the coarse interferer search.
    double soi_half_width_deg = 4.0;
};

struct DoaMsePoint
{
    double snr_db = 0.0;
    double mse_deg2 = 0.0;
    // Half-width of the 95% confidence interval of mse_deg2.
    double mse_ci95_deg2 = 0.0;
    // Interferer-averaged bound, averaged over trials. Sample and theoretical variants.
    double crb_deg2 = 0.0;
    double crb_theoretical_deg2 = 0.0;
    int trials_used = 0;
    int failures = 0;
};

/// Monte Carlo MSE of the interferer DoA estimates (mean of the per-snapshot
/// fine scans) against the realized DoAs. Requires trials >= 10.
std::vector<DoaMsePoint> doa_mse_experiment(const DoaMseConfig &config);

void write_crb_csv(const std::filesystem::path &path, const std::vector<DoaMsePoint> &points);

} // namespace beamlab
