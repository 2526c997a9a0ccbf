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
#include "beamlab/ppbss.hpp"
#include "beamlab/signal_model.hpp"
#include "beamlab/soi_estimation.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace beamlab
{

enum class MethodTag
{
    ppbss,
    optimal,
    smi,
    diagonal_loading
};

std::string_view to_string(MethodTag tag);
MethodTag method_from_string(std::string_view name);

// w = R^-1 a / (a^H R^-1 a) via a Cholesky solve. Throws singular_matrix when
// R is not numerically positive definite.
CVector mvdr_weight(const HermitianMatrix &r, const CVector &a);

// sigma_s^2 |w^H a_s|^2 / (w^H R_{i+n} w) in dB, using the realized truth.
double output_sinr_db(const CVector &w, const ScenarioTruth &truth);

// Closed-form maximum of output_sinr_db: sigma_s^2 a_s^H R_{i+n}^-1 a_s.
double optimal_sinr_db(const ScenarioTruth &truth);

// D(theta) = |w^H a(theta)|.
std::vector<double> beampattern(const CVector &w, const std::vector<double> &grid_deg, const ArrayGeometry &geometry);

struct ApproxBeampattern
{
    std::vector<double> values;
    // Set where a(theta) has a relative residual above 1e-2 outside span(E).
    std::vector<bool> extrapolated;
};

/// Eigen-domain approximation of the pattern of the weight built from
/// eta I + rho C:
///   D(theta) = eta / ||a_s||^2 * | sum_r conj(h_r(theta)) u_r / (eta + gamma_r rho) |
/// where (gamma_r, e_r) are the eigenpairs of C with gamma_r > 1e-10 gamma_max,
/// u = E^H a_s and h(theta) is the least-squares solution of E h = a(theta).
ApproxBeampattern approx_beampattern(const HermitianMatrix &c, double eta, double rho, const CVector &soi_sv,
                                     const std::vector<double> &grid_deg, const ArrayGeometry &geometry);

// (eta I + rho C)^-1 through the eigen form (1/eta)[I - E (eta/rho Gamma^-1 + I)^-1 E^H].
CMatrix woodbury_inverse(const HermitianMatrix &c, double eta, double rho);

struct PpbssConfig
{
    TrackingConfig tracking;
    SoiSector soi;
    double power_tol = 1e-3;
    int power_max_iterations = 50;
    // Exclude the SOI sector from the interferer search.
    bool exclude_soi_sector = true;
};

struct PpbssDiagnostics
{
    TrackingResult tracking;
    ShrinkageStats stats;
    PowerMethodResult power;
    Index c_rank = 0;
    double scm_loading = 0.0;
    // Loading added when the reconstruction is only semidefinite.
    double reconstruction_loading = 0.0;
    HermitianMatrix scm;
    HermitianMatrix preprocessing;
    HermitianMatrix reconstructed_ipnc;
    HermitianMatrix soi_covariance;
};

struct BeamformerResult
{
    MethodTag method = MethodTag::ppbss;
    CVector weights;
    CVector soi_sv_used;
    double output_sinr_db = 0.0;
    std::optional<PpbssDiagnostics> diagnostics;

    // |w^H a - 1|
    double distortion() const;
};

/// Full pipeline on one batch of snapshots: track interferers, build C,
/// shrink toward the identity, estimate the SOI steering vector with the
/// power method on the maximum-entropy SOI covariance, and form the MVDR
/// weight. output_sinr_db is left at 0 until evaluated against a truth.
BeamformerResult ppbss_beamformer(const SnapshotSet &snapshots, const ArrayGeometry &geometry,
                                  const PpbssConfig &config = {});

// True R_{i+n} with the realized SOI steering vector.
BeamformerResult optimal_beamformer(const ScenarioTruth &truth);

// Sample covariance with the presumed steering vector.
BeamformerResult smi_beamformer(const HermitianMatrix &scm, const ArrayGeometry &geometry, double presumed_doa_deg);

// Sample covariance + loading_factor * sigma_n^2 I with the presumed steering vector.
BeamformerResult diagonal_loading_beamformer(const HermitianMatrix &scm, const ArrayGeometry &geometry,
                                             double presumed_doa_deg, double noise_power,
                                             double loading_factor = 10.0);

} // namespace beamlab
