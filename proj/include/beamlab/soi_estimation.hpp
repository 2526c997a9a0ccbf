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

#include "beamlab/linalg.hpp"
#include "beamlab/signal_model.hpp"

#include <vector>

namespace beamlab
{

/// Angular sector presumed to contain the SOI, sampled uniformly with S points.
struct SoiSector
{
    double center_deg = 0.0;
    double half_width_deg = 4.0;
    Index samples = 12;

    double spacing_deg() const;
    std::vector<double> sample_angles_deg() const;
    void validate() const;
};

/// Maximum-entropy spatial spectrum sigma^2(theta) = 1 / (alpha |a^H R^-1 d1|^2)
/// with alpha = 1 / (d1^T R^-1 d1).
///
/// Only the first column of R^-1 is needed; it is obtained from a Cholesky
/// solve against e_1, with optional diagonal loading added beforehand.
class MaxEntropySpectrum
{
public:
    explicit MaxEntropySpectrum(const HermitianMatrix &scm, double loading = 0.0);

    double operator()(double theta_deg, const ArrayGeometry &geometry) const;
    const CVector &inverse_first_column() const noexcept { return r1_; }

private:
    CVector r1_;
};

// sigma^2(theta) from a precomputed first column of the inverse SCM.
double max_entropy_spectrum(const CVector &inverse_first_column, double theta_deg, const ArrayGeometry &geometry);

// Loading that keeps a rank-deficient SCM invertible: 1e-6 * Tr(R)/L when K < L.
double scm_loading(const HermitianMatrix &scm, Index snapshot_count);

// R_s = sum_s sigma^2(theta_s) a(theta_s) a(theta_s)^H * dtheta_s, dtheta in radians.
HermitianMatrix soi_covariance(const HermitianMatrix &scm, const SoiSector &sector, const ArrayGeometry &geometry,
                               double loading = 0.0);

// Same sum with explicit spectrum weights; S = 1 is permitted here.
HermitianMatrix soi_covariance_from_samples(const std::vector<double> &angles_deg, const std::vector<double> &powers,
                                            double spacing_rad, const ArrayGeometry &geometry);

struct PowerMethodResult
{
    double eigenvalue = 0.0; // kappa = b^H R_s b
    CVector eigenvector;     // unit norm
    int iterations = 0;
    double final_err = 1.0;
    bool converged = false;
    bool restarted = false;
    std::vector<double> err_history;
    // kappa evaluated after every iteration, for convergence studies
    std::vector<double> eigenvalue_history;
};

/// Dominant eigenpair by power iteration.
///
/// v_j = R b_{j-1}, b_j = v_j / ||v_j||, err = sqrt(1 - |b_j^H b_{j-1}|^2),
/// stopping once err < tol or after max_iterations. If R b0 = 0 the start is
/// perturbed once deterministically; a second null product throws null_start.
PowerMethodResult power_method(const HermitianMatrix &r, const CVector &b0, double tol = 1e-3,
                               int max_iterations = 50);

} // namespace beamlab
