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

namespace beamlab
{

/// Preprocessing matrix C = sum_p sum_{l = g_p}^{g_p + B_p - 1} a(psi_l) a(psi_l)^H.
///
/// Grid indices are reduced modulo Q. Each unit-norm term adds 1 to the
/// trace, so trace(C) equals the total number of bins.
HermitianMatrix preprocessing_matrix(const SectorSpec &sectors, const ArrayGeometry &geometry);

/// Data-driven shrinkage coefficients for eta I + rho C.
struct ShrinkageStats
{
    double mu_hat = 0.0;    // Tr(R_hat) / L
    double zeta_hat = 0.0;  // (1/K^2) sum ||x||^4 - (1/K) ||R_hat||^2
    double eta_hat = 0.0;   // zeta_hat / ||C - mu_hat I||^2 * mu_hat
    double rho_hat = 0.0;   // 1 - zeta_hat / ||C - mu_hat I||^2
    double eta_tilde = 0.0; // min(eta_hat, mu_hat)
    double rho_tilde = 0.0; // 1 - eta_tilde / mu_hat
    double target_distance = 0.0; // ||C - mu_hat I||^2
};

// zeta_hat on its own; K = 1 gives exactly 0.
double zeta_estimate(const SnapshotSet &snapshots, const HermitianMatrix &scm);

ShrinkageStats shrinkage_stats(const SnapshotSet &snapshots, const HermitianMatrix &scm, const HermitianMatrix &c);

// eta_tilde I + rho_tilde C. Only positive semidefinite when eta_tilde == 0
// and C is singular; see reconstruction_is_singular().
HermitianMatrix reconstruct_ipnc(const HermitianMatrix &c, const ShrinkageStats &stats);

bool reconstruction_is_singular(const HermitianMatrix &c, const ShrinkageStats &stats);

/// Shrinkage toward a known target, used to check the closed forms.
///
/// With beta = ||R||^2 - Tr^2(R)/L and zeta = E||C - R||^2 the minimizer of
/// eta^2 L - 2 eta (1 - rho) Tr(R) + (1 - rho)^2 ||R||^2 + rho^2 zeta
/// is rho0 = beta / (beta + zeta), eta0 = (1 - rho0) Tr(R) / L.
struct ShrinkageOptimum
{
    double eta = 0.0;
    double rho = 0.0;
    double beta = 0.0;
};

ShrinkageOptimum closed_form_shrinkage(const HermitianMatrix &target, double zeta);

// The expanded MSE above (cross term dropped).
double shrinkage_mse(double eta, double rho, const HermitianMatrix &target, double zeta);

} // namespace beamlab
