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

#include "beamlab/ppbss.hpp"

#include "beamlab/error.hpp"

#include <algorithm>

namespace beamlab
{

HermitianMatrix preprocessing_matrix(const SectorSpec &sectors, const ArrayGeometry &geometry)
{
    if (sectors.sectors.empty())
        throw Error(ErrorCode::invalid_sectors, "preprocessing matrix needs at least one sector");
    if (sectors.grid_size < 1)
        throw Error(ErrorCode::invalid_sectors, "angular grid is empty");
    const Index L = geometry.element_count();
    if (L < 1)
        throw Error(ErrorCode::invalid_geometry, "array geometry has no elements");

    CMatrix c = CMatrix::Zero(L, L);
    for (const auto &s : sectors.sectors)
    {
        if (s.width_bins < 1 || s.width_bins > sectors.grid_size)
            throw Error(ErrorCode::invalid_sectors, "sector width must lie in [1, Q]");
        for (Index l = s.start_index; l < s.start_index + s.width_bins; ++l)
        {
            const CVector a = steering_vector(sectors.grid_angle_deg(l), geometry);
            c.noalias() += a * a.adjoint();
        }
    }
    return HermitianMatrix(c);
}

double zeta_estimate(const SnapshotSet &snapshots, const HermitianMatrix &scm)
{
    if (scm.dim() != snapshots.element_count())
        throw Error(ErrorCode::dimension, "sample covariance and snapshots differ in dimension");
    const double K = static_cast<double>(snapshots.snapshot_count());
    double fourth = 0.0;
    for (Index t = 0; t < snapshots.snapshot_count(); ++t)
    {
        const double n2 = snapshots.snapshot(t).squaredNorm();
        fourth += n2 * n2;
    }
    if (snapshots.snapshot_count() == 1)
        return 0.0; // ||x x^H||^2 == ||x||^4; avoid reporting the rounding residue
    return fourth / (K * K) - scm.frobenius_norm_sq() / K;
}

ShrinkageStats shrinkage_stats(const SnapshotSet &snapshots, const HermitianMatrix &scm, const HermitianMatrix &c)
{
    if (c.dim() != scm.dim())
        throw Error(ErrorCode::dimension, "preprocessing matrix and sample covariance differ in dimension");
    const Index L = scm.dim();

    ShrinkageStats st;
    st.mu_hat = scm.trace() / static_cast<double>(L);
    st.zeta_hat = zeta_estimate(snapshots, scm);

    // ||C - mu I||^2 = ||C||^2 - 2 mu Tr(C) + L mu^2
    const CMatrix diff = c.matrix() - CMatrix::Identity(L, L) * st.mu_hat;
    st.target_distance = diff.squaredNorm();
    if (st.target_distance < 1e-14 * static_cast<double>(L) * st.mu_hat * st.mu_hat || st.target_distance == 0.0)
        throw Error(ErrorCode::degenerate_shrinkage, "preprocessing matrix is indistinguishable from a scaled identity");

    const double ratio = st.zeta_hat / st.target_distance;
    st.eta_hat = ratio * st.mu_hat;
    st.rho_hat = 1.0 - ratio;
    // The clamp also absorbs the tiny negative zeta_hat that rounding can produce.
    st.eta_tilde = std::clamp(st.eta_hat, 0.0, st.mu_hat);
    st.rho_tilde = st.mu_hat > 0.0 ? 1.0 - st.eta_tilde / st.mu_hat : 0.0;
    st.rho_tilde = std::clamp(st.rho_tilde, 0.0, 1.0);
    return st;
}

HermitianMatrix reconstruct_ipnc(const HermitianMatrix &c, const ShrinkageStats &stats)
{
    return HermitianMatrix(CMatrix::Identity(c.dim(), c.dim()) * stats.eta_tilde + c.matrix() * stats.rho_tilde);
}

bool reconstruction_is_singular(const HermitianMatrix &c, const ShrinkageStats &stats)
{
    if (stats.eta_tilde > 0.0)
        return false;
    return stats.rho_tilde == 0.0 || numerical_rank(c) < c.dim();
}

ShrinkageOptimum closed_form_shrinkage(const HermitianMatrix &target, double zeta)
{
    const double L = static_cast<double>(target.dim());
    const double tr = target.trace();
    ShrinkageOptimum opt;
    opt.beta = target.frobenius_norm_sq() - tr * tr / L;
    if (!(opt.beta + zeta > 0.0))
        throw Error(ErrorCode::degenerate_shrinkage, "beta + zeta must be positive");
    opt.rho = opt.beta / (opt.beta + zeta);
    opt.eta = (1.0 - opt.rho) * tr / L;
    return opt;
}

double shrinkage_mse(double eta, double rho, const HermitianMatrix &target, double zeta)
{
    const double L = static_cast<double>(target.dim());
    const double tr = target.trace();
    return eta * eta * L - 2.0 * eta * (1.0 - rho) * tr + (1.0 - rho) * (1.0 - rho) * target.frobenius_norm_sq() +
           rho * rho * zeta;
}

} // namespace beamlab
