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

#include "beamlab/beamforming.hpp"

#include "beamlab/covariance.hpp"
#include "beamlab/error.hpp"

#include <cmath>
#include <string>

namespace beamlab
{

std::string_view to_string(MethodTag tag)
{
    switch (tag)
    {
    case MethodTag::ppbss:
        return "ppbss";
    case MethodTag::optimal:
        return "optimal";
    case MethodTag::smi:
        return "smi";
    case MethodTag::diagonal_loading:
        return "diagonal_loading";
    }
    return "ppbss";
}

MethodTag method_from_string(std::string_view name)
{
    for (auto m : {MethodTag::ppbss, MethodTag::optimal, MethodTag::smi, MethodTag::diagonal_loading})
        if (to_string(m) == name)
            return m;
    if (name == "dl")
        return MethodTag::diagonal_loading;
    throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(name) + "'");
}

namespace
{

Eigen::LLT<CMatrix> checked_cholesky(const HermitianMatrix &r)
{
    Eigen::LLT<CMatrix> llt(r.matrix());
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::singular_matrix, "covariance is not positive definite");
    // Reject factors whose pivots collapse relative to the largest one.
    const RVector d = llt.matrixLLT().diagonal().real();
    if (!(d.minCoeff() > 1e-8 * d.maxCoeff()))
        throw Error(ErrorCode::singular_matrix, "covariance is numerically singular");
    return llt;
}

struct EigenBasis
{
    CMatrix vectors;
    RVector values;
};

EigenBasis significant_eigenpairs(const HermitianMatrix &c)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c.matrix());
    const RVector &ev = es.eigenvalues();
    const double top = ev.size() ? ev.maxCoeff() : 0.0;
    std::vector<Index> keep;
    for (Index r = 0; r < ev.size(); ++r)
        if (top > 0.0 && ev(r) > 1e-10 * top)
            keep.push_back(r);
    EigenBasis basis{CMatrix(c.dim(), static_cast<Index>(keep.size())), RVector(static_cast<Index>(keep.size()))};
    for (std::size_t i = 0; i < keep.size(); ++i)
    {
        basis.vectors.col(static_cast<Index>(i)) = es.eigenvectors().col(keep[i]);
        basis.values(static_cast<Index>(i)) = ev(keep[i]);
    }
    return basis;
}

} // namespace

CVector mvdr_weight(const HermitianMatrix &r, const CVector &a)
{
    if (a.size() != r.dim())
        throw Error(ErrorCode::dimension, "steering vector length differs from covariance dimension");
    if (!(a.norm() > 0.0))
        throw Error(ErrorCode::invalid_argument, "steering vector is zero");
    const auto llt = checked_cholesky(r);
    const CVector y = llt.solve(a);
    const double denom = a.dot(y).real();
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw Error(ErrorCode::singular_matrix, "a^H R^-1 a is not positive");
    return y / denom;
}

double output_sinr_db(const CVector &w, const ScenarioTruth &truth)
{
    if (w.size() != truth.element_count())
        throw Error(ErrorCode::dimension, "weight length differs from element count");
    if (!(w.norm() > 0.0))
        throw Error(ErrorCode::invalid_argument, "weight vector is zero");
    const HermitianMatrix ipn = theoretical_ipnc(truth);
    const double signal = truth.soi_power * std::norm(w.dot(truth.soi_sv));
    const double leak = w.dot(ipn.matrix() * w).real();
    return db10(signal / leak);
}

double optimal_sinr_db(const ScenarioTruth &truth)
{
    const HermitianMatrix ipn = theoretical_ipnc(truth);
    const auto llt = checked_cholesky(ipn);
    return db10(truth.soi_power * truth.soi_sv.dot(llt.solve(truth.soi_sv)).real());
}

std::vector<double> beampattern(const CVector &w, const std::vector<double> &grid_deg, const ArrayGeometry &geometry)
{
    if (grid_deg.empty())
        throw Error(ErrorCode::invalid_argument, "beampattern grid is empty");
    if (w.size() != geometry.element_count())
        throw Error(ErrorCode::dimension, "weight length differs from element count");
    std::vector<double> d(grid_deg.size());
    for (std::size_t i = 0; i < grid_deg.size(); ++i)
        d[i] = std::abs(w.dot(steering_vector(grid_deg[i], geometry)));
    return d;
}

ApproxBeampattern approx_beampattern(const HermitianMatrix &c, double eta, double rho, const CVector &soi_sv,
                                     const std::vector<double> &grid_deg, const ArrayGeometry &geometry)
{
    if (!(eta > 0.0) || !(rho >= 0.0))
        throw Error(ErrorCode::invalid_argument, "approximate beampattern needs eta > 0 and rho >= 0");
    if (grid_deg.empty())
        throw Error(ErrorCode::invalid_argument, "beampattern grid is empty");
    if (soi_sv.size() != c.dim() || c.dim() != geometry.element_count())
        throw Error(ErrorCode::dimension, "dimensions of C, a_s and the geometry differ");

    const EigenBasis basis = significant_eigenpairs(c);
    const CVector u = basis.vectors.adjoint() * soi_sv;
    CVector weights(u.size());
    for (Index r = 0; r < u.size(); ++r)
        weights(r) = u(r) / (eta + basis.values(r) * rho);
    const double scale = eta / soi_sv.squaredNorm();

    ApproxBeampattern out;
    out.values.resize(grid_deg.size());
    out.extrapolated.resize(grid_deg.size());
    for (std::size_t i = 0; i < grid_deg.size(); ++i)
    {
        const CVector a = steering_vector(grid_deg[i], geometry);
        // Orthonormal columns: the least-squares coefficients are E^H a.
        const CVector h = basis.vectors.adjoint() * a;
        const double residual = (a - basis.vectors * h).norm() / a.norm();
        out.extrapolated[i] = residual > 1e-2;
        out.values[i] = scale * std::abs(h.dot(weights));
    }
    return out;
}

CMatrix woodbury_inverse(const HermitianMatrix &c, double eta, double rho)
{
    if (!(eta > 0.0) || !(rho >= 0.0))
        throw Error(ErrorCode::invalid_argument, "Woodbury form needs eta > 0 and rho >= 0");
    const Index L = c.dim();
    CMatrix inv = CMatrix::Identity(L, L);
    if (rho > 0.0)
    {
        const EigenBasis basis = significant_eigenpairs(c);
        // (eta/rho Gamma^-1 + I)^-1 is diagonal: rho gamma / (eta + rho gamma).
        const RVector shrink =
            (rho * basis.values.array() / (eta + rho * basis.values.array())).matrix();
        inv.noalias() -= basis.vectors * shrink.asDiagonal() * basis.vectors.adjoint();
    }
    return inv / eta;
}

double BeamformerResult::distortion() const
{
    return std::abs(weights.dot(soi_sv_used) - cdouble(1.0, 0.0));
}

BeamformerResult ppbss_beamformer(const SnapshotSet &snapshots, const ArrayGeometry &geometry,
                                  const PpbssConfig &config)
{
    if (snapshots.element_count() != geometry.element_count())
        throw Error(ErrorCode::dimension, "snapshot length differs from element count");
    config.soi.validate();

    PpbssDiagnostics diag;
    diag.scm = sample_covariance(snapshots);

    TrackingConfig tracking = config.tracking;
    if (config.exclude_soi_sector)
    {
        tracking.dft.exclude_lo_deg = config.soi.center_deg - config.soi.half_width_deg;
        tracking.dft.exclude_hi_deg = config.soi.center_deg + config.soi.half_width_deg;
    }
    diag.tracking = track_interferers(snapshots, geometry, tracking);

    diag.preprocessing = preprocessing_matrix(diag.tracking.sectors, geometry);
    diag.c_rank = numerical_rank(diag.preprocessing);
    diag.stats = shrinkage_stats(snapshots, diag.scm, diag.preprocessing);
    diag.reconstructed_ipnc = reconstruct_ipnc(diag.preprocessing, diag.stats);
    if (reconstruction_is_singular(diag.preprocessing, diag.stats))
    {
        const Index L = geometry.element_count();
        diag.reconstruction_loading =
            1e-8 * std::max(diag.reconstructed_ipnc.trace(), diag.scm.trace()) / static_cast<double>(L);
        diag.reconstructed_ipnc =
            diag.reconstructed_ipnc + HermitianMatrix::identity(L, diag.reconstruction_loading);
    }

    diag.scm_loading = scm_loading(diag.scm, snapshots.snapshot_count());
    diag.soi_covariance = soi_covariance(diag.scm, config.soi, geometry, diag.scm_loading);
    const CVector b0 = steering_vector(config.soi.center_deg, geometry);
    diag.power = power_method(diag.soi_covariance, b0, config.power_tol, config.power_max_iterations);

    BeamformerResult res;
    res.method = MethodTag::ppbss;
    res.soi_sv_used = diag.power.eigenvector;
    res.weights = mvdr_weight(diag.reconstructed_ipnc, res.soi_sv_used);
    res.diagnostics = std::move(diag);
    return res;
}

BeamformerResult optimal_beamformer(const ScenarioTruth &truth)
{
    BeamformerResult res;
    res.method = MethodTag::optimal;
    res.soi_sv_used = truth.soi_sv;
    res.weights = mvdr_weight(theoretical_ipnc(truth), truth.soi_sv);
    return res;
}

BeamformerResult smi_beamformer(const HermitianMatrix &scm, const ArrayGeometry &geometry, double presumed_doa_deg)
{
    BeamformerResult res;
    res.method = MethodTag::smi;
    res.soi_sv_used = steering_vector(presumed_doa_deg, geometry);
    res.weights = mvdr_weight(scm, res.soi_sv_used);
    return res;
}

BeamformerResult diagonal_loading_beamformer(const HermitianMatrix &scm, const ArrayGeometry &geometry,
                                             double presumed_doa_deg, double noise_power, double loading_factor)
{
    BeamformerResult res;
    res.method = MethodTag::diagonal_loading;
    res.soi_sv_used = steering_vector(presumed_doa_deg, geometry);
    const HermitianMatrix loaded = scm + HermitianMatrix::identity(scm.dim(), loading_factor * noise_power);
    res.weights = mvdr_weight(loaded, res.soi_sv_used);
    return res;
}

} // namespace beamlab
