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

#include "beamlab/soi_estimation.hpp"

#include "beamlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace beamlab
{

double SoiSector::spacing_deg() const
{
    return samples > 1 ? 2.0 * half_width_deg / static_cast<double>(samples - 1) : 0.0;
}

std::vector<double> SoiSector::sample_angles_deg() const
{
    validate();
    std::vector<double> out(static_cast<std::size_t>(samples));
    const double step = spacing_deg();
    for (Index s = 0; s < samples; ++s)
        out[static_cast<std::size_t>(s)] = center_deg - half_width_deg + step * static_cast<double>(s);
    return out;
}

void SoiSector::validate() const
{
    if (samples < 2)
        throw Error(ErrorCode::invalid_argument, "SOI sector needs S >= 2 samples");
    if (!(half_width_deg > 0.0))
        throw Error(ErrorCode::invalid_argument, "SOI sector half width must be positive");
}

MaxEntropySpectrum::MaxEntropySpectrum(const HermitianMatrix &scm, double loading)
{
    const Index L = scm.dim();
    if (L < 1)
        throw Error(ErrorCode::dimension, "empty covariance");
    const CMatrix r = scm.matrix() + CMatrix::Identity(L, L) * loading;
    Eigen::LLT<CMatrix> llt(r);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::singular_matrix, "sample covariance is not positive definite");
    r1_ = llt.solve(CVector::Unit(L, 0));
    if (!r1_.allFinite() || !(r1_(0).real() > 0.0))
        throw Error(ErrorCode::singular_matrix, "sample covariance is numerically singular");
}

double MaxEntropySpectrum::operator()(double theta_deg, const ArrayGeometry &geometry) const
{
    return max_entropy_spectrum(r1_, theta_deg, geometry);
}

double max_entropy_spectrum(const CVector &inverse_first_column, double theta_deg, const ArrayGeometry &geometry)
{
    if (inverse_first_column.size() != geometry.element_count())
        throw Error(ErrorCode::dimension, "inverse column length differs from element count");
    const CVector a = steering_vector(theta_deg, geometry);
    // 1 / alpha = d1^T R^-1 d1
    const double inv_alpha = inverse_first_column(0).real();
    const double denom = std::norm(a.dot(inverse_first_column));
    if (!(denom > 0.0))
        throw Error(ErrorCode::singular_matrix, "maximum-entropy spectrum is unbounded at this angle");
    return inv_alpha / denom;
}

double scm_loading(const HermitianMatrix &scm, Index snapshot_count)
{
    if (snapshot_count >= scm.dim())
        return 0.0;
    return 1e-6 * scm.trace() / static_cast<double>(scm.dim());
}

HermitianMatrix soi_covariance_from_samples(const std::vector<double> &angles_deg, const std::vector<double> &powers,
                                            double spacing_rad, const ArrayGeometry &geometry)
{
    if (angles_deg.size() != powers.size() || angles_deg.empty())
        throw Error(ErrorCode::dimension, "SOI samples and powers differ in length");
    const Index L = geometry.element_count();
    CMatrix rs = CMatrix::Zero(L, L);
    for (std::size_t s = 0; s < angles_deg.size(); ++s)
    {
        const CVector a = steering_vector(angles_deg[s], geometry);
        rs.noalias() += (powers[s] * spacing_rad) * (a * a.adjoint());
    }
    return HermitianMatrix(rs);
}

HermitianMatrix soi_covariance(const HermitianMatrix &scm, const SoiSector &sector, const ArrayGeometry &geometry,
                               double loading)
{
    sector.validate();
    if (scm.dim() != geometry.element_count())
        throw Error(ErrorCode::dimension, "covariance dimension differs from element count");
    const MaxEntropySpectrum spectrum(scm, loading);
    const std::vector<double> angles = sector.sample_angles_deg();
    std::vector<double> powers(angles.size());
    for (std::size_t s = 0; s < angles.size(); ++s)
        powers[s] = spectrum(angles[s], geometry);
    return soi_covariance_from_samples(angles, powers, deg_to_rad(sector.spacing_deg()), geometry);
}

PowerMethodResult power_method(const HermitianMatrix &r, const CVector &b0, double tol, int max_iterations)
{
    if (b0.size() != r.dim())
        throw Error(ErrorCode::dimension, "start vector length differs from matrix dimension");
    if (!(tol > 0.0) || max_iterations < 1)
        throw Error(ErrorCode::invalid_argument, "power method needs tol > 0 and at least one iteration");
    const double b0_norm = b0.norm();
    if (!(b0_norm > 0.0))
        throw Error(ErrorCode::invalid_argument, "power method start vector is zero");

    PowerMethodResult out;
    const CMatrix &m = r.matrix();
    CVector prev = b0 / b0_norm;
    CVector v = m * prev;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    if (!(v.norm() > 1e-14 * scale))
    {
        // Deterministic nudge out of the null space: unit-modulus spiral.
        CVector nudge(prev.size());
        for (Index l = 0; l < nudge.size(); ++l)
            nudge(l) = std::polar(1.0, 2.399963229728653 * static_cast<double>(l + 1));
        prev = (prev + nudge.normalized()).normalized();
        v = m * prev;
        out.restarted = true;
        if (!(v.norm() > 1e-14 * scale))
            throw Error(ErrorCode::null_start, "start vector lies in the null space of the matrix");
    }

    CVector b = prev;
    for (int j = 1; j <= max_iterations; ++j)
    {
        if (j > 1)
            v = m * prev;
        const double vn = v.norm();
        if (!(vn > 0.0))
            throw Error(ErrorCode::null_start, "power iterate collapsed to zero");
        b = v / vn;
        const double overlap = std::abs(b.dot(prev));
        out.final_err = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
        out.iterations = j;
        out.err_history.push_back(out.final_err);
        out.eigenvalue_history.push_back(b.dot(m * b).real());
        if (out.final_err < tol)
        {
            out.converged = true;
            break;
        }
        prev = b;
    }
    out.eigenvector = b;
    out.eigenvalue = out.eigenvalue_history.back();
    return out;
}

} // namespace beamlab
