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

#include "beamlab/covariance.hpp"

#include "beamlab/error.hpp"

#include <algorithm>

namespace beamlab
{

HermitianMatrix sample_covariance(const SnapshotSet &snapshots)
{
    const CMatrix &x = snapshots.data();
    CMatrix r = CMatrix::Zero(x.rows(), x.rows());
    r.selfadjointView<Eigen::Lower>().rankUpdate(x);
    r = r.selfadjointView<Eigen::Lower>();
    return HermitianMatrix(r / static_cast<double>(x.cols()));
}

HermitianMatrix theoretical_ipnc(const ScenarioTruth &truth)
{
    truth.validate();
    const Index L = truth.element_count();
    CMatrix r = CMatrix::Identity(L, L) * truth.noise_power;
    for (std::size_t p = 0; p < truth.interferer_svs.size(); ++p)
    {
        const CVector &a = truth.interferer_svs[p];
        r.noalias() += truth.interferer_powers[p] * (a * a.adjoint());
    }
    return HermitianMatrix(r);
}

HermitianMatrix theoretical_covariance(const ScenarioTruth &truth)
{
    const HermitianMatrix ipn = theoretical_ipnc(truth);
    const CVector &a = truth.soi_sv;
    return HermitianMatrix(ipn.matrix() + truth.soi_power * (a * a.adjoint()));
}

namespace
{

RMatrix stack_columns(const CMatrix &m)
{
    RMatrix s(2 * m.rows(), m.cols());
    s.topRows(m.rows()) = m.real();
    s.bottomRows(m.rows()) = m.imag();
    return s;
}

} // namespace

RMatrix pearson_correlation(const CMatrix &a, const CMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::dimension, "correlation inputs differ in size");
    if (a.rows() < 1 || a.cols() < 1)
        throw Error(ErrorCode::dimension, "correlation inputs are empty");

    RMatrix x = stack_columns(a);
    RMatrix y = stack_columns(b);
    x.rowwise() -= x.colwise().mean();
    y.rowwise() -= y.colwise().mean();

    RVector vx(x.cols()), vy(y.cols());
    for (Index i = 0; i < x.cols(); ++i)
    {
        vx(i) = x.col(i).dot(x.col(i));
        vy(i) = y.col(i).dot(y.col(i));
    }
    for (Index i = 0; i < vx.size(); ++i)
        if (!(vx(i) > 0.0) || !(vy(i) > 0.0))
            throw Error(ErrorCode::undefined_correlation,
                        "column " + std::to_string(i) + " has zero variance");

    // The 1/(n-1) factors cancel. sqrt(v * v) == v in IEEE arithmetic, so a
    // column correlated with itself gives exactly 1.
    RMatrix c(x.cols(), y.cols());
    for (Index i = 0; i < c.rows(); ++i)
        for (Index j = 0; j < c.cols(); ++j)
            c(i, j) = std::clamp(x.col(i).dot(y.col(j)) / std::sqrt(vx(i) * vy(j)), -1.0, 1.0);
    return c;
}

} // namespace beamlab
