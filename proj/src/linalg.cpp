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

#include "beamlab/linalg.hpp"

#include "beamlab/error.hpp"

#include <algorithm>

namespace beamlab
{

HermitianMatrix::HermitianMatrix(const CMatrix &m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::dimension, "Hermitian matrix must be square");
    m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(Index dim, double scale)
{
    return HermitianMatrix(CMatrix::Identity(dim, dim) * scale);
}

HermitianMatrix HermitianMatrix::zero(Index dim)
{
    return HermitianMatrix(CMatrix::Zero(dim, dim));
}

RVector HermitianMatrix::eigenvalues() const
{
    if (m_.size() == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix &o) const
{
    if (dim() != o.dim())
        throw Error(ErrorCode::dimension, "Hermitian matrix dimensions differ");
    return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix &o) const
{
    if (dim() != o.dim())
        throw Error(ErrorCode::dimension, "Hermitian matrix dimensions differ");
    return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const
{
    return HermitianMatrix(m_ * s);
}

double hermitian_defect(const CMatrix &m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::dimension, "matrix must be square");
    if (m.size() == 0)
        return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_numerically_psd(const HermitianMatrix &m, double tol)
{
    if (m.dim() == 0)
        return true;
    const double scale = std::max(std::abs(m.trace()), 1e-300);
    return m.eigenvalues()(0) >= -tol * scale;
}

Index numerical_rank(const HermitianMatrix &m, double rel_tol)
{
    if (m.dim() == 0)
        return 0;
    const RVector ev = m.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (top == 0.0)
        return 0;
    return static_cast<Index>((ev.array().abs() > rel_tol * top).count());
}

} // namespace beamlab
