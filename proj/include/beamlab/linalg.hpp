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

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace beamlab
{

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline double db10(double linear) { return 10.0 * std::log10(linear); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

/// Square complex matrix that is Hermitian by construction.
///
/// Every constructor symmetrizes its input as (M + M^H) / 2, so the stored
/// entries satisfy entry(i,j) == conj(entry(j,i)) exactly and the diagonal is
/// real. Used for R, R_hat, C, the reconstructed IPNC and the SOI covariance.
class HermitianMatrix
{
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix &m);

    static HermitianMatrix identity(Index dim, double scale = 1.0);
    static HermitianMatrix zero(Index dim);

    Index dim() const noexcept { return m_.rows(); }
    const CMatrix &matrix() const noexcept { return m_; }
    cdouble operator()(Index i, Index j) const { return m_(i, j); }

    double trace() const { return m_.diagonal().real().sum(); }
    double frobenius_norm_sq() const { return m_.squaredNorm(); }

    // Ascending real eigenvalues.
    RVector eigenvalues() const;

    HermitianMatrix operator+(const HermitianMatrix &o) const;
    HermitianMatrix operator-(const HermitianMatrix &o) const;
    HermitianMatrix operator*(double s) const;

private:
    CMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix &m) { return m * s; }

// max |M - M^H| over all entries.
double hermitian_defect(const CMatrix &m);

// Numerically positive semidefinite: smallest eigenvalue >= -tol * max(trace, 1e-300).
bool is_numerically_psd(const HermitianMatrix &m, double tol = 1e-10);

// Deterministic rank estimate: eigenvalues above rel_tol * largest magnitude.
Index numerical_rank(const HermitianMatrix &m, double rel_tol = 1e-10);

} // namespace beamlab
