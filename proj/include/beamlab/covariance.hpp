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

namespace beamlab
{

// (1/K) sum_t x(t) x(t)^H.
HermitianMatrix sample_covariance(const SnapshotSet &snapshots);

// sigma_s^2 a_s a_s^H + sum_p sigma_p^2 a_p a_p^H + sigma_n^2 I with the
// realized (mismatched) steering vectors of the truth.
HermitianMatrix theoretical_covariance(const ScenarioTruth &truth);

// Interference-plus-noise part of theoretical_covariance().
HermitianMatrix theoretical_ipnc(const ScenarioTruth &truth);

/// Column-pairwise Pearson correlation between two equally sized matrices.
///
/// Each complex column is stacked as [Re; Im] into a real vector of length 2L
/// before the sample correlation is taken, so entry (i, j) is
/// corr(A(:, i), B(:, j)) over 2L real samples. Throws undefined_correlation
/// when any column has zero variance.
RMatrix pearson_correlation(const CMatrix &a, const CMatrix &b);

inline RMatrix pearson_correlation(const HermitianMatrix &a, const HermitianMatrix &b)
{
    return pearson_correlation(a.matrix(), b.matrix());
}

} // namespace beamlab
