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

#include <optional>
#include <vector>

namespace beamlab
{

struct DftPeakConfig
{
    Index fft_size = 4096;
    // Auto peak counting: peaks at least this far above the median magnitude.
    double auto_threshold_db = 10.0;
    // Peaks whose angle falls inside [exclude_lo_deg, exclude_hi_deg] are ignored
    // (the SOI sector). Disabled when lo > hi.
    double exclude_lo_deg = 1.0;
    double exclude_hi_deg = -1.0;
};

/// Coarse DoAs from the zero-padded DFT of one snapshot.
///
/// Spatial frequency f (cycles per element, half-wavelength spacing) maps to
/// theta = asin(f / 0.5). Peaks are local maxima of |X(f)|, selected
/// greedily by magnitude with a minimum separation of one null-to-null
/// beamwidth (2/L in sin(theta), i.e. 1/L cycles). With `count` set exactly that many peaks are returned (strongest
/// first), otherwise the auto threshold decides. Throws
/// InsufficientPeaksError when fewer than `count` peaks exist.
std::vector<double> coarse_doas_dft(const CVector &snapshot, std::optional<std::size_t> count,
                                    const DftPeakConfig &config = {});

// argmax over theta in [coarse - c, coarse + c] (grid `step`) of |x^H a(theta)|.
// Ties go to the grid point nearest the coarse estimate.
double fine_doa(const CVector &snapshot, const ArrayGeometry &geometry, double coarse_deg, double half_width_deg,
                double step_deg);

/// Per-snapshot DoA estimates of one interferer and their quadratic fit.
struct DoaTrack
{
    std::vector<double> estimates_deg;
    // theta_pol(t) = c0 + c1 tau + c2 tau^2 with tau = (t - center) / scale, t = 1..K.
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double center = 0.0, scale = 1.0;
    std::vector<double> fitted_deg;
    double range_deg = 0.0;

    double value_at(double t) const;
    double min_fitted() const;
    double max_fitted() const;
    double sector_center_deg() const { return 0.5 * (min_fitted() + max_fitted()); }
    double mean_estimate() const;
};

// Least-squares quadratic in t over t = 1..K; range_deg is max - min of the fit.
DoaTrack fit_trajectory(const std::vector<double> &estimates_deg);

struct SectorEntry
{
    double center_deg = 0.0; // theta_pc mapped into [0, 360)
    Index width_bins = 1;    // B
    Index center_index = 0;  // N_pc
    Index start_index = 1;   // g, 1-based, may lie outside [1, Q] before wrapping
};

/// Interference sectors on the Q-point grid psi_l = (2 pi / Q)(l - 1), l = 1..Q.
struct SectorSpec
{
    Index grid_size = 360;
    std::vector<SectorEntry> sectors;

    double bin_width_deg() const { return 360.0 / static_cast<double>(grid_size); }
    // Grid index reduced into [1, Q].
    Index wrap(Index l) const;
    double grid_angle_deg(Index l) const { return bin_width_deg() * static_cast<double>(wrap(l) - 1); }
    // Grid angles of every bin in every sector, sector by sector.
    std::vector<double> sample_angles_deg() const;
};

SectorEntry sector_indices(const DoaTrack &track, Index grid_size);

struct TrackingConfig
{
    std::optional<std::size_t> interferer_count = 2;
    double half_width_deg = 5.0;
    double step_deg = 0.1;
    Index grid_size = 360;
    DftPeakConfig dft;
};

struct TrackingResult
{
    std::vector<double> coarse_deg;
    std::vector<DoaTrack> tracks;
    SectorSpec sectors;
};

/// Full interferer tracking: DFT coarse search on the first snapshot, fine
/// scan of every snapshot around each coarse DoA, quadratic fit and sector
/// computation. Deterministic in the snapshots.
TrackingResult track_interferers(const SnapshotSet &snapshots, const ArrayGeometry &geometry,
                                 const TrackingConfig &config);

} // namespace beamlab
