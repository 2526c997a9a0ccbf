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

#include "beamlab/doa_tracking.hpp"

#include "beamlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beamlab
{

namespace
{

// Rounding guard for ceil() on quantities that are integral in exact arithmetic.
constexpr double ceil_guard = 1e-9;

double fold_angle_deg(double theta_deg)
{
    // Physical direction seen by a linear array: asin(sin(theta)).
    return rad_to_deg(std::asin(std::clamp(std::sin(deg_to_rad(theta_deg)), -1.0, 1.0)));
}

bool in_excluded(double theta_deg, const DftPeakConfig &cfg)
{
    return cfg.exclude_lo_deg <= cfg.exclude_hi_deg && theta_deg >= cfg.exclude_lo_deg &&
           theta_deg <= cfg.exclude_hi_deg;
}

double scan_response(const CVector &x, const std::vector<double> &positions, double theta_deg)
{
    const double s = std::sin(deg_to_rad(theta_deg));
    cdouble acc(0.0, 0.0);
    for (Index l = 0; l < x.size(); ++l)
        acc += std::conj(x(l)) * std::polar(1.0, -2.0 * std::numbers::pi * positions[static_cast<std::size_t>(l)] * s);
    return std::abs(acc);
}

} // namespace

std::vector<double> coarse_doas_dft(const CVector &snapshot, std::optional<std::size_t> count,
                                    const DftPeakConfig &config)
{
    const Index L = snapshot.size();
    if (L < 2)
        throw Error(ErrorCode::invalid_argument, "DFT DoA search needs at least two elements");
    const Index N = std::max<Index>(config.fft_size, L);

    // Direct evaluation of the zero-padded transform; L is small.
    std::vector<double> mag(static_cast<std::size_t>(N));
    for (Index k = 0; k < N; ++k)
    {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N);
        cdouble acc(0.0, 0.0);
        for (Index l = 0; l < L; ++l)
            acc += snapshot(l) * std::polar(1.0, w * static_cast<double>(l));
        mag[static_cast<std::size_t>(k)] = std::abs(acc);
    }

    const double top = *std::max_element(mag.begin(), mag.end());
    std::vector<std::size_t> candidates;
    if (top > 0.0)
    {
        for (std::size_t k = 0; k < mag.size(); ++k)
        {
            const double prev = mag[(k + mag.size() - 1) % mag.size()];
            const double next = mag[(k + 1) % mag.size()];
            if (mag[k] > prev && mag[k] >= next && mag[k] > 1e-12 * top)
                candidates.push_back(k);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    double threshold = 0.0;
    if (!count)
    {
        std::vector<double> sorted = mag;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
        threshold = sorted[sorted.size() / 2] * std::pow(10.0, config.auto_threshold_db / 20.0);
    }

    // Null-to-null beamwidth: 2/L in sin(theta), 1/L in cycles per element.
    const double min_sep = 1.0 / static_cast<double>(L);
    std::vector<double> freqs;
    std::vector<double> angles;
    for (std::size_t k : candidates)
    {
        if (!count && mag[k] < threshold)
            break;
        double f = static_cast<double>(k) / static_cast<double>(N);
        if (f >= 0.5)
            f -= 1.0;
        const double theta = rad_to_deg(std::asin(std::clamp(2.0 * f, -1.0, 1.0)));
        if (in_excluded(theta, config))
            continue;
        bool separated = true;
        for (double g : freqs)
        {
            double d = std::abs(f - g);
            d = std::min(d, 1.0 - d);
            if (d < min_sep - 1e-12)
            {
                separated = false;
                break;
            }
        }
        if (!separated)
            continue;
        freqs.push_back(f);
        angles.push_back(theta);
        if (count && angles.size() == *count)
            break;
    }

    if (count && angles.size() < *count)
        throw InsufficientPeaksError(*count, angles.size());
    return angles;
}

double fine_doa(const CVector &snapshot, const ArrayGeometry &geometry, double coarse_deg, double half_width_deg,
                double step_deg)
{
    if (!(half_width_deg > 0.0) || !(step_deg > 0.0) || step_deg > 2.0 * half_width_deg)
        throw Error(ErrorCode::invalid_argument, "fine scan needs c > 0 and 0 < step <= 2c");
    if (snapshot.size() != geometry.element_count())
        throw Error(ErrorCode::dimension, "snapshot length differs from element count");

    const auto n = static_cast<Index>(std::floor(2.0 * half_width_deg / step_deg + ceil_guard));
    const double lo = coarse_deg - half_width_deg;
    double best_theta = coarse_deg;
    double best = -1.0;
    for (Index i = 0; i <= n; ++i)
    {
        const double theta = lo + static_cast<double>(i) * step_deg;
        const double v = scan_response(snapshot, geometry.positions(), theta);
        const double tol = 1e-12 * std::max(best, 0.0);
        if (v > best + tol)
        {
            best = v;
            best_theta = theta;
        }
        else if (v >= best - tol && std::abs(theta - coarse_deg) < std::abs(best_theta - coarse_deg))
        {
            best_theta = theta;
        }
    }
    return best_theta;
}

double DoaTrack::value_at(double t) const
{
    const double tau = (t - center) / scale;
    return c0 + tau * (c1 + tau * c2);
}

double DoaTrack::min_fitted() const
{
    return fitted_deg.empty() ? 0.0 : *std::min_element(fitted_deg.begin(), fitted_deg.end());
}

double DoaTrack::max_fitted() const
{
    return fitted_deg.empty() ? 0.0 : *std::max_element(fitted_deg.begin(), fitted_deg.end());
}

double DoaTrack::mean_estimate() const
{
    if (estimates_deg.empty())
        return 0.0;
    return std::accumulate(estimates_deg.begin(), estimates_deg.end(), 0.0) /
           static_cast<double>(estimates_deg.size());
}

DoaTrack fit_trajectory(const std::vector<double> &estimates_deg)
{
    const auto K = static_cast<Index>(estimates_deg.size());
    if (K < 3)
        throw Error(ErrorCode::insufficient_data, "quadratic trajectory fit needs at least 3 estimates");

    DoaTrack track;
    track.estimates_deg = estimates_deg;
    track.center = 0.5 * static_cast<double>(K + 1);
    track.scale = std::max(1.0, 0.5 * static_cast<double>(K - 1));

    RMatrix design(K, 3);
    RVector y(K);
    for (Index i = 0; i < K; ++i)
    {
        const double tau = (static_cast<double>(i + 1) - track.center) / track.scale;
        design(i, 0) = 1.0;
        design(i, 1) = tau;
        design(i, 2) = tau * tau;
        y(i) = estimates_deg[static_cast<std::size_t>(i)];
    }
    const RVector coef = design.colPivHouseholderQr().solve(y);
    track.c0 = coef(0);
    track.c1 = coef(1);
    track.c2 = coef(2);

    track.fitted_deg.resize(static_cast<std::size_t>(K));
    for (Index i = 0; i < K; ++i)
        track.fitted_deg[static_cast<std::size_t>(i)] = track.value_at(static_cast<double>(i + 1));
    track.range_deg = track.max_fitted() - track.min_fitted();
    return track;
}

Index SectorSpec::wrap(Index l) const
{
    const Index q = grid_size;
    return ((l - 1) % q + q) % q + 1;
}

std::vector<double> SectorSpec::sample_angles_deg() const
{
    std::vector<double> out;
    for (const auto &s : sectors)
        for (Index l = s.start_index; l < s.start_index + s.width_bins; ++l)
            out.push_back(grid_angle_deg(l));
    return out;
}

SectorEntry sector_indices(const DoaTrack &track, Index grid_size)
{
    if (grid_size < 4)
        throw Error(ErrorCode::invalid_argument, "angular grid needs Q >= 4");
    const double bin = 360.0 / static_cast<double>(grid_size);

    SectorEntry e;
    e.center_deg = std::fmod(track.sector_center_deg(), 360.0);
    if (e.center_deg < 0.0)
        e.center_deg += 360.0;
    // Zero range would give B = 0 and an empty sum; one bin is the degenerate limit.
    e.width_bins = std::max<Index>(1, static_cast<Index>(std::ceil(track.range_deg / bin - ceil_guard)));
    e.center_index = static_cast<Index>(std::ceil(e.center_deg / bin - ceil_guard));
    e.start_index = static_cast<Index>(std::ceil(static_cast<double>(e.center_index) -
                                                 0.5 * static_cast<double>(e.width_bins)));
    return e;
}

TrackingResult track_interferers(const SnapshotSet &snapshots, const ArrayGeometry &geometry,
                                 const TrackingConfig &config)
{
    if (snapshots.element_count() != geometry.element_count())
        throw Error(ErrorCode::dimension, "snapshot length differs from element count");

    TrackingResult result;
    result.sectors.grid_size = config.grid_size;
    result.coarse_deg = coarse_doas_dft(snapshots.snapshot(0), config.interferer_count, config.dft);

    for (double coarse : result.coarse_deg)
    {
        std::vector<double> est(static_cast<std::size_t>(snapshots.snapshot_count()));
        for (Index t = 0; t < snapshots.snapshot_count(); ++t)
            est[static_cast<std::size_t>(t)] =
                fine_doa(snapshots.snapshot(t), geometry, coarse, config.half_width_deg, config.step_deg);
        DoaTrack track = fit_trajectory(est);
        result.sectors.sectors.push_back(sector_indices(track, config.grid_size));
        result.tracks.push_back(std::move(track));
    }

    // Trim bins that alias into the SOI sector (a linear array only sees sin(psi)).
    const DftPeakConfig &ex = config.dft;
    if (ex.exclude_lo_deg <= ex.exclude_hi_deg)
    {
        std::vector<SectorEntry> kept;
        for (SectorEntry s : result.sectors.sectors)
        {
            auto inside = [&](Index l) {
                const double th = fold_angle_deg(result.sectors.grid_angle_deg(l));
                return th >= ex.exclude_lo_deg && th <= ex.exclude_hi_deg;
            };
            Index first = s.start_index;
            Index last = s.start_index + s.width_bins - 1;
            while (first <= last && inside(first))
                ++first;
            while (last >= first && inside(last))
                --last;
            if (first > last)
                continue;
            s.start_index = first;
            s.width_bins = last - first + 1;
            kept.push_back(s);
        }
        result.sectors.sectors = std::move(kept);
    }
    return result;
}

} // namespace beamlab
