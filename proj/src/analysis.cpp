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

#include "beamlab/analysis.hpp"

#include "beamlab/csv.hpp"
#include "beamlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beamlab
{

CMatrix source_sample_covariance(const CMatrix &waveforms)
{
    if (waveforms.cols() < 1 || waveforms.rows() < 1)
        throw Error(ErrorCode::dimension, "waveform matrix is empty");
    return waveforms * waveforms.adjoint() / static_cast<double>(waveforms.cols());
}

CMatrix source_theoretical_covariance(const ScenarioTruth &truth)
{
    const Index n = truth.interferer_count() + 1;
    CMatrix p = CMatrix::Zero(n, n);
    p(0, 0) = truth.soi_power;
    for (Index i = 1; i < n; ++i)
        p(i, i) = truth.interferer_powers[static_cast<std::size_t>(i - 1)];
    return p;
}

CrbReport crb_doa(const ScenarioTruth &truth, const CMatrix &source_covariance)
{
    truth.validate();
    const Index L = truth.element_count();
    const Index n = truth.interferer_count() + 1;
    if (source_covariance.rows() != n || source_covariance.cols() != n)
        throw Error(ErrorCode::dimension, "source covariance must be (P+1) x (P+1)");
    if (n >= L)
        throw Error(ErrorCode::rank_deficient, "more sources than the array can resolve");

    std::vector<double> doas{truth.actual_soi_doa_deg};
    doas.insert(doas.end(), truth.actual_interferer_doas_deg.begin(), truth.actual_interferer_doas_deg.end());

    CMatrix a(L, n), adot(L, n);
    for (Index i = 0; i < n; ++i)
    {
        a.col(i) = steering_vector(doas[static_cast<std::size_t>(i)], truth.geometry);
        adot.col(i) = steering_derivative(doas[static_cast<std::size_t>(i)], truth.geometry);
    }

    Eigen::ColPivHouseholderQR<CMatrix> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < n)
        throw Error(ErrorCode::rank_deficient, "steering matrix is rank deficient (repeated DoAs?)");
    const CMatrix q = qr.householderQ() * CMatrix::Identity(L, n);
    const CMatrix proj = adot - q * (q.adjoint() * adot);
    const CMatrix h = adot.adjoint() * proj;

    const RMatrix info = h.cwiseProduct(source_covariance.transpose()).real();
    const RMatrix sym = 0.5 * (info + info.transpose());
    Eigen::LDLT<RMatrix> ldlt(sym);
    const RVector d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * d.cwiseAbs().maxCoeff()))
        throw Error(ErrorCode::rank_deficient, "CRB information matrix is singular");

    const double scale = truth.noise_power / (2.0 * static_cast<double>(truth.snapshots));
    RMatrix bound = scale * ldlt.solve(RMatrix::Identity(n, n));
    bound = 0.5 * (bound + bound.transpose()).eval();

    CrbReport r;
    r.snr_db = truth.snr_db();
    r.snapshots = truth.snapshots;
    const double k = rad_to_deg(1.0) * rad_to_deg(1.0);
    for (Index i = 0; i < n; ++i)
        r.crb_deg2.push_back(bound(i, i) * k);
    r.bound_rad2 = std::move(bound);
    return r;
}

namespace
{

// Smallest summed squared error over assignments of estimates to truths.
double best_assignment_sq_error(const std::vector<double> &estimates, const std::vector<double> &truths)
{
    std::vector<std::size_t> perm(estimates.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do
    {
        double s = 0.0;
        for (std::size_t i = 0; i < truths.size(); ++i)
        {
            const double e = estimates[perm[i]] - truths[i];
            s += e * e;
        }
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double mean_tail(const std::vector<double> &v)
{
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i)
        s += v[i];
    return s / static_cast<double>(v.size() - 1);
}

} // namespace

std::vector<DoaMsePoint> doa_mse_experiment(const DoaMseConfig &config)
{
    if (config.trials < 10)
        throw Error(ErrorCode::invalid_argument, "DoA MSE experiment needs at least 10 trials");
    if (config.snr_db_values.empty())
        throw Error(ErrorCode::invalid_argument, "no SNR values given");
    if (config.scenario.interferer_doas_deg.empty())
        throw Error(ErrorCode::invalid_scenario, "DoA MSE experiment needs at least one interferer");

    const std::size_t P = config.scenario.interferer_doas_deg.size();
    TrackingConfig tracking = config.tracking;
    tracking.interferer_count = P;
    tracking.dft.exclude_lo_deg = config.scenario.soi_doa_deg - config.soi_half_width_deg;
    tracking.dft.exclude_hi_deg = config.scenario.soi_doa_deg + config.soi_half_width_deg;

    std::vector<DoaMsePoint> out;
    for (double snr : config.snr_db_values)
    {
        ScenarioSpec spec = config.scenario;
        spec.snr_db = config.soi_snr_db;
        spec.inr_db.assign(P, snr);

        DoaMsePoint pt;
        pt.snr_db = snr;
        std::vector<double> errors;
        double crb_sum = 0.0, crb_th_sum = 0.0;
        for (int trial = 0; trial < config.trials; ++trial)
        {
            const auto t = static_cast<std::uint64_t>(trial);
            RandomStream mis = RandomStream::for_trial(config.seed, t, StreamId::mismatch);
            RandomStream snap = RandomStream::for_trial(config.seed, t, StreamId::snapshots);
            const ScenarioTruth truth = realize_scenario(spec, mis);
            const SimulatedData data = simulate(truth, snap);
            try
            {
                const TrackingResult tr = track_interferers(data.snapshots, truth.geometry, tracking);
                std::vector<double> est;
                for (const auto &track : tr.tracks)
                    est.push_back(track.mean_estimate());
                errors.push_back(best_assignment_sq_error(est, truth.actual_interferer_doas_deg) /
                                 static_cast<double>(P));
                crb_sum += mean_tail(crb_doa(truth, source_sample_covariance(data.waveforms)).crb_deg2);
                crb_th_sum += mean_tail(crb_doa(truth, source_theoretical_covariance(truth)).crb_deg2);
            }
            catch (const Error &)
            {
                ++pt.failures;
            }
        }
        pt.trials_used = static_cast<int>(errors.size());
        if (pt.trials_used > 0)
        {
            const double n = static_cast<double>(pt.trials_used);
            pt.mse_deg2 = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
            double var = 0.0;
            for (double e : errors)
                var += (e - pt.mse_deg2) * (e - pt.mse_deg2);
            var = pt.trials_used > 1 ? var / (n - 1.0) : 0.0;
            pt.mse_ci95_deg2 = 1.96 * std::sqrt(var / n);
            pt.crb_deg2 = crb_sum / n;
            pt.crb_theoretical_deg2 = crb_th_sum / n;
        }
        else
        {
            pt.mse_deg2 = pt.crb_deg2 = pt.crb_theoretical_deg2 = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(pt);
    }
    return out;
}

void write_crb_csv(const std::filesystem::path &path, const std::vector<DoaMsePoint> &points)
{
    CsvTable t{{"snr_db", "mse_deg2", "crb_deg2", "crb_theoretical_deg2", "mse_ci95_deg2", "trials_used", "failures"},
               {}};
    for (const auto &p : points)
        t.rows.push_back({format_double(p.snr_db), format_double(p.mse_deg2), format_double(p.crb_deg2),
                          format_double(p.crb_theoretical_deg2), format_double(p.mse_ci95_deg2),
                          std::to_string(p.trials_used), std::to_string(p.failures)});
    write_csv(path, t);
}

} // namespace beamlab
