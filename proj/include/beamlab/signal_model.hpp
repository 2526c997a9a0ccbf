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
#include "beamlab/random.hpp"

#include <cmath>
#include <string_view>
#include <vector>

namespace beamlab
{

/// Sensor positions along the array axis, in wavelengths.
///
/// The nominal array is a half-wavelength ULA: element l sits at 0.5 * l.
/// Positions must be strictly increasing. A default-constructed geometry is
/// empty and rejected by every operation that needs elements.
class ArrayGeometry
{
public:
    ArrayGeometry() = default;
    explicit ArrayGeometry(std::vector<double> positions);

    static ArrayGeometry uniform_linear(Index element_count, double spacing = 0.5);

    Index element_count() const noexcept { return static_cast<Index>(positions_.size()); }
    const std::vector<double> &positions() const noexcept { return positions_; }
    bool empty() const noexcept { return positions_.empty(); }

private:
    std::vector<double> positions_;
};

// Unit-norm response to a plane wave from theta_deg (broadside = 0):
// a_l = exp(-j 2 pi p_l sin(theta)) / sqrt(L).
CVector steering_vector(double theta_deg, const ArrayGeometry &geometry);

// d a / d theta with theta in radians.
CVector steering_derivative(double theta_deg, const ArrayGeometry &geometry);

enum class MismatchKind
{
    none,
    look_direction,
    random_sv,
    gain_phase,
    geometry
};

std::string_view to_string(MismatchKind kind);
MismatchKind mismatch_kind_from_string(std::string_view name);

struct MismatchSpec
{
    MismatchKind kind = MismatchKind::none;
    double look_bound_deg = 4.0;
    double epsilon_bound = std::sqrt(0.3);
    double gain_std = 0.05;
    double phase_std = 0.025 * std::numbers::pi;
    double position_bound = 0.05;

    void validate() const;
};

/// One realization of the array-wide calibration errors: per-element complex
/// gains (1 + Ga) e^{j Pha} and per-element position offsets in wavelengths.
struct ArrayPerturbation
{
    CVector element_factors;
    std::vector<double> position_offsets;

    static ArrayPerturbation identity(Index element_count);
    static ArrayPerturbation draw(const MismatchSpec &spec, Index element_count, RandomStream &rng);
};

// Steering vector after applying one mismatch draw for a single source.
CVector perturbed_steering(double theta_deg, const ArrayGeometry &geometry, const MismatchSpec &mismatch,
                           RandomStream &rng);

/// Nominal scenario parameters before any mismatch is drawn.
struct ScenarioSpec
{
    ArrayGeometry geometry = ArrayGeometry::uniform_linear(12);
    double soi_doa_deg = 0.0;
    double snr_db = 0.0;
    std::vector<double> interferer_doas_deg{30.0, 50.0};
    std::vector<double> inr_db{30.0, 30.0};
    double noise_power = 1.0;
    Index snapshots = 100;
    MismatchSpec mismatch;
};

/// Ground truth of one scenario realization.
///
/// The DoA fields hold the presumed (nominal) directions; the actual_* fields
/// and the steering vectors include the drawn mismatch and stay fixed over
/// all snapshots of the realization.
struct ScenarioTruth
{
    ArrayGeometry geometry;
    double soi_doa_deg = 0.0;
    double soi_power = 1.0;
    std::vector<double> interferer_doas_deg;
    std::vector<double> interferer_powers;
    double noise_power = 1.0;
    Index snapshots = 1;
    MismatchSpec mismatch;

    double actual_soi_doa_deg = 0.0;
    std::vector<double> actual_interferer_doas_deg;
    CVector soi_sv;
    std::vector<CVector> interferer_svs;

    Index interferer_count() const noexcept { return static_cast<Index>(interferer_doas_deg.size()); }
    Index element_count() const noexcept { return geometry.element_count(); }
    double snr_db() const { return db10(soi_power / noise_power); }

    void validate() const;
};

ScenarioTruth realize_scenario(const ScenarioSpec &spec, RandomStream &rng);

/// K array snapshots stored column-wise in an L x K matrix.
class SnapshotSet
{
public:
    explicit SnapshotSet(CMatrix data);
    static SnapshotSet from_vectors(const std::vector<CVector> &vectors);

    Index element_count() const noexcept { return data_.rows(); }
    Index snapshot_count() const noexcept { return data_.cols(); }
    auto snapshot(Index t) const { return data_.col(t); }
    const CMatrix &data() const noexcept { return data_; }

    // Union of two sets of equal element count; this set's snapshots first.
    SnapshotSet concat(const SnapshotSet &other) const;

private:
    CMatrix data_;
};

/// Snapshots together with the source waveforms that produced them.
/// Row 0 of `waveforms` is s(t), rows 1..P are i_p(t).
struct SimulatedData
{
    SnapshotSet snapshots;
    CMatrix waveforms;
};

SimulatedData simulate(const ScenarioTruth &truth, RandomStream &rng);
SnapshotSet generate_snapshots(const ScenarioTruth &truth, RandomStream &rng);

} // namespace beamlab
