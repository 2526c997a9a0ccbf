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

#include "beamlab/signal_model.hpp"

#include "beamlab/error.hpp"

#include <string>

namespace beamlab
{

namespace
{

CVector steering_from_positions(double theta_deg, const std::vector<double> &positions)
{
    if (positions.empty())
        throw Error(ErrorCode::invalid_geometry, "array geometry has no elements");
    const Index L = static_cast<Index>(positions.size());
    const double s = std::sin(deg_to_rad(theta_deg));
    const double norm = 1.0 / std::sqrt(static_cast<double>(L));
    CVector a(L);
    for (Index l = 0; l < L; ++l)
        a(l) = std::polar(norm, -2.0 * std::numbers::pi * positions[static_cast<std::size_t>(l)] * s);
    return a;
}

// Per-source error of the random steering vector model: eps / sqrt(L) * e^{j phi_l}.
CVector random_sv_error(const MismatchSpec &spec, Index L, RandomStream &rng)
{
    const double eps = rng.uniform(0.0, spec.epsilon_bound);
    CVector e(L);
    for (Index l = 0; l < L; ++l)
        e(l) = std::polar(eps / std::sqrt(static_cast<double>(L)), rng.uniform(0.0, 2.0 * std::numbers::pi));
    return e;
}

CVector apply_perturbation(double theta_deg, const ArrayGeometry &geometry, const ArrayPerturbation &pert)
{
    std::vector<double> pos = geometry.positions();
    for (std::size_t l = 0; l < pos.size(); ++l)
        pos[l] += pert.position_offsets[l];
    CVector a = steering_from_positions(theta_deg, pos);
    return a.cwiseProduct(pert.element_factors);
}

void require_finite(double v, const char *what)
{
    if (!std::isfinite(v))
        throw Error(ErrorCode::invalid_scenario, std::string(what) + " must be finite");
}

} // namespace

ArrayGeometry::ArrayGeometry(std::vector<double> positions) : positions_(std::move(positions))
{
    for (std::size_t i = 0; i < positions_.size(); ++i)
    {
        if (!std::isfinite(positions_[i]))
            throw Error(ErrorCode::invalid_geometry, "element positions must be finite");
        if (i > 0 && !(positions_[i] > positions_[i - 1]))
            throw Error(ErrorCode::invalid_geometry, "element positions must be strictly increasing");
    }
}

ArrayGeometry ArrayGeometry::uniform_linear(Index element_count, double spacing)
{
    if (element_count < 1)
        throw Error(ErrorCode::invalid_geometry, "array needs at least one element");
    if (!(spacing > 0.0))
        throw Error(ErrorCode::invalid_geometry, "element spacing must be positive");
    std::vector<double> pos(static_cast<std::size_t>(element_count));
    for (std::size_t l = 0; l < pos.size(); ++l)
        pos[l] = spacing * static_cast<double>(l);
    return ArrayGeometry(std::move(pos));
}

CVector steering_vector(double theta_deg, const ArrayGeometry &geometry)
{
    return steering_from_positions(theta_deg, geometry.positions());
}

CVector steering_derivative(double theta_deg, const ArrayGeometry &geometry)
{
    CVector a = steering_vector(theta_deg, geometry);
    const double c = std::cos(deg_to_rad(theta_deg));
    for (Index l = 0; l < a.size(); ++l)
        a(l) *= cdouble(0.0, -2.0 * std::numbers::pi * geometry.positions()[static_cast<std::size_t>(l)] * c);
    return a;
}

std::string_view to_string(MismatchKind kind)
{
    switch (kind)
    {
    case MismatchKind::none:
        return "none";
    case MismatchKind::look_direction:
        return "look_direction";
    case MismatchKind::random_sv:
        return "random_sv";
    case MismatchKind::gain_phase:
        return "gain_phase";
    case MismatchKind::geometry:
        return "geometry";
    }
    return "none";
}

MismatchKind mismatch_kind_from_string(std::string_view name)
{
    for (auto k : {MismatchKind::none, MismatchKind::look_direction, MismatchKind::random_sv, MismatchKind::gain_phase,
                   MismatchKind::geometry})
        if (to_string(k) == name)
            return k;
    throw Error(ErrorCode::invalid_argument, "unknown mismatch kind '" + std::string(name) + "'");
}

void MismatchSpec::validate() const
{
    for (double v : {look_bound_deg, epsilon_bound, gain_std, phase_std, position_bound})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(ErrorCode::invalid_scenario, "mismatch bounds must be finite and nonnegative");
}

ArrayPerturbation ArrayPerturbation::identity(Index element_count)
{
    ArrayPerturbation p;
    p.element_factors = CVector::Ones(element_count);
    p.position_offsets.assign(static_cast<std::size_t>(element_count), 0.0);
    return p;
}

ArrayPerturbation ArrayPerturbation::draw(const MismatchSpec &spec, Index element_count, RandomStream &rng)
{
    ArrayPerturbation p = identity(element_count);
    if (spec.kind == MismatchKind::gain_phase)
    {
        for (Index l = 0; l < element_count; ++l)
        {
            const double gain = rng.normal(0.0, spec.gain_std);
            const double phase = rng.normal(0.0, spec.phase_std);
            p.element_factors(l) = std::polar(1.0 + gain, phase);
        }
    }
    else if (spec.kind == MismatchKind::geometry)
    {
        for (auto &off : p.position_offsets)
            off = rng.uniform(-spec.position_bound, spec.position_bound);
    }
    return p;
}

CVector perturbed_steering(double theta_deg, const ArrayGeometry &geometry, const MismatchSpec &mismatch,
                           RandomStream &rng)
{
    mismatch.validate();
    const Index L = geometry.element_count();
    switch (mismatch.kind)
    {
    case MismatchKind::none:
        return steering_vector(theta_deg, geometry);
    case MismatchKind::look_direction:
        return steering_vector(theta_deg + rng.uniform(-mismatch.look_bound_deg, mismatch.look_bound_deg), geometry);
    case MismatchKind::random_sv: {
        CVector a = steering_vector(theta_deg, geometry);
        return a + random_sv_error(mismatch, L, rng);
    }
    case MismatchKind::gain_phase:
    case MismatchKind::geometry: {
        if (geometry.empty())
            throw Error(ErrorCode::invalid_geometry, "array geometry has no elements");
        const ArrayPerturbation pert = ArrayPerturbation::draw(mismatch, L, rng);
        return apply_perturbation(theta_deg, geometry, pert);
    }
    }
    return steering_vector(theta_deg, geometry);
}

void ScenarioTruth::validate() const
{
    const Index L = geometry.element_count();
    if (L < 1)
        throw Error(ErrorCode::invalid_geometry, "array geometry has no elements");
    if (interferer_doas_deg.size() != interferer_powers.size())
        throw Error(ErrorCode::invalid_scenario, "interferer DoAs and powers differ in length");
    if (actual_interferer_doas_deg.size() != interferer_doas_deg.size() ||
        interferer_svs.size() != interferer_doas_deg.size())
        throw Error(ErrorCode::invalid_scenario, "interferer steering vectors missing");
    if (snapshots < 1)
        throw Error(ErrorCode::invalid_scenario, "scenario needs at least one snapshot");
    if (!(noise_power >= 0.0) || !(soi_power >= 0.0))
        throw Error(ErrorCode::invalid_scenario, "powers must be nonnegative");
    for (double p : interferer_powers)
        if (!(p >= 0.0))
            throw Error(ErrorCode::invalid_scenario, "powers must be nonnegative");
    require_finite(soi_doa_deg, "SOI DoA");
    if (soi_sv.size() != L)
        throw Error(ErrorCode::invalid_scenario, "SOI steering vector length differs from L");
    for (const auto &sv : interferer_svs)
        if (sv.size() != L)
            throw Error(ErrorCode::invalid_scenario, "interferer steering vector length differs from L");
    mismatch.validate();
}

ScenarioTruth realize_scenario(const ScenarioSpec &spec, RandomStream &rng)
{
    if (spec.interferer_doas_deg.size() != spec.inr_db.size())
        throw Error(ErrorCode::invalid_scenario, "interferer DoAs and INRs differ in length");
    if (spec.snapshots < 1)
        throw Error(ErrorCode::invalid_scenario, "scenario needs at least one snapshot");
    if (!(spec.noise_power >= 0.0))
        throw Error(ErrorCode::invalid_scenario, "noise power must be nonnegative");
    spec.mismatch.validate();
    const Index L = spec.geometry.element_count();
    if (L < 1)
        throw Error(ErrorCode::invalid_geometry, "array geometry has no elements");

    ScenarioTruth t;
    t.geometry = spec.geometry;
    t.soi_doa_deg = spec.soi_doa_deg;
    t.soi_power = spec.noise_power * from_db10(spec.snr_db);
    t.interferer_doas_deg = spec.interferer_doas_deg;
    for (double inr : spec.inr_db)
        t.interferer_powers.push_back(spec.noise_power * from_db10(inr));
    t.noise_power = spec.noise_power;
    t.snapshots = spec.snapshots;
    t.mismatch = spec.mismatch;

    // Array-wide errors are shared by every source; per-source draws come from
    // their own sub-streams so adding an interferer does not reshuffle the SOI.
    RandomStream array_rng = rng.split(0);
    const ArrayPerturbation pert = ArrayPerturbation::draw(spec.mismatch, L, array_rng);
    const MismatchSpec &m = spec.mismatch;

    auto realize_source = [&](double nominal_deg, std::size_t source, double &actual_deg) -> CVector {
        RandomStream src = rng.split(1 + source);
        actual_deg = nominal_deg;
        switch (m.kind)
        {
        case MismatchKind::none:
            return steering_vector(nominal_deg, spec.geometry);
        case MismatchKind::look_direction:
            actual_deg = nominal_deg + src.uniform(-m.look_bound_deg, m.look_bound_deg);
            return steering_vector(actual_deg, spec.geometry);
        case MismatchKind::random_sv:
            return steering_vector(nominal_deg, spec.geometry) + random_sv_error(m, L, src);
        case MismatchKind::gain_phase:
            // Only the SOI carries the additional look-direction error.
            if (source == 0)
                actual_deg = nominal_deg + src.uniform(-m.look_bound_deg, m.look_bound_deg);
            return apply_perturbation(actual_deg, spec.geometry, pert);
        case MismatchKind::geometry:
            return apply_perturbation(nominal_deg, spec.geometry, pert);
        }
        return steering_vector(nominal_deg, spec.geometry);
    };

    t.soi_sv = realize_source(spec.soi_doa_deg, 0, t.actual_soi_doa_deg);
    t.actual_interferer_doas_deg.resize(spec.interferer_doas_deg.size());
    for (std::size_t p = 0; p < spec.interferer_doas_deg.size(); ++p)
        t.interferer_svs.push_back(realize_source(spec.interferer_doas_deg[p], p + 1, t.actual_interferer_doas_deg[p]));

    t.validate();
    return t;
}

SnapshotSet::SnapshotSet(CMatrix data) : data_(std::move(data))
{
    if (data_.rows() < 1)
        throw Error(ErrorCode::dimension, "snapshots must have at least one element");
    if (data_.cols() < 1)
        throw Error(ErrorCode::invalid_scenario, "snapshot set needs at least one snapshot");
}

SnapshotSet SnapshotSet::from_vectors(const std::vector<CVector> &vectors)
{
    if (vectors.empty())
        throw Error(ErrorCode::invalid_scenario, "snapshot set needs at least one snapshot");
    const Index L = vectors.front().size();
    CMatrix data(L, static_cast<Index>(vectors.size()));
    for (std::size_t t = 0; t < vectors.size(); ++t)
    {
        if (vectors[t].size() != L)
            throw Error(ErrorCode::dimension, "snapshot " + std::to_string(t) + " has inconsistent length");
        data.col(static_cast<Index>(t)) = vectors[t];
    }
    return SnapshotSet(std::move(data));
}

SnapshotSet SnapshotSet::concat(const SnapshotSet &other) const
{
    if (other.element_count() != element_count())
        throw Error(ErrorCode::dimension, "snapshot sets differ in element count");
    CMatrix joined(element_count(), snapshot_count() + other.snapshot_count());
    joined << data_, other.data_;
    return SnapshotSet(std::move(joined));
}

SimulatedData simulate(const ScenarioTruth &truth, RandomStream &rng)
{
    truth.validate();
    const Index L = truth.element_count();
    const Index K = truth.snapshots;
    const Index P = truth.interferer_count();

    CMatrix waveforms(P + 1, K);
    for (Index src = 0; src <= P; ++src)
    {
        RandomStream s = rng.split(static_cast<std::uint64_t>(src));
        const double power = src == 0 ? truth.soi_power : truth.interferer_powers[static_cast<std::size_t>(src - 1)];
        for (Index t = 0; t < K; ++t)
            waveforms(src, t) = s.complex_normal(power);
    }

    CMatrix x(L, K);
    RandomStream noise = rng.split(0xffff);
    for (Index t = 0; t < K; ++t)
        for (Index l = 0; l < L; ++l)
            x(l, t) = noise.complex_normal(truth.noise_power);

    x.noalias() += truth.soi_sv * waveforms.row(0);
    for (Index p = 0; p < P; ++p)
        x.noalias() += truth.interferer_svs[static_cast<std::size_t>(p)] * waveforms.row(p + 1);

    return {SnapshotSet(std::move(x)), std::move(waveforms)};
}

SnapshotSet generate_snapshots(const ScenarioTruth &truth, RandomStream &rng)
{
    return simulate(truth, rng).snapshots;
}

} // namespace beamlab
