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


#include "catch_amalgamated.hpp"

#include "beamlab/covariance.hpp"
#include "beamlab/error.hpp"
#include "beamlab/signal_model.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

#include <cstring>

using namespace beamlab;

TEST_CASE("steering_vector - closed-form cases")
{
    const auto ula4 = ArrayGeometry::uniform_linear(4);
    CVector a = steering_vector(0.0, ula4);
    for (Index l = 0; l < 4; ++l)
        CHECK(std::abs(a(l) - cdouble(0.5, 0.0)) < 1e-15);

    const auto ula2 = ArrayGeometry::uniform_linear(2);
    CVector b = steering_vector(90.0, ula2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(b(0) - cdouble(r, 0.0)) < 1e-15);
    CHECK(std::abs(b(1) - cdouble(-r, 0.0)) < 1e-15);
}

TEST_CASE("steering_vector - 30 degrees, L = 12 against direct evaluation")
{
    CVector a = steering_vector(30.0, ArrayGeometry::uniform_linear(12));
    REQUIRE(a.size() == 12);
    for (Index l = 0; l < 12; ++l)
    {
        CHECK(std::abs(a(l).real() - oracle::sv30_l12_re[l]) < 1e-14);
        CHECK(std::abs(a(l).imag() - oracle::sv30_l12_im[l]) < 1e-14);
    }
}

TEST_CASE("steering_vector - unit norm, zero first phase, conjugate symmetry")
{
    RandomStream rng(42);
    for (int i = 0; i < 1000; ++i)
    {
        const Index L = 1 + static_cast<Index>(rng.next_u64() % 32);
        const double theta = rng.uniform(-90.0, 90.0);
        const auto g = ArrayGeometry::uniform_linear(L);
        CVector a = steering_vector(theta, g);
        CHECK(std::abs(a.norm() - 1.0) < 1e-13);
        CHECK(std::abs(std::arg(a(0))) < 1e-15);
        CVector m = steering_vector(-theta, g);
        CHECK((m - a.conjugate()).norm() < 1e-13);
    }
}

TEST_CASE("steering_vector - errors")
{
    CHECK_THROWS_AS(steering_vector(0.0, ArrayGeometry{}), Error);
    try
    {
        steering_vector(0.0, ArrayGeometry{});
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::invalid_geometry);
    }
    CHECK_THROWS_AS(ArrayGeometry({0.0, 0.5, 0.5}), Error);
    CHECK_THROWS_AS(ArrayGeometry::uniform_linear(0), Error);
}

TEST_CASE("steering_derivative - matches central difference")
{
    const auto g = ArrayGeometry::uniform_linear(8);
    for (double theta : {-40.0, 0.0, 17.0, 60.0})
    {
        const double h = 1e-6;
        CVector fd = (steering_vector(theta + rad_to_deg(h), g) - steering_vector(theta - rad_to_deg(h), g)) / (2 * h);
        CHECK((fd - steering_derivative(theta, g)).norm() < 1e-7);
    }
}

TEST_CASE("perturbed_steering - none and zero-radius random SV")
{
    const auto g4 = ArrayGeometry::uniform_linear(4);
    RandomStream rng(7);
    MismatchSpec none;
    CVector a = perturbed_steering(0.0, g4, none, rng);
    CHECK((a - CVector::Constant(4, 0.5)).norm() < 1e-15);

    MismatchSpec rsv;
    rsv.kind = MismatchKind::random_sv;
    rsv.epsilon_bound = 0.0;
    const auto g12 = ArrayGeometry::uniform_linear(12);
    CVector b = perturbed_steering(20.0, g12, rsv, rng);
    CHECK((b - steering_vector(20.0, g12)).norm() == 0.0);
}

TEST_CASE("perturbed_steering - random SV error radius")
{
    MismatchSpec rsv;
    rsv.kind = MismatchKind::random_sv;
    const auto g = ArrayGeometry::uniform_linear(12);
    RandomStream rng(11);
    for (int i = 0; i < 1000; ++i)
    {
        CVector e = perturbed_steering(10.0, g, rsv, rng) - steering_vector(10.0, g);
        CHECK(e.norm() <= rsv.epsilon_bound + 1e-12);
    }
}

TEST_CASE("perturbed_steering - look direction stays within the bound")
{
    MismatchSpec look;
    look.kind = MismatchKind::look_direction;
    const auto g = ArrayGeometry::uniform_linear(12);
    RandomStream rng(3);
    for (int i = 0; i < 200; ++i)
    {
        CVector a = perturbed_steering(0.0, g, look, rng);
        // Phase slope of element 1 gives sin(theta).
        const double s = -std::arg(a(1) / a(0)) / std::numbers::pi;
        CHECK(std::abs(rad_to_deg(std::asin(s))) <= 4.0 + 1e-9);
    }
}

TEST_CASE("perturbed_steering - gain/phase norm over 1e4 draws")
{
    MismatchSpec gp;
    gp.kind = MismatchKind::gain_phase;
    const auto g = ArrayGeometry::uniform_linear(12);
    RandomStream rng(2024);
    int inside = 0;
    for (int i = 0; i < 10000; ++i)
    {
        const double n = perturbed_steering(0.0, g, gp, rng).norm();
        inside += (n >= 0.85 && n <= 1.15) ? 1 : 0;
    }
    CHECK(inside == 10000);
}

TEST_CASE("perturbed_steering - geometry offsets keep element magnitudes")
{
    MismatchSpec geo;
    geo.kind = MismatchKind::geometry;
    const auto g = ArrayGeometry::uniform_linear(12);
    RandomStream rng(5);
    CVector a = perturbed_steering(25.0, g, geo, rng);
    for (Index l = 0; l < 12; ++l)
        CHECK(std::abs(std::abs(a(l)) - 1.0 / std::sqrt(12.0)) < 1e-14);
    CHECK((a - steering_vector(25.0, g)).norm() > 0.0);
}

TEST_CASE("MismatchSpec - negative bounds rejected")
{
    MismatchSpec m;
    m.gain_std = -0.1;
    CHECK_THROWS_AS(m.validate(), Error);
    CHECK(mismatch_kind_from_string("gain_phase") == MismatchKind::gain_phase);
    CHECK_THROWS_AS(mismatch_kind_from_string("bogus"), Error);
}

TEST_CASE("realize_scenario - default scenario")
{
    ScenarioSpec spec;
    RandomStream rng = RandomStream::for_trial(1, 0, StreamId::mismatch);
    ScenarioTruth t = realize_scenario(spec, rng);
    CHECK(t.element_count() == 12);
    CHECK(t.interferer_count() == 2);
    CHECK(t.interferer_powers[0] == Catch::Approx(1000.0));
    CHECK(t.soi_power == Catch::Approx(1.0));
    CHECK(t.snapshots == 100);
    CHECK((t.soi_sv - steering_vector(0.0, spec.geometry)).norm() < 1e-15);
    CHECK((t.interferer_svs[1] - steering_vector(50.0, spec.geometry)).norm() < 1e-15);
}

TEST_CASE("realize_scenario - mismatched look direction is recorded")
{
    ScenarioSpec spec;
    spec.mismatch.kind = MismatchKind::look_direction;
    for (std::uint64_t trial = 0; trial < 50; ++trial)
    {
        RandomStream rng = RandomStream::for_trial(9, trial, StreamId::mismatch);
        ScenarioTruth t = realize_scenario(spec, rng);
        CHECK(std::abs(t.actual_soi_doa_deg) <= 4.0);
        CHECK((t.soi_sv - steering_vector(t.actual_soi_doa_deg, spec.geometry)).norm() < 1e-14);
    }
}

TEST_CASE("realize_scenario - invalid inputs")
{
    ScenarioSpec spec;
    RandomStream rng(1);
    spec.snapshots = 0;
    CHECK_THROWS_AS(realize_scenario(spec, rng), Error);
    spec = {};
    spec.inr_db = {30.0};
    CHECK_THROWS_AS(realize_scenario(spec, rng), Error);
    spec = {};
    spec.noise_power = -1.0;
    CHECK_THROWS_AS(realize_scenario(spec, rng), Error);
}

TEST_CASE("generate_snapshots - noise only converges to identity")
{
    ScenarioSpec spec;
    spec.geometry = ArrayGeometry::uniform_linear(4);
    spec.snr_db = -400.0;
    spec.interferer_doas_deg.clear();
    spec.inr_db.clear();
    spec.snapshots = 100000;
    RandomStream mrng(1);
    ScenarioTruth t = realize_scenario(spec, mrng);
    t.soi_power = 0.0;
    RandomStream rng(2);
    HermitianMatrix r = sample_covariance(generate_snapshots(t, rng));
    CHECK((r.matrix() - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("generate_snapshots - noise-free single source is rank one")
{
    ScenarioSpec spec;
    spec.interferer_doas_deg.clear();
    spec.inr_db.clear();
    spec.soi_doa_deg = 12.0;
    spec.noise_power = 0.0;
    spec.snapshots = 20;
    RandomStream mrng(1);
    ScenarioTruth t = realize_scenario(spec, mrng);
    t.soi_power = 1.0;
    RandomStream rng(3);
    SnapshotSet x = generate_snapshots(t, rng);
    REQUIRE(x.snapshot_count() == 20);
    for (Index k = 0; k < 20; ++k)
    {
        CVector v = x.snapshot(k);
        const cdouble c = t.soi_sv.dot(v);
        CHECK((v - c * t.soi_sv).norm() < 1e-12 * std::max(1.0, v.norm()));
    }
}

TEST_CASE("generate_snapshots - deterministic in the seed")
{
    ScenarioSpec spec;
    RandomStream m1 = RandomStream::for_trial(5, 3, StreamId::mismatch);
    RandomStream m2 = RandomStream::for_trial(5, 3, StreamId::mismatch);
    ScenarioTruth t1 = realize_scenario(spec, m1);
    ScenarioTruth t2 = realize_scenario(spec, m2);
    RandomStream s1 = RandomStream::for_trial(5, 3, StreamId::snapshots);
    RandomStream s2 = RandomStream::for_trial(5, 3, StreamId::snapshots);
    SnapshotSet a = generate_snapshots(t1, s1);
    SnapshotSet b = generate_snapshots(t2, s2);
    CHECK(std::memcmp(a.data().data(), b.data().data(), sizeof(cdouble) * a.data().size()) == 0);

    RandomStream s3 = RandomStream::for_trial(5, 4, StreamId::snapshots);
    CHECK((generate_snapshots(t1, s3).data() - a.data()).norm() > 0.0);
}

TEST_CASE("generate_snapshots - empirical covariance of 1e5 snapshots")
{
    ScenarioSpec spec;
    spec.snapshots = 100000;
    RandomStream mrng(8);
    ScenarioTruth t = realize_scenario(spec, mrng);
    RandomStream rng(9);
    HermitianMatrix r = sample_covariance(generate_snapshots(t, rng));
    HermitianMatrix truth = theoretical_covariance(t);
    CHECK((r.matrix() - truth.matrix()).norm() / truth.matrix().norm() < 0.02);
}

TEST_CASE("SnapshotSet - construction and concat")
{
    CHECK_THROWS_AS(SnapshotSet(CMatrix(3, 0)), Error);
    CHECK_THROWS_AS(SnapshotSet::from_vectors({CVector::Ones(3), CVector::Ones(2)}), Error);
    SnapshotSet a(CMatrix::Ones(3, 2));
    SnapshotSet b(CMatrix::Zero(3, 4));
    SnapshotSet c = a.concat(b);
    CHECK(c.snapshot_count() == 6);
    CHECK(c.data().leftCols(2) == a.data());
    CHECK_THROWS_AS(a.concat(SnapshotSet(CMatrix::Ones(2, 1))), Error);
}
