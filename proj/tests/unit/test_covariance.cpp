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
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace beamlab;

namespace
{

ScenarioTruth default_truth(std::uint64_t seed = 1)
{
    ScenarioSpec spec;
    RandomStream rng = RandomStream::for_trial(seed, 0, StreamId::mismatch);
    return realize_scenario(spec, rng);
}

} // namespace

TEST_CASE("sample_covariance - small exact cases")
{
    CMatrix x(2, 1);
    x << cdouble(1, 0), cdouble(0, 1);
    HermitianMatrix r = sample_covariance(SnapshotSet(x));
    CMatrix expected(2, 2);
    expected << cdouble(1, 0), cdouble(0, -1), cdouble(0, 1), cdouble(1, 0);
    CHECK((r.matrix() - expected).norm() == 0.0);

    HermitianMatrix half = sample_covariance(SnapshotSet(CMatrix::Identity(2, 2)));
    CHECK((half.matrix() - 0.5 * CMatrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("sample_covariance - trace of the default scenario")
{
    // Unit-norm steering vectors: E tr(R) = sigma_s^2 + sum sigma_p^2 + L sigma_n^2.
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        ScenarioTruth t = default_truth(seed);
        RandomStream rng = RandomStream::for_trial(seed, 0, StreamId::snapshots);
        HermitianMatrix r = sample_covariance(generate_snapshots(t, rng));
        const double expected = t.soi_power + t.interferer_powers[0] + t.interferer_powers[1] + 12.0 * t.noise_power;
        CHECK(r.trace() >= 0.8 * expected);
        CHECK(r.trace() <= 1.2 * expected);
        CHECK(std::abs(r.trace() - theoretical_covariance(t).trace()) < 0.2 * expected);
    }
}

TEST_CASE("sample_covariance - Hermitian, PSD and rank bound on random data")
{
    RandomStream rng(77);
    for (int i = 0; i < 200; ++i)
    {
        const Index L = 2 + static_cast<Index>(rng.next_u64() % 10);
        const Index K = 1 + static_cast<Index>(rng.next_u64() % 15);
        HermitianMatrix r = sample_covariance(SnapshotSet(testing::random_matrix(rng, L, K)));
        CHECK(hermitian_defect(r.matrix()) <= 1e-12);
        CHECK(is_numerically_psd(r));
        CHECK(numerical_rank(r) <= std::min(L, K));
    }
}

TEST_CASE("sample_covariance - union of snapshot sets")
{
    RandomStream rng(13);
    for (int i = 0; i < 100; ++i)
    {
        const Index L = 2 + static_cast<Index>(rng.next_u64() % 8);
        const Index K1 = 1 + static_cast<Index>(rng.next_u64() % 20);
        const Index K2 = 1 + static_cast<Index>(rng.next_u64() % 20);
        SnapshotSet a(testing::random_matrix(rng, L, K1));
        SnapshotSet b(testing::random_matrix(rng, L, K2));
        CMatrix joint = sample_covariance(a.concat(b)).matrix() * static_cast<double>(K1 + K2);
        CMatrix parts = sample_covariance(a).matrix() * static_cast<double>(K1) +
                        sample_covariance(b).matrix() * static_cast<double>(K2);
        CHECK((joint - parts).norm() <= 1e-12 * parts.norm());
    }
}

TEST_CASE("theoretical_covariance - noise only and rank one")
{
    ScenarioSpec spec;
    spec.interferer_doas_deg.clear();
    spec.inr_db.clear();
    spec.noise_power = 2.5;
    RandomStream rng(1);
    ScenarioTruth t = realize_scenario(spec, rng);
    t.soi_power = 0.0;
    CHECK((theoretical_covariance(t).matrix() - 2.5 * CMatrix::Identity(12, 12)).norm() == 0.0);
    CHECK((theoretical_ipnc(t).matrix() - 2.5 * CMatrix::Identity(12, 12)).norm() == 0.0);

    ScenarioSpec one;
    one.interferer_doas_deg = {40.0};
    one.inr_db = {20.0};
    one.noise_power = 1.0;
    RandomStream rng2(1);
    ScenarioTruth u = realize_scenario(one, rng2);
    u.noise_power = 0.0;
    u.soi_power = 0.0;
    HermitianMatrix r = theoretical_covariance(u);
    RVector ev = r.eigenvalues();
    CHECK(numerical_rank(r) == 1);
    CHECK(ev(11) == Catch::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("theoretical_ipnc - identity with the full covariance")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        for (auto kind : {MismatchKind::none, MismatchKind::look_direction, MismatchKind::random_sv,
                          MismatchKind::gain_phase, MismatchKind::geometry})
        {
            ScenarioSpec spec;
            spec.snr_db = 10.0;
            spec.mismatch.kind = kind;
            RandomStream rng = RandomStream::for_trial(seed, 0, StreamId::mismatch);
            ScenarioTruth t = realize_scenario(spec, rng);
            CMatrix lhs = theoretical_ipnc(t).matrix() + t.soi_power * t.soi_sv * t.soi_sv.adjoint();
            CHECK((lhs - theoretical_covariance(t).matrix()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("theoretical_ipnc - noise floor eigenvalues")
{
    ScenarioTruth t = default_truth();
    RVector ev = theoretical_ipnc(t).eigenvalues();
    for (Index i = 0; i < 10; ++i)
        CHECK(std::abs(ev(i) - 1.0) < 1e-10);
    CHECK(ev(10) > 100.0);
}

TEST_CASE("theoretical_covariance - agrees with 1e6 snapshots")
{
    ScenarioSpec spec;
    spec.snapshots = 1000000;
    RandomStream mrng(4);
    ScenarioTruth t = realize_scenario(spec, mrng);
    RandomStream rng(5);
    HermitianMatrix r = sample_covariance(generate_snapshots(t, rng));
    const CMatrix truth = theoretical_covariance(t).matrix();
    CHECK((r.matrix() - truth).norm() / truth.norm() < 0.01);
}

TEST_CASE("pearson_correlation - fixed complex matrices")
{
    CMatrix a = testing::matrix_from(oracle::pearson_a_re, oracle::pearson_a_im, 3);
    CMatrix b = testing::matrix_from(oracle::pearson_b_re, oracle::pearson_b_im, 3);
    RMatrix c = pearson_correlation(a, b);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            CHECK(std::abs(c(i, j) - oracle::pearson_ab[static_cast<std::size_t>(i * 3 + j)]) < 1e-12);
}

TEST_CASE("pearson_correlation - self correlation and affine invariance")
{
    RandomStream rng(21);
    for (int i = 0; i < 100; ++i)
    {
        const Index L = 2 + static_cast<Index>(rng.next_u64() % 10);
        HermitianMatrix a = testing::random_psd(rng, L, L, 0.1);
        RMatrix self = pearson_correlation(a, a);
        for (Index k = 0; k < L; ++k)
            CHECK(self(k, k) == 1.0);
        CHECK(self.cwiseAbs().maxCoeff() <= 1.0);

        // 2A + d(1 + j) per column shifts every stacked [Re; Im] entry by d.
        CMatrix b = 2.0 * a.matrix();
        for (Index k = 0; k < L; ++k)
        {
            const double d = rng.normal(0.0, 3.0);
            b.col(k).array() += cdouble(d, d);
        }
        RMatrix scaled = pearson_correlation(a.matrix(), b);
        for (Index k = 0; k < L; ++k)
            CHECK(scaled(k, k) == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pearson_correlation - swap transposes the result")
{
    RandomStream rng(8);
    for (int i = 0; i < 100; ++i)
    {
        const Index L = 2 + static_cast<Index>(rng.next_u64() % 8);
        CMatrix a = testing::random_matrix(rng, L, L);
        CMatrix b = testing::random_matrix(rng, L, L);
        CHECK((pearson_correlation(a, b) - pearson_correlation(b, a).transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("pearson_correlation - errors")
{
    CMatrix a = CMatrix::Constant(3, 3, cdouble(1.0, 1.0));
    CMatrix b = CMatrix::Random(3, 3);
    try
    {
        pearson_correlation(a, b);
        FAIL("expected undefined_correlation");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::undefined_correlation);
    }
    CHECK_THROWS_AS(pearson_correlation(CMatrix::Random(3, 3), CMatrix::Random(2, 2)), Error);
}
