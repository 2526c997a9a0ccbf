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

#include "beamlab/error.hpp"
#include "beamlab/linalg.hpp"
#include "test_support.hpp"

using namespace beamlab;

TEST_CASE("HermitianMatrix - symmetrizes its input")
{
    RandomStream rng(1);
    for (int i = 0; i < 100; ++i)
    {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 12);
        CMatrix m = testing::random_matrix(rng, n, n);
        HermitianMatrix h(m);
        CHECK(hermitian_defect(h.matrix()) == 0.0);
        for (Index k = 0; k < n; ++k)
            CHECK(h(k, k).imag() == 0.0);
        CHECK((h.matrix() - 0.5 * (m + m.adjoint())).norm() < 1e-15 * std::max(1.0, m.norm()));
    }
    CHECK_THROWS_AS(HermitianMatrix(CMatrix::Zero(2, 3)), Error);
}

TEST_CASE("HermitianMatrix - arithmetic and trace")
{
    HermitianMatrix a = HermitianMatrix::identity(3, 2.0);
    HermitianMatrix b = HermitianMatrix::zero(3);
    CHECK((a + b).trace() == 6.0);
    CHECK((a - a).frobenius_norm_sq() == 0.0);
    CHECK((0.5 * a).trace() == 3.0);
    CHECK(a.frobenius_norm_sq() == 12.0);
    CHECK_THROWS_AS(a + HermitianMatrix::zero(2), Error);
}

TEST_CASE("HermitianMatrix - eigenvalues ascending and real")
{
    RandomStream rng(2);
    HermitianMatrix h = testing::random_psd(rng, 6, 3);
    RVector ev = h.eigenvalues();
    for (Index i = 1; i < ev.size(); ++i)
        CHECK(ev(i) >= ev(i - 1));
    CHECK(std::abs(ev.sum() - h.trace()) < 1e-10 * h.trace());
}

TEST_CASE("numerical_rank and PSD check")
{
    RandomStream rng(3);
    for (Index r = 1; r <= 6; ++r)
    {
        HermitianMatrix h = testing::random_psd(rng, 8, r);
        CHECK(numerical_rank(h) == r);
        CHECK(is_numerically_psd(h));
    }
    CHECK(numerical_rank(HermitianMatrix::zero(4)) == 0);
    CHECK_FALSE(is_numerically_psd(HermitianMatrix::identity(3, -1.0)));
}

TEST_CASE("dB helpers round trip")
{
    for (double db : {-30.0, -3.0, 0.0, 10.0, 42.5})
        CHECK(db10(from_db10(db)) == Catch::Approx(db).margin(1e-12));
    CHECK(deg_to_rad(180.0) == Catch::Approx(std::numbers::pi));
    CHECK(rad_to_deg(std::numbers::pi / 2) == Catch::Approx(90.0));
}
