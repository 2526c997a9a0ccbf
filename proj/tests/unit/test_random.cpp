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

#include "beamlab/random.hpp"

#include <set>

using namespace beamlab;

TEST_CASE("RandomStream - same key, same draws")
{
    RandomStream a = RandomStream::for_trial(1, 5, StreamId::snapshots);
    RandomStream b = RandomStream::for_trial(1, 5, StreamId::snapshots);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("RandomStream - streams differ across seed, trial and id")
{
    std::set<std::uint64_t> keys;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (std::uint64_t trial = 0; trial < 10; ++trial)
            for (auto id : {StreamId::mismatch, StreamId::snapshots, StreamId::user})
                keys.insert(RandomStream::for_trial(seed, trial, id).key());
    CHECK(keys.size() == 300);
}

TEST_CASE("RandomStream - split does not consume state")
{
    RandomStream a(99);
    RandomStream b(99);
    RandomStream child = a.split(3);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(child.key() == b.split(3).key());
    CHECK(a.split(3).key() != a.split(4).key());
}

TEST_CASE("RandomStream - moments")
{
    RandomStream rng(123);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0, sc = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double u = rng.uniform(-2.0, 4.0);
        CHECK((u >= -2.0 && u < 4.0));
        su += u;
        const double z = rng.normal(1.0, 2.0);
        sn += z;
        sn2 += (z - 1.0) * (z - 1.0);
        sc += std::norm(rng.complex_normal(3.0));
    }
    CHECK(su / n == Catch::Approx(1.0).margin(0.02));
    CHECK(sn / n == Catch::Approx(1.0).margin(0.02));
    CHECK(sn2 / n == Catch::Approx(4.0).margin(0.05));
    CHECK(sc / n == Catch::Approx(3.0).margin(0.05));
}

TEST_CASE("mix64 - distinct outputs for nearby inputs")
{
    std::set<std::uint64_t> out;
    for (std::uint64_t i = 0; i < 10000; ++i)
        out.insert(mix64(i));
    CHECK(out.size() == 10000);
}
