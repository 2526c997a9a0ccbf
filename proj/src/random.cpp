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

#include "beamlab/random.hpp"

#include <cmath>

namespace beamlab
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t key) : key_(key)
{
    std::seed_seq seq{static_cast<std::uint32_t>(key & 0xffffffffULL), static_cast<std::uint32_t>(key >> 32)};
    engine_.seed(seq);
}

RandomStream RandomStream::for_trial(std::uint64_t seed, std::uint64_t trial, StreamId stream)
{
    return RandomStream(mix64(mix64(mix64(seed) ^ trial) ^ static_cast<std::uint64_t>(stream)));
}

RandomStream RandomStream::split(std::uint64_t id) const
{
    return RandomStream(mix64(key_ ^ mix64(id + 0x632be59bd9b4e019ULL)));
}

// Draws go through the raw engine rather than std::*_distribution so the
// sequence does not depend on the standard library implementation.
double RandomStream::uniform(double lo, double hi)
{
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double RandomStream::normal(double mean, double stddev)
{
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

cdouble RandomStream::complex_normal(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal(0.0, s);
    const double im = normal(0.0, s);
    return {re, im};
}

} // namespace beamlab
