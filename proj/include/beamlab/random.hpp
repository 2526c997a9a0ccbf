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

#include <cstdint>
#include <random>

namespace beamlab
{

// Stream identifiers used when deriving per-trial sub-streams.
enum class StreamId : std::uint64_t
{
    mismatch = 1,
    snapshots = 2,
    user = 64
};

/// Seeded, splittable random source.
///
/// A stream is identified by a 64-bit key. split(id) derives an independent
/// child stream from the key without consuming state, so the same
/// (seed, trial, stream) triple always yields the same draws no matter which
/// worker thread evaluates it.
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t key);

    static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial, StreamId stream);

    RandomStream split(std::uint64_t id) const;
    std::uint64_t key() const noexcept { return key_; }

    double uniform(double lo, double hi);
    double normal(double mean = 0.0, double stddev = 1.0);
    // Circular complex Gaussian with E|z|^2 = variance.
    cdouble complex_normal(double variance);
    std::uint64_t next_u64() { return engine_(); }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; bijective 64-bit mixing.
std::uint64_t mix64(std::uint64_t x);

} // namespace beamlab
