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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beamlab
{

enum class ErrorCode
{
    invalid_geometry,
    invalid_scenario,
    invalid_argument,
    dimension,
    undefined_correlation,
    insufficient_peaks,
    insufficient_data,
    invalid_sectors,
    degenerate_shrinkage,
    singular_matrix,
    null_start,
    rank_deficient,
    io,
    config
};

// Stable machine-readable name, used in CSV failure columns and CLI error lines.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Thrown by the DFT peak search when fewer peaks than requested are found.
class InsufficientPeaksError : public Error
{
public:
    InsufficientPeaksError(std::size_t requested, std::size_t found);

    std::size_t requested() const noexcept { return requested_; }
    std::size_t found() const noexcept { return found_; }

private:
    std::size_t requested_;
    std::size_t found_;
};

} // namespace beamlab
