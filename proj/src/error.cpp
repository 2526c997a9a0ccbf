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

#include "beamlab/error.hpp"

namespace beamlab
{

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::invalid_geometry:
        return "invalid_geometry";
    case ErrorCode::invalid_scenario:
        return "invalid_scenario";
    case ErrorCode::invalid_argument:
        return "invalid_argument";
    case ErrorCode::dimension:
        return "dimension";
    case ErrorCode::undefined_correlation:
        return "undefined_correlation";
    case ErrorCode::insufficient_peaks:
        return "insufficient_peaks";
    case ErrorCode::insufficient_data:
        return "insufficient_data";
    case ErrorCode::invalid_sectors:
        return "invalid_sectors";
    case ErrorCode::degenerate_shrinkage:
        return "degenerate_shrinkage";
    case ErrorCode::singular_matrix:
        return "singular_matrix";
    case ErrorCode::null_start:
        return "null_start";
    case ErrorCode::rank_deficient:
        return "rank_deficient";
    case ErrorCode::io:
        return "io";
    case ErrorCode::config:
        return "config";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(message), code_(code)
{
}

InsufficientPeaksError::InsufficientPeaksError(std::size_t requested, std::size_t found)
    : Error(ErrorCode::insufficient_peaks,
            "found " + std::to_string(found) + " spectral peaks, " + std::to_string(requested) + " requested"),
      requested_(requested), found_(found)
{
}

} // namespace beamlab
