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

#include <filesystem>
#include <string>
#include <vector>

namespace beamlab
{

// Round-trip representation of a double ("%.17g").
std::string format_double(double value);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name, throws io when absent.
    std::size_t column(const std::string &name) const;
};

void write_csv(const std::filesystem::path &path, const CsvTable &table);
CsvTable read_csv(const std::filesystem::path &path);

// Complex matrix with interleaved columns c0_re, c0_im, c1_re, ...
void write_complex_matrix_csv(const std::filesystem::path &path, const CMatrix &m);
void write_real_matrix_csv(const std::filesystem::path &path, const RMatrix &m);

// Two columns: theta_deg, gain_db = 20 log10 D.
void write_beampattern_csv(const std::filesystem::path &path, const std::vector<double> &grid_deg,
                           const std::vector<double> &magnitude);

// Creates the directory if needed and probes that a file can be written in it.
// Throws io otherwise.
void ensure_writable_directory(const std::filesystem::path &dir);

} // namespace beamlab
